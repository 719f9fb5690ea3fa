#ifndef IRCLAB_LD_CHANNEL_HPP
#define IRCLAB_LD_CHANNEL_HPP

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace irclab::ld {

// Integer channel levels of the deterministic model.  q is the common vector
// length, max of the four levels.
struct LdParams {
    int nd = 0; // desired link
    int nc = 0; // cross link
    int nr = 0; // relay -> destination
    int ns = 0; // source -> relay
    int q = 0;

    static LdParams make(int nd, int nc, int nr, int ns);
    bool valid() const;
};

// Length-q binary column.  Index 0 is the top (strongest) level, matching the
// reading order of the usual level diagrams.
struct BitVector {
    std::vector<std::uint8_t> bits;

    BitVector() = default;
    explicit BitVector(int q) : bits(static_cast<size_t>(q), 0) {}

    int size() const { return static_cast<int>(bits.size()); }
    std::uint8_t& operator[](int i) { return bits[static_cast<size_t>(i)]; }
    std::uint8_t operator[](int i) const { return bits[static_cast<size_t>(i)]; }

    bool operator==(const BitVector& o) const { return bits == o.bits; }
    BitVector operator^(const BitVector& o) const;
    bool all_zero() const;
};

// Down-shift by q-n: the top n bits of x land on the bottom n positions,
// everything else is annihilated.  n = q is the identity, n = 0 the zero map.
BitVector shift_apply(const BitVector& x, int n, int q);

// Destination observation: shifted own signal + shifted interferer + shifted
// relay signal, all over GF(2).
BitVector rx_signal(const BitVector& xj, const BitVector& xl, const BitVector& xr,
                    const LdParams& p);

// Relay observation: shift of the XOR of the two transmit vectors.
BitVector relay_rx(const BitVector& x1, const BitVector& x2, const LdParams& p);

// One level per line, top first; used by the CLI trace mode.
std::string render_column(const BitVector& x, const std::string& title);

} // namespace irclab::ld

#endif
