#include "irclab/ld_channel.hpp"

#include <algorithm>
#include <sstream>

#include "irclab/errors.hpp"

namespace irclab::ld {

LdParams LdParams::make(int nd, int nc, int nr, int ns) {
    LdParams p;
    p.nd = nd;
    p.nc = nc;
    p.nr = nr;
    p.ns = ns;
    p.q = std::max(std::max(nd, nc), std::max(nr, ns));
    if (!p.valid()) throw validation_error("LdParams: levels must be nonnegative");
    return p;
}

bool LdParams::valid() const {
    return nd >= 0 && nc >= 0 && nr >= 0 && ns >= 0 &&
           q == std::max(std::max(nd, nc), std::max(nr, ns));
}

BitVector BitVector::operator^(const BitVector& o) const {
    if (bits.size() != o.bits.size())
        throw validation_error("BitVector: length mismatch in xor");
    BitVector r(size());
    for (int i = 0; i < size(); ++i) r[i] = bits[static_cast<size_t>(i)] ^ o[i];
    return r;
}

bool BitVector::all_zero() const {
    return std::all_of(bits.begin(), bits.end(), [](std::uint8_t b) { return b == 0; });
}

BitVector shift_apply(const BitVector& x, int n, int q) {
    if (x.size() != q) throw validation_error("shift_apply: vector length differs from q");
    if (n < 0 || n > q) throw validation_error("shift_apply: level out of range");
    BitVector y(q);
    for (int i = 0; i < n; ++i) y[q - n + i] = x[i];
    return y;
}

BitVector rx_signal(const BitVector& xj, const BitVector& xl, const BitVector& xr,
                    const LdParams& p) {
    if (xj.size() != p.q || xl.size() != p.q || xr.size() != p.q)
        throw validation_error("rx_signal: vector length differs from q");
    return shift_apply(xj, p.nd, p.q) ^ shift_apply(xl, p.nc, p.q) ^ shift_apply(xr, p.nr, p.q);
}

BitVector relay_rx(const BitVector& x1, const BitVector& x2, const LdParams& p) {
    if (x1.size() != p.q || x2.size() != p.q)
        throw validation_error("relay_rx: vector length differs from q");
    return shift_apply(x1 ^ x2, p.ns, p.q);
}

std::string render_column(const BitVector& x, const std::string& title) {
    std::ostringstream os;
    os << title << '\n';
    for (int i = 0; i < x.size(); ++i)
        os << "  L" << (i + 1) << " | " << static_cast<int>(x[i]) << '\n';
    return os.str();
}

} // namespace irclab::ld
