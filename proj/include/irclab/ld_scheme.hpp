#ifndef IRCLAB_LD_SCHEME_HPP
#define IRCLAB_LD_SCHEME_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "irclab/ld_channel.hpp"

namespace irclab::ld {

// Level assignment for the block-Markov scheme.  All levels are 0-based with
// 0 the top (strongest) level; the same layout is used by both transmitters
// except for the decode-forward bits, which are placed per user.
//
// A decode-forward bit either occupies a level of its own (the partner stays
// silent there so the relay hears it cleanly) or rides XORed on top of one of
// its own user's current neutralization levels; in the latter case the relay
// recovers it by subtracting the known current sum.  At most one rider may sit
// on a given split.
struct Allocation {
    struct DfSlot {
        bool rider = false;
        int index = 0; // split index when rider, absolute level otherwise
    };

    int cf_count = 0;                        // compute-forward bits per user
    int cn_count = 0;                        // neutralization splits per user
    int df_count = 0;                        // decode-forward bits per user

    std::vector<int> cf_levels;              // shared by both users
    std::vector<int> cn_levels;              // current splits, shared
    std::vector<int> cn_future_levels;       // next-block copies, shared
    std::array<std::vector<DfSlot>, 2> df;   // per user

    // Relay transmit map.
    std::array<std::vector<int>, 2> relay_df_levels;
    std::vector<int> relay_cf_sum_levels;
    std::vector<int> relay_cn_sum_levels;

    int bits_per_user() const { return cf_count + cn_count + df_count; }
    int total_bits_per_block() const { return 2 * bits_per_user(); }
};

struct ValidationReport {
    bool ok = true;
    std::string first_violation; // empty when ok
};

struct SimReport {
    int blocks = 0;
    std::uint64_t seed = 0;
    long errors = 0;
    long cf_bits = 0;  // delivered across both users, all blocks
    long cn_bits = 0;
    long df_bits = 0;
    long delivered_bits = 0;
    double normalized_gdof = 0.0; // delivered / (blocks * nd)
    ValidationReport validation;  // propagated from validate_allocation
};

LdParams toy_params();

// The worked example layout: per user one compute-forward bit, two current
// neutralization splits, one decode-forward bit riding a split, and the two
// next-block copies on the lowest relay-visible levels.
Allocation toy_allocation();

// Static feasibility checks: per-transmitter collisions, relay causality and
// decodability, receiver decode order, and the neutralization alignment.
ValidationReport validate_allocation(const Allocation& a, const LdParams& p);

// Level-counting constructor for the supported strong-interference channels
// (nd < nc < ns with nc < nr and an integral capacity target).  Throws
// unsupported_regime_error with the target attached when it cannot reach the
// capacity value exactly.
Allocation construct_allocation(const LdParams& p);

// End-to-end run over blocks 1..B plus an initialization slot (future copies
// only) and a terminal relay-only slot that flushes the last block's
// compute-/decode-forward bits.  Deterministic given the seed.  Invalid
// allocations are run mechanically and surface as decoding mismatches.
SimReport simulate(const LdParams& p, const Allocation& a, int blocks,
                   std::uint64_t seed, std::ostream* trace = nullptr);

// Relay transmit vectors per slot (0..blocks+1) for the same run simulate
// would perform.  The relay's slot-b output is a function of its receptions
// in slots before b only; truncated reruns must reproduce a common prefix.
std::vector<BitVector> relay_transmissions(const LdParams& p, const Allocation& a, int blocks,
                                           std::uint64_t seed);

struct SearchResult {
    std::optional<Allocation> best;
    int total_bits = 0;
    bool exhausted = false; // enumeration cap hit, best-so-far returned
    long candidates = 0;
};

// Brute-force enumeration of category sizes and placements, keeping the
// highest-throughput allocation that passes validation and a smoke run.
SearchResult search_allocation(const LdParams& p, long budget = 200000);

void write_sim_csv(std::ostream& os, const LdParams& p, const SimReport& r);

} // namespace irclab::ld

#endif
