#include <doctest.h>

#include <random>

#include "irclab/errors.hpp"
#include "irclab/ld_channel.hpp"

using namespace irclab;
using namespace irclab::ld;

namespace {

BitVector random_vec(int q, std::mt19937_64& rng) {
    BitVector v(q);
    for (int i = 0; i < q; ++i) v[i] = static_cast<std::uint8_t>(rng() & 1u);
    return v;
}

} // namespace

TEST_CASE("shift basics") {
    std::mt19937_64 rng(3);
    const BitVector x = random_vec(6, rng);
    CHECK(shift_apply(x, 6, 6) == x);
    CHECK(shift_apply(x, 0, 6).all_zero());

    BitVector named(6);
    for (int i = 0; i < 6; ++i) named[i] = static_cast<std::uint8_t>(i % 2); // (0,1,0,1,0,1)
    const BitVector shifted = shift_apply(named, 2, 6);
    // top two bits land on the bottom two positions
    CHECK(shifted[0] == 0);
    CHECK(shifted[1] == 0);
    CHECK(shifted[2] == 0);
    CHECK(shifted[3] == 0);
    CHECK(shifted[4] == named[0]);
    CHECK(shifted[5] == named[1]);

    CHECK_THROWS_AS(shift_apply(x, 7, 6), validation_error);
    CHECK_THROWS_AS(shift_apply(x, -1, 6), validation_error);
    CHECK_THROWS_AS(shift_apply(BitVector(5), 2, 6), validation_error);
}

TEST_CASE("double shift composes to a deeper shift") {
    std::mt19937_64 rng(5);
    for (int q = 1; q <= 8; ++q) {
        for (int n = 0; n <= q; ++n) {
            const BitVector x = random_vec(q, rng);
            const BitVector twice = shift_apply(shift_apply(x, n, q), n, q);
            const BitVector once = shift_apply(x, std::max(2 * n - q, 0), q);
            CHECK(twice == once);
        }
    }
}

TEST_CASE("destination signal composition") {
    const LdParams p = LdParams::make(2, 3, 6, 5);
    std::mt19937_64 rng(7);

    SUBCASE("all-zero inputs stay zero") {
        const BitVector z(p.q);
        CHECK(rx_signal(z, z, z, p).all_zero());
    }
    SUBCASE("aligned cross and relay copies cancel") {
        // with nc == nr the interferer and relay columns collide level by level
        const LdParams eq = LdParams::make(2, 4, 4, 5);
        const BitVector z(eq.q);
        const BitVector x = random_vec(eq.q, rng);
        CHECK(rx_signal(z, x, x, eq).all_zero());
    }
    SUBCASE("toy arrivals land where the level map says") {
        // one bit on each transmitter's top level
        BitVector xj(p.q), xl(p.q), xr(p.q);
        xj[0] = 1;
        xl[0] = 1;
        xr[0] = 1;
        const BitVector y = rx_signal(xj, xl, xr, p);
        // direct top level arrives at q-nd, cross at q-nc, relay at q-nr
        CHECK(y[p.q - p.nd] == 1);
        CHECK(y[p.q - p.nc] == 1);
        CHECK(y[p.q - p.nr] == 1);
    }
    SUBCASE("length mismatch rejected") {
        CHECK_THROWS_AS(rx_signal(BitVector(5), BitVector(6), BitVector(6), p),
                        validation_error);
    }
}

TEST_CASE("relay observation") {
    const LdParams p = LdParams::make(2, 3, 6, 5);
    std::mt19937_64 rng(9);
    const BitVector x = random_vec(p.q, rng);

    CHECK(relay_rx(x, x, p).all_zero());
    CHECK(relay_rx(x, BitVector(p.q), p) == shift_apply(x, p.ns, p.q));

    // future copies on transmit levels 4 and 5 (1-based) surface on the two
    // lowest relay levels
    BitVector x1(p.q), x2(p.q);
    x1[3] = 1;
    x2[4] = 1;
    const BitVector yr = relay_rx(x1, x2, p);
    CHECK(yr[4] == 1);
    CHECK(yr[5] == 1);
    CHECK(yr[0] == 0);
}

TEST_CASE("linearity of the destination map") {
    const LdParams p = LdParams::make(2, 3, 6, 5);
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 200; ++trial) {
        const BitVector x = random_vec(p.q, rng), xp = random_vec(p.q, rng);
        const BitVector y = random_vec(p.q, rng), z = random_vec(p.q, rng);
        const BitVector zero(p.q);
        const BitVector lhs = rx_signal(x ^ xp, y, z, p);
        const BitVector rhs = rx_signal(x, y, z, p) ^ rx_signal(xp, zero, zero, p);
        CHECK(lhs == rhs);
    }
}

TEST_CASE("column rendering") {
    BitVector v(3);
    v[0] = 1;
    const std::string s = render_column(v, "tx");
    CHECK(s.find("tx") != std::string::npos);
    CHECK(s.find("L1 | 1") != std::string::npos);
    CHECK(s.find("L3 | 0") != std::string::npos);
}
