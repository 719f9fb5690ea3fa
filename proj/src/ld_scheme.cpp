#include "irclab/ld_scheme.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "irclab/errors.hpp"
#include "irclab/gdof.hpp"

namespace irclab::ld {

namespace {

// What a transmitter puts on one of its levels.
struct TxItem {
    enum class Kind { Cf, Cn, CnFut, Df } kind;
    int index = 0; // cf index / split / df slot
};

std::vector<TxItem> tx_items_at(const Allocation& a, int user, int level) {
    std::vector<TxItem> items;
    for (int i = 0; i < a.cf_count; ++i)
        if (a.cf_levels[static_cast<size_t>(i)] == level)
            items.push_back({TxItem::Kind::Cf, i});
    for (int w = 0; w < a.cn_count; ++w)
        if (a.cn_levels[static_cast<size_t>(w)] == level)
            items.push_back({TxItem::Kind::Cn, w});
    for (int w = 0; w < a.cn_count; ++w)
        if (a.cn_future_levels[static_cast<size_t>(w)] == level)
            items.push_back({TxItem::Kind::CnFut, w});
    const auto& slots = a.df[static_cast<size_t>(user)];
    for (int k = 0; k < static_cast<int>(slots.size()); ++k) {
        const auto& s = slots[static_cast<size_t>(k)];
        const int lvl = s.rider ? a.cn_levels[static_cast<size_t>(s.index)] : s.index;
        if (lvl == level) items.push_back({TxItem::Kind::Df, k});
    }
    return items;
}

struct RelayItem {
    enum class Kind { DfFwd, CfSum, CnSum } kind;
    int user = 0; // DfFwd only
    int index = 0;
};

std::optional<RelayItem> relay_item_at(const Allocation& a, int level) {
    for (int u = 0; u < 2; ++u)
        for (int k = 0; k < static_cast<int>(a.relay_df_levels[static_cast<size_t>(u)].size()); ++k)
            if (a.relay_df_levels[static_cast<size_t>(u)][static_cast<size_t>(k)] == level)
                return RelayItem{RelayItem::Kind::DfFwd, u, k};
    for (int i = 0; i < static_cast<int>(a.relay_cf_sum_levels.size()); ++i)
        if (a.relay_cf_sum_levels[static_cast<size_t>(i)] == level)
            return RelayItem{RelayItem::Kind::CfSum, 0, i};
    for (int w = 0; w < static_cast<int>(a.relay_cn_sum_levels.size()); ++w)
        if (a.relay_cn_sum_levels[static_cast<size_t>(w)] == level)
            return RelayItem{RelayItem::Kind::CnSum, 0, w};
    return std::nullopt;
}

// Block index carried by an item in a given slot, if any.  Slots run 0..B+1;
// message blocks run 1..B.  Slot 0 carries only next-block copies, slot B only
// current content, slot B+1 nothing (relay flush).
std::optional<int> item_block(TxItem::Kind kind, int slot, int blocks) {
    if (kind == TxItem::Kind::CnFut) {
        if (slot >= 0 && slot <= blocks - 1) return slot + 1;
        return std::nullopt;
    }
    if (slot >= 1 && slot <= blocks) return slot;
    return std::nullopt;
}

struct Messages {
    // [user][block] with block 0 and B+1 unused.
    std::vector<std::vector<std::uint8_t>> cf[2], cn[2], df[2];
};

Messages draw_messages(const Allocation& a, int blocks, std::uint64_t seed) {
    Messages m;
    std::mt19937_64 rng(seed);
    auto bit = [&rng]() { return static_cast<std::uint8_t>(rng() & 1u); };
    for (int u = 0; u < 2; ++u) {
        m.cf[u].resize(static_cast<size_t>(blocks) + 2);
        m.cn[u].resize(static_cast<size_t>(blocks) + 2);
        m.df[u].resize(static_cast<size_t>(blocks) + 2);
    }
    // Block-major order keeps a truncated rerun's messages a prefix of the
    // longer run's, which the causality check relies on.
    for (int b = 1; b <= blocks; ++b)
        for (int u = 0; u < 2; ++u) {
            for (int i = 0; i < a.cf_count; ++i) m.cf[u][static_cast<size_t>(b)].push_back(bit());
            for (int w = 0; w < a.cn_count; ++w) m.cn[u][static_cast<size_t>(b)].push_back(bit());
            for (int k = 0; k < a.df_count; ++k) m.df[u][static_cast<size_t>(b)].push_back(bit());
        }
    return m;
}

BitVector encode_tx(const Allocation& a, const LdParams& p, const Messages& m, int user,
                    int slot, int blocks) {
    BitVector x(p.q);
    for (int lvl = 0; lvl < p.q; ++lvl) {
        std::uint8_t v = 0;
        for (const TxItem& it : tx_items_at(a, user, lvl)) {
            const auto b = item_block(it.kind, slot, blocks);
            if (!b) continue;
            switch (it.kind) {
            case TxItem::Kind::Cf:
                v ^= m.cf[user][static_cast<size_t>(*b)][static_cast<size_t>(it.index)];
                break;
            case TxItem::Kind::Cn:
            case TxItem::Kind::CnFut:
                v ^= m.cn[user][static_cast<size_t>(*b)][static_cast<size_t>(it.index)];
                break;
            case TxItem::Kind::Df:
                v ^= m.df[user][static_cast<size_t>(*b)][static_cast<size_t>(it.index)];
                break;
            }
        }
        x[lvl] = v;
    }
    return x;
}

// Received level of a transmit level through a channel of strength n, or -1
// when it falls below the noise floor.
int through(int level, int n, int q) {
    if (level >= n) return -1;
    return level + (q - n);
}

struct RelayState {
    // Indexed by block; filled as the relay decodes.
    std::vector<std::vector<std::uint8_t>> cn_sums;            // [block][split]
    std::vector<std::vector<std::uint8_t>> cf_sums;            // [block][cf index]
    std::vector<std::array<std::vector<std::uint8_t>, 2>> dfb; // [block][user][slot]
};

BitVector encode_relay(const Allocation& a, const LdParams& p, const RelayState& st, int slot,
                       int blocks) {
    BitVector x(p.q);
    const int prev = slot - 1;
    if (prev >= 1 && prev <= blocks) {
        for (int i = 0; i < a.cf_count; ++i)
            x[a.relay_cf_sum_levels[static_cast<size_t>(i)]] ^=
                st.cf_sums[static_cast<size_t>(prev)][static_cast<size_t>(i)];
        for (int u = 0; u < 2; ++u)
            for (int k = 0; k < a.df_count; ++k)
                x[a.relay_df_levels[static_cast<size_t>(u)][static_cast<size_t>(k)]] ^=
                    st.dfb[static_cast<size_t>(prev)][static_cast<size_t>(u)][static_cast<size_t>(k)];
    }
    if (slot >= 1 && slot <= blocks) {
        for (int w = 0; w < a.cn_count; ++w)
            x[a.relay_cn_sum_levels[static_cast<size_t>(w)]] ^=
                st.cn_sums[static_cast<size_t>(slot)][static_cast<size_t>(w)];
    }
    return x;
}

void relay_process(const Allocation& a, const LdParams& p, const BitVector& yr, RelayState& st,
                   int slot, int blocks) {
    auto read = [&](int tx_level) -> std::uint8_t {
        const int r = through(tx_level, p.ns, p.q);
        return r < 0 ? std::uint8_t{0} : yr[r];
    };
    if (slot <= blocks - 1) {
        // Next block's sums arrive on the future-copy levels.
        for (int w = 0; w < a.cn_count; ++w)
            st.cn_sums[static_cast<size_t>(slot) + 1][static_cast<size_t>(w)] =
                read(a.cn_future_levels[static_cast<size_t>(w)]);
    }
    if (slot >= 1 && slot <= blocks) {
        for (int i = 0; i < a.cf_count; ++i)
            st.cf_sums[static_cast<size_t>(slot)][static_cast<size_t>(i)] =
                read(a.cf_levels[static_cast<size_t>(i)]);
        for (int u = 0; u < 2; ++u)
            for (int k = 0; k < a.df_count; ++k) {
                const auto& s = a.df[static_cast<size_t>(u)][static_cast<size_t>(k)];
                std::uint8_t v;
                if (s.rider) {
                    v = read(a.cn_levels[static_cast<size_t>(s.index)]);
                    v ^= st.cn_sums[static_cast<size_t>(slot)][static_cast<size_t>(s.index)];
                } else {
                    v = read(s.index);
                }
                st.dfb[static_cast<size_t>(slot)][static_cast<size_t>(u)][static_cast<size_t>(k)] = v;
            }
    }
}

} // namespace

LdParams toy_params() { return LdParams::make(2, 3, 6, 5); }

Allocation toy_allocation() {
    Allocation a;
    a.cf_count = 1;
    a.cn_count = 2;
    a.df_count = 1;
    a.cf_levels = {0};
    a.cn_levels = {1, 2};
    a.cn_future_levels = {3, 4};
    a.df[0] = {{true, 0}}; // rides the first split
    a.df[1] = {{true, 1}}; // rides the second split
    a.relay_df_levels[0] = {0};
    a.relay_df_levels[1] = {1};
    a.relay_cf_sum_levels = {2};
    a.relay_cn_sum_levels = {4, 5};
    return a;
}

namespace {

ValidationReport fail(const std::string& what) { return {false, what}; }

// Symbolic receiver-side decodability check following the fixed order:
// relay-forwarded items of the next slot first, then the interferer's
// compute-forward bits, then the neutralization splits top-down.
ValidationReport check_receiver_order(const Allocation& a, const LdParams& p, int rx) {
    const int own = rx;
    const int other = 1 - rx;

    // Known quantities, by symbolic tag.
    auto df_tag = [](int u, int k) { return std::string("df:") + char('0' + u) + ":" + std::to_string(k); };
    auto cf_tag = [](int u, int i) { return std::string("cf:") + char('0' + u) + ":" + std::to_string(i); };
    auto cn_tag = [](int u, int w) { return std::string("cn:") + char('0' + u) + ":" + std::to_string(w); };
    std::vector<std::string> known;
    auto knows = [&known](const std::string& t) {
        return std::find(known.begin(), known.end(), t) != known.end();
    };

    // Step 1: items forwarded by the relay, read on clean levels of slot b+1.
    for (int u = 0; u < 2; ++u)
        for (int k = 0; k < a.df_count; ++k) known.push_back(df_tag(u, k));
    // cf sums are known as sums; track separately.
    // (Their levels were already checked clean; here we only track knowledge.)

    // Unknown contributions at a destination level of slot b, excluding a
    // designated target and the neutralization pair of a given split.
    auto unknowns_at = [&](int ylevel, int skip_cn_split) {
        std::vector<std::string> out;
        // own signal via the direct link
        const int lo = ylevel - (p.q - p.nd);
        if (lo >= 0 && lo < p.nd) {
            for (const TxItem& it : tx_items_at(a, own, lo)) {
                if (it.kind == TxItem::Kind::Cf && !knows(cf_tag(own, it.index)))
                    out.push_back(cf_tag(own, it.index));
                if (it.kind == TxItem::Kind::Cn && !knows(cn_tag(own, it.index)))
                    out.push_back(cn_tag(own, it.index));
                if (it.kind == TxItem::Kind::CnFut) {
                    // next-block own bit, known under backward decoding
                }
                // own df always known from step 1
            }
        }
        // interferer via the cross link
        const int lc = ylevel - (p.q - p.nc);
        if (lc >= 0 && lc < p.nc) {
            for (const TxItem& it : tx_items_at(a, other, lc)) {
                if (it.kind == TxItem::Kind::Cf && !knows(cf_tag(other, it.index)))
                    out.push_back(cf_tag(other, it.index));
                if (it.kind == TxItem::Kind::Cn && it.index != skip_cn_split)
                    out.push_back(cn_tag(other, it.index));
                if (it.kind == TxItem::Kind::CnFut)
                    out.push_back("fut:" + std::to_string(it.index));
            }
        }
        // relay arrival
        const int lr = ylevel - (p.q - p.nr);
        if (lr >= 0 && lr < p.nr) {
            if (auto item = relay_item_at(a, lr)) {
                if (item->kind == RelayItem::Kind::CnSum && item->index != skip_cn_split)
                    out.push_back("cnsum:" + std::to_string(item->index));
                if (item->kind == RelayItem::Kind::CfSum || item->kind == RelayItem::Kind::DfFwd)
                    out.push_back("relay-prev-block");
            }
        }
        return out;
    };

    // Step 2: interferer cf bits from the cross band, then own cf via the sums.
    for (int i = 0; i < a.cf_count; ++i) {
        const int v = through(a.cf_levels[static_cast<size_t>(i)], p.nc, p.q);
        if (v < 0) return fail("receiver: compute-forward level invisible on the cross link");
        auto unk = unknowns_at(v, -1);
        // the target itself appears among the unknowns
        auto self = std::find(unk.begin(), unk.end(), cf_tag(other, i));
        if (self == unk.end())
            return fail("receiver: interferer compute-forward bit missing at its level");
        unk.erase(self);
        if (!unk.empty())
            return fail("receiver: compute-forward level polluted by " + unk.front());
        known.push_back(cf_tag(other, i));
        known.push_back(cf_tag(own, i)); // via the forwarded sum
    }

    // Step 3: neutralization splits in order.
    for (int w = 0; w < a.cn_count; ++w) {
        const int v = through(a.cn_levels[static_cast<size_t>(w)], p.nc, p.q);
        if (v < 0) return fail("receiver: neutralization level invisible on the cross link");
        const int lr = v - (p.q - p.nr);
        auto item = (lr >= 0 && lr < p.nr) ? relay_item_at(a, lr) : std::nullopt;
        if (!item || item->kind != RelayItem::Kind::CnSum || item->index != w)
            return fail("receiver: relay sum not aligned with split " + std::to_string(w));
        auto unk = unknowns_at(v, w);
        if (!unk.empty())
            return fail("receiver: split " + std::to_string(w) + " polluted by " + unk.front());
        known.push_back(cn_tag(own, w));
    }
    return {};
}

} // namespace

ValidationReport validate_allocation(const Allocation& a, const LdParams& p) {
    const size_t C = static_cast<size_t>(a.cf_count);
    const size_t N = static_cast<size_t>(a.cn_count);
    const size_t D = static_cast<size_t>(a.df_count);
    if (a.cf_levels.size() != C || a.cn_levels.size() != N || a.cn_future_levels.size() != N)
        return fail("structure: level lists do not match the declared counts");
    for (int u = 0; u < 2; ++u)
        if (a.df[static_cast<size_t>(u)].size() != D ||
            a.relay_df_levels[static_cast<size_t>(u)].size() != D)
            return fail("structure: decode-forward lists do not match the declared count");
    if (a.relay_cf_sum_levels.size() != C || a.relay_cn_sum_levels.size() != N)
        return fail("structure: relay map does not match the declared counts");

    auto in_range = [&](int lvl) { return lvl >= 0 && lvl < p.q; };
    for (int lvl : a.cf_levels)
        if (!in_range(lvl)) return fail("range: compute-forward level outside the vector");
    for (int lvl : a.cn_levels)
        if (!in_range(lvl)) return fail("range: neutralization level outside the vector");
    for (int lvl : a.cn_future_levels)
        if (!in_range(lvl)) return fail("range: future-copy level outside the vector");
    for (int u = 0; u < 2; ++u)
        for (const auto& s : a.df[static_cast<size_t>(u)]) {
            if (s.rider && (s.index < 0 || s.index >= a.cn_count))
                return fail("range: rider split index out of range");
            if (!s.rider && !in_range(s.index))
                return fail("range: decode-forward level outside the vector");
        }

    // Per-transmitter collision freedom.  A rider deliberately shares its own
    // user's split level; everything else must be distinct.
    for (int u = 0; u < 2; ++u) {
        std::vector<int> lv = a.cf_levels;
        lv.insert(lv.end(), a.cn_levels.begin(), a.cn_levels.end());
        lv.insert(lv.end(), a.cn_future_levels.begin(), a.cn_future_levels.end());
        for (const auto& s : a.df[static_cast<size_t>(u)])
            if (!s.rider) lv.push_back(s.index);
        std::sort(lv.begin(), lv.end());
        if (std::adjacent_find(lv.begin(), lv.end()) != lv.end())
            return fail("collision: two signals of one transmitter share a level");
    }
    // At most one rider per split across both users.
    {
        std::vector<int> ridden;
        for (int u = 0; u < 2; ++u)
            for (const auto& s : a.df[static_cast<size_t>(u)])
                if (s.rider) ridden.push_back(s.index);
        std::sort(ridden.begin(), ridden.end());
        if (std::adjacent_find(ridden.begin(), ridden.end()) != ridden.end())
            return fail("collision: two decode-forward bits ride the same split");
    }
    // Exclusive df levels must not collide with the partner's content either.
    for (int u = 0; u < 2; ++u)
        for (const auto& s : a.df[static_cast<size_t>(u)])
            if (!s.rider && !tx_items_at(a, 1 - u, s.index).empty())
                return fail("collision: decode-forward level not silent at the partner");

    // Relay map collisions and reachability.
    {
        std::vector<int> lv = a.relay_cf_sum_levels;
        lv.insert(lv.end(), a.relay_cn_sum_levels.begin(), a.relay_cn_sum_levels.end());
        for (int u = 0; u < 2; ++u)
            lv.insert(lv.end(), a.relay_df_levels[static_cast<size_t>(u)].begin(),
                      a.relay_df_levels[static_cast<size_t>(u)].end());
        for (int l : lv)
            if (!in_range(l)) return fail("range: relay level outside the vector");
        for (int l : lv)
            if (l >= p.nr)
                return fail("relay: transmit level unreachable at the destinations");
        std::sort(lv.begin(), lv.end());
        if (std::adjacent_find(lv.begin(), lv.end()) != lv.end())
            return fail("collision: two relay signals share a level");
    }

    // Causality: every future copy must reach the relay, and must sit below
    // the current content so next-block sums arrive under the current decode.
    int max_cur = -1;
    for (int lvl : a.cf_levels) max_cur = std::max(max_cur, lvl);
    for (int lvl : a.cn_levels) max_cur = std::max(max_cur, lvl);
    for (int u = 0; u < 2; ++u)
        for (const auto& s : a.df[static_cast<size_t>(u)])
            if (!s.rider) max_cur = std::max(max_cur, s.index);
    for (int lvl : a.cn_future_levels) {
        if (lvl >= p.ns) return fail("causality: future copy above the relay cutoff");
        if (lvl <= max_cur) return fail("causality: future copy above current content");
    }

    // Relay decodability at distinct received levels after subtracting the
    // known current sums.
    for (size_t i = 0; i < C; ++i) {
        const int lvl = a.cf_levels[i];
        if (lvl >= p.ns) return fail("relay: compute-forward level above the relay cutoff");
        auto i0 = tx_items_at(a, 0, lvl), i1 = tx_items_at(a, 1, lvl);
        if (i0.size() != 1 || i1.size() != 1 || i0[0].kind != TxItem::Kind::Cf ||
            i1[0].kind != TxItem::Kind::Cf)
            return fail("relay: compute-forward sum level polluted");
    }
    for (int u = 0; u < 2; ++u)
        for (const auto& s : a.df[static_cast<size_t>(u)]) {
            const int lvl = s.rider ? a.cn_levels[static_cast<size_t>(s.index)] : s.index;
            if (lvl >= p.ns)
                return fail("relay: decode-forward bit above the relay cutoff");
            if (s.rider) {
                // level carries own cn + rider and the partner's cn only
                auto ip = tx_items_at(a, 1 - u, lvl);
                if (ip.size() != 1 || ip[0].kind != TxItem::Kind::Cn)
                    return fail("relay: rider level polluted at the partner");
            }
        }
    for (size_t w = 0; w < N; ++w) {
        const int lvl = a.cn_levels[w];
        auto i0 = tx_items_at(a, 0, lvl), i1 = tx_items_at(a, 1, lvl);
        // each side: the split itself plus at most one rider
        auto side_ok = [](const std::vector<TxItem>& v) {
            if (v.empty()) return false;
            int cn = 0, df = 0;
            for (const auto& it : v) {
                if (it.kind == TxItem::Kind::Cn) ++cn;
                else if (it.kind == TxItem::Kind::Df) ++df;
                else return false;
            }
            return cn == 1 && df <= 1;
        };
        if (!side_ok(i0) || !side_ok(i1))
            return fail("relay: current split level polluted");
    }

    // Clean-band condition for forwarded bits: they must arrive above every
    // transmitter contribution at the destinations, direct or cross.
    const int tx_band = std::max(p.nc, p.nd);
    for (int u = 0; u < 2; ++u)
        for (int lvl : a.relay_df_levels[static_cast<size_t>(u)])
            if (lvl >= p.nr - tx_band)
                return fail("relay: forwarded decode-forward bit below the interference band");
    for (int lvl : a.relay_cf_sum_levels)
        if (lvl >= p.nr - tx_band)
            return fail("relay: forwarded compute-forward sum below the interference band");

    // Neutralization alignment: the relay sum must collide with the
    // interferer's split at both destinations.
    for (size_t w = 0; w < N; ++w) {
        const int want = p.nr - p.nc + a.cn_levels[w];
        if (a.relay_cn_sum_levels[w] != want)
            return fail("alignment: relay sum level off for split " + std::to_string(w));
    }

    // Receiver-side ordered decodability, both destinations.
    for (int rx = 0; rx < 2; ++rx) {
        ValidationReport r = check_receiver_order(a, p, rx);
        if (!r.ok) return r;
    }
    return {};
}

Allocation construct_allocation(const LdParams& p) {
    if (p.nd < 1) throw unsupported_regime_error("direct link has no levels", 0.0, 0);
    const double alpha = static_cast<double>(p.nc) / p.nd;
    const double beta = static_cast<double>(p.nr) / p.nd;
    const double gamma = static_cast<double>(p.ns) / p.nd;
    if (!(p.nd < p.nc && p.nc < p.ns))
        throw unsupported_regime_error("outside the covered regime: need nd < nc < ns", 0.0, 0);
    const auto d = gdof::gdof_irc(gdof::Params{alpha, beta, gamma});
    const double target = p.nd * d.value;
    if (!(p.nc < p.nr))
        throw unsupported_regime_error("outside the covered regime: need nc < nr", target, 0);

    const int N = std::min(p.ns - p.nc, p.nc);
    const int C = p.nc - N;
    const int spare = p.ns - p.nc - N;
    const int df_slots = N + spare;           // rider slots plus silent levels
    const int relay_clean = p.nr - p.nc - C;  // clean levels left for df bits
    const int D = std::max(0, std::min(df_slots / 2, relay_clean / 2));
    const int total = 2 * (C + N + D);

    const double rounded = std::round(target);
    if (std::abs(target - rounded) > 1e-9 || static_cast<long>(rounded) % 2 != 0)
        throw unsupported_regime_error("capacity target is not an even integer; "
                                       "a single-block layout cannot split it",
                                       target, total);
    if (total != static_cast<int>(rounded))
        throw unsupported_regime_error("level counting falls short of the capacity target",
                                       target, total);

    Allocation a;
    a.cf_count = C;
    a.cn_count = N;
    a.df_count = D;
    for (int i = 0; i < C; ++i) a.cf_levels.push_back(i);
    for (int w = 0; w < N; ++w) a.cn_levels.push_back(C + w);

    // Riders first (user 0 from the top split, user 1 from the bottom), then
    // exclusive levels directly under the cross band; the future copies go
    // beneath everything current.
    const int riders_total = std::min(2 * D, N);
    const int r0 = (riders_total + 1) / 2;
    const int r1 = riders_total - r0;
    int next_excl = p.nc;
    for (int k = 0; k < D; ++k) {
        if (k < r0)
            a.df[0].push_back({true, k});
        else
            a.df[0].push_back({false, next_excl++});
    }
    for (int k = 0; k < D; ++k) {
        if (k < r1)
            a.df[1].push_back({true, N - 1 - k});
        else
            a.df[1].push_back({false, next_excl++});
    }
    for (int w = 0; w < N; ++w) a.cn_future_levels.push_back(next_excl + w);

    for (int k = 0; k < D; ++k) a.relay_df_levels[0].push_back(k);
    for (int k = 0; k < D; ++k) a.relay_df_levels[1].push_back(D + k);
    for (int i = 0; i < C; ++i) a.relay_cf_sum_levels.push_back(2 * D + i);
    for (int w = 0; w < N; ++w) a.relay_cn_sum_levels.push_back(p.nr - p.nc + a.cn_levels[static_cast<size_t>(w)]);

    const ValidationReport v = validate_allocation(a, p);
    if (!v.ok)
        throw unsupported_regime_error("constructed layout failed validation: " + v.first_violation,
                                       target, total);
    return a;
}

namespace {

struct Forward {
    Messages m;
    std::vector<BitVector> y1, y2, relay_tx;
};

Forward run_forward(const Allocation& a, const LdParams& p, int blocks, std::uint64_t seed,
                    std::ostream* trace) {
    Forward f;
    f.m = draw_messages(a, blocks, seed);

    RelayState st;
    st.cn_sums.assign(static_cast<size_t>(blocks) + 2,
                      std::vector<std::uint8_t>(static_cast<size_t>(a.cn_count), 0));
    st.cf_sums.assign(static_cast<size_t>(blocks) + 2,
                      std::vector<std::uint8_t>(static_cast<size_t>(a.cf_count), 0));
    st.dfb.assign(static_cast<size_t>(blocks) + 2,
                  {std::vector<std::uint8_t>(static_cast<size_t>(a.df_count), 0),
                   std::vector<std::uint8_t>(static_cast<size_t>(a.df_count), 0)});

    for (int slot = 0; slot <= blocks + 1; ++slot) {
        const BitVector x1 = encode_tx(a, p, f.m, 0, slot, blocks);
        const BitVector x2 = encode_tx(a, p, f.m, 1, slot, blocks);
        const BitVector xr = encode_relay(a, p, st, slot, blocks);
        const BitVector yr = relay_rx(x1, x2, p);
        relay_process(a, p, yr, st, slot, blocks);
        f.y1.push_back(rx_signal(x1, x2, xr, p));
        f.y2.push_back(rx_signal(x2, x1, xr, p));
        f.relay_tx.push_back(xr);
        if (trace) {
            *trace << "slot " << slot << '\n'
                   << render_column(x1, "tx1") << render_column(x2, "tx2")
                   << render_column(xr, "relay-tx") << render_column(yr, "relay-rx")
                   << render_column(f.y1.back(), "rx1") << render_column(f.y2.back(), "rx2");
        }
    }
    return f;
}

} // namespace

namespace {

void require_encodable(const Allocation& a, const LdParams& p, const char* who) {
    const ValidationReport v = validate_allocation(a, p);
    if (v.first_violation.rfind("structure:", 0) == 0 ||
        v.first_violation.rfind("range:", 0) == 0)
        throw validation_error(std::string(who) + ": " + v.first_violation);
}

} // namespace

std::vector<BitVector> relay_transmissions(const LdParams& p, const Allocation& a, int blocks,
                                           std::uint64_t seed) {
    if (blocks < 2) throw validation_error("relay_transmissions: need at least two blocks");
    require_encodable(a, p, "relay_transmissions");
    return run_forward(a, p, blocks, seed, nullptr).relay_tx;
}

SimReport simulate(const LdParams& p, const Allocation& a, int blocks, std::uint64_t seed,
                   std::ostream* trace) {
    if (blocks < 2) throw validation_error("simulate: need at least two blocks");

    SimReport rep;
    rep.blocks = blocks;
    rep.seed = seed;
    rep.validation = validate_allocation(a, p);
    // Semantically broken layouts run mechanically and show up as decoding
    // mismatches; structurally broken ones cannot even be encoded.
    require_encodable(a, p, "simulate");

    const Forward fwd = run_forward(a, p, blocks, seed, trace);
    const Messages& m = fwd.m;
    const std::vector<BitVector>& y1 = fwd.y1;
    const std::vector<BitVector>& y2 = fwd.y2;

    // Backward decoding at both destinations.
    for (int rx = 0; rx < 2; ++rx) {
        const auto& y = (rx == 0) ? y1 : y2;
        const int own = rx, other = 1 - rx;
        // own decoded neutralization bits per block, for future-copy removal
        std::vector<std::vector<std::uint8_t>> dec_cn(
            static_cast<size_t>(blocks) + 2,
            std::vector<std::uint8_t>(static_cast<size_t>(a.cn_count), 0));

        for (int b = blocks; b >= 1; --b) {
            const BitVector& ynext = y[static_cast<size_t>(b) + 1];
            const BitVector& ycur = y[static_cast<size_t>(b)];
            auto relay_read = [&](int lvl) -> std::uint8_t {
                const int r = through(lvl, p.nr, p.q);
                return r < 0 ? std::uint8_t{0} : ynext[r];
            };

            std::array<std::vector<std::uint8_t>, 2> dfd;
            for (int u = 0; u < 2; ++u)
                for (int k = 0; k < a.df_count; ++k)
                    dfd[static_cast<size_t>(u)].push_back(
                        relay_read(a.relay_df_levels[static_cast<size_t>(u)][static_cast<size_t>(k)]));
            std::vector<std::uint8_t> cfsum;
            for (int i = 0; i < a.cf_count; ++i)
                cfsum.push_back(relay_read(a.relay_cf_sum_levels[static_cast<size_t>(i)]));

            std::vector<std::uint8_t> cf_own(static_cast<size_t>(a.cf_count), 0);
            std::vector<std::uint8_t> cf_known(static_cast<size_t>(a.cf_count), 0);
            std::vector<std::uint8_t> cn_known(static_cast<size_t>(a.cn_count), 0);

            // Reconstructable part of a user's transmit level in slot b.
            auto known_tx = [&](int user, int lvl, int upto_cn) -> std::uint8_t {
                std::uint8_t v = 0;
                for (const TxItem& it : tx_items_at(a, user, lvl)) {
                    const auto blk = item_block(it.kind, b, blocks);
                    if (!blk) continue;
                    switch (it.kind) {
                    case TxItem::Kind::Cf:
                        if (user == own && cf_known[static_cast<size_t>(it.index)])
                            v ^= cf_own[static_cast<size_t>(it.index)];
                        break;
                    case TxItem::Kind::Cn:
                        if (user == own && it.index < upto_cn &&
                            cn_known[static_cast<size_t>(it.index)])
                            v ^= dec_cn[static_cast<size_t>(b)][static_cast<size_t>(it.index)];
                        break;
                    case TxItem::Kind::CnFut:
                        if (user == own)
                            v ^= dec_cn[static_cast<size_t>(*blk)][static_cast<size_t>(it.index)];
                        break;
                    case TxItem::Kind::Df:
                        v ^= dfd[static_cast<size_t>(user)][static_cast<size_t>(it.index)];
                        break;
                    }
                }
                return v;
            };

            // Interferer compute-forward bits, then own via the sums.
            for (int i = 0; i < a.cf_count; ++i) {
                const int v = through(a.cf_levels[static_cast<size_t>(i)], p.nc, p.q);
                std::uint8_t val = (v < 0) ? std::uint8_t{0} : ycur[v];
                if (v >= 0) {
                    const int lo = v - (p.q - p.nd);
                    if (lo >= 0 && lo < p.nd) val ^= known_tx(own, lo, 0);
                }
                // interferer cf recovered, combine with the forwarded sum
                cf_own[static_cast<size_t>(i)] = static_cast<std::uint8_t>(val ^ cfsum[static_cast<size_t>(i)]);
                cf_known[static_cast<size_t>(i)] = 1;
            }

            // Neutralization splits top-down.
            for (int w = 0; w < a.cn_count; ++w) {
                const int v = through(a.cn_levels[static_cast<size_t>(w)], p.nc, p.q);
                std::uint8_t val = (v < 0) ? std::uint8_t{0} : ycur[v];
                if (v >= 0) {
                    const int lo = v - (p.q - p.nd);
                    if (lo >= 0 && lo < p.nd) val ^= known_tx(own, lo, w);
                    // interferer rider on this split, forwarded by the relay
                    for (int k = 0; k < a.df_count; ++k) {
                        const auto& s = a.df[static_cast<size_t>(other)][static_cast<size_t>(k)];
                        if (s.rider && s.index == w)
                            val ^= dfd[static_cast<size_t>(other)][static_cast<size_t>(k)];
                    }
                }
                dec_cn[static_cast<size_t>(b)][static_cast<size_t>(w)] = val;
                cn_known[static_cast<size_t>(w)] = 1;
            }

            // Tally this block.
            for (int i = 0; i < a.cf_count; ++i) {
                rep.cf_bits++;
                if (cf_own[static_cast<size_t>(i)] !=
                    m.cf[own][static_cast<size_t>(b)][static_cast<size_t>(i)])
                    rep.errors++;
            }
            for (int w = 0; w < a.cn_count; ++w) {
                rep.cn_bits++;
                if (dec_cn[static_cast<size_t>(b)][static_cast<size_t>(w)] !=
                    m.cn[own][static_cast<size_t>(b)][static_cast<size_t>(w)])
                    rep.errors++;
            }
            for (int k = 0; k < a.df_count; ++k) {
                rep.df_bits++;
                if (dfd[static_cast<size_t>(own)][static_cast<size_t>(k)] !=
                    m.df[own][static_cast<size_t>(b)][static_cast<size_t>(k)])
                    rep.errors++;
            }
        }
    }

    rep.delivered_bits = rep.cf_bits + rep.cn_bits + rep.df_bits;
    rep.normalized_gdof =
        static_cast<double>(rep.delivered_bits) / (static_cast<double>(blocks) * p.nd);
    return rep;
}

SearchResult search_allocation(const LdParams& p, long budget) {
    if (p.q > 8) throw validation_error("search_allocation: desk scale only (q <= 8)");
    SearchResult res;

    auto assemble = [&](int C, int N, int D, int r0, int r1) {
        Allocation a;
        a.cf_count = C;
        a.cn_count = N;
        a.df_count = D;
        for (int i = 0; i < C; ++i) a.cf_levels.push_back(i);
        for (int w = 0; w < N; ++w) a.cn_levels.push_back(C + w);
        int next_excl = p.nc;
        for (int k = 0; k < D; ++k) {
            if (k < r0) a.df[0].push_back({true, k});
            else a.df[0].push_back({false, next_excl++});
        }
        for (int k = 0; k < D; ++k) {
            if (k < r1) a.df[1].push_back({true, N - 1 - k});
            else a.df[1].push_back({false, next_excl++});
        }
        for (int w = 0; w < N; ++w) a.cn_future_levels.push_back(next_excl + w);
        for (int k = 0; k < D; ++k) a.relay_df_levels[0].push_back(k);
        for (int k = 0; k < D; ++k) a.relay_df_levels[1].push_back(D + k);
        for (int i = 0; i < C; ++i) a.relay_cf_sum_levels.push_back(2 * D + i);
        for (int w = 0; w < N; ++w)
            a.relay_cn_sum_levels.push_back(p.nr - p.nc + a.cn_levels[static_cast<size_t>(w)]);
        return a;
    };

    const int tx_band = std::max(p.nc, p.nd);
    for (int C = 0; C <= p.nc; ++C) {
        for (int N = 0; C + N <= p.nc && N <= std::max(0, p.ns - p.nc); ++N) {
            const int spare = std::max(0, p.ns - p.nc - N);
            const int dmax =
                std::min({(N + spare) / 2, p.q, std::max(0, p.nr - tx_band - C) / 2});
            for (int D = 0; D <= dmax; ++D) {
                for (int r0 = 0; r0 <= std::min(D, N); ++r0) {
                    for (int r1 = 0; r1 <= std::min(D, N - r0); ++r1) {
                        if ((D - r0) + (D - r1) > spare) continue;
                        if (res.candidates >= budget) {
                            res.exhausted = true;
                            return res;
                        }
                        res.candidates++;
                        Allocation a = assemble(C, N, D, r0, r1);
                        if (a.total_bits_per_block() <= res.total_bits) continue;
                        if (!validate_allocation(a, p).ok) continue;
                        const SimReport smoke = simulate(p, a, 3, 7);
                        if (smoke.errors != 0) continue;
                        res.best = a;
                        res.total_bits = a.total_bits_per_block();
                    }
                }
            }
        }
    }
    return res;
}

void write_sim_csv(std::ostream& os, const LdParams& p, const SimReport& r) {
    os << "nd,nc,nr,ns,blocks,errors,delivered_bits,cf_bits,cn_bits,df_bits,normalized_gdof,seed,valid\n";
    os << p.nd << ',' << p.nc << ',' << p.nr << ',' << p.ns << ',' << r.blocks << ',' << r.errors
       << ',' << r.delivered_bits << ',' << r.cf_bits << ',' << r.cn_bits << ',' << r.df_bits
       << ',' << r.normalized_gdof << ',' << r.seed << ',' << (r.validation.ok ? 1 : 0) << '\n';
}

} // namespace irclab::ld
