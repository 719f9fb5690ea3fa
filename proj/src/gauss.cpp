#include "irclab/gauss.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "irclab/errors.hpp"

namespace irclab::gauss {

using gdof::c_of;
using gdof::c_plus;

namespace {

double vsum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

double tail_sum(const std::vector<double>& v, size_t from) {
    double s = 0.0;
    for (size_t i = from; i < v.size(); ++i) s += v[i];
    return s;
}

} // namespace

double PowerAllocation::cn_total() const { return vsum(cn); }
double PowerAllocation::cnF_total() const { return vsum(cnF); }
double PowerAllocation::cf_total() const { return vsum(cf); }

double PowerAllocation::tx_total() const {
    return cn_total() + cnF_total() + cf_total() + df + cm;
}

double PowerAllocation::relay_cn_power(const GaussianChannel& ch) const {
    if (cn.empty()) return 0.0;
    return (ch.hc * ch.hc) / (ch.hr * ch.hr) * cn_total();
}

double PowerAllocation::relay_total(const GaussianChannel& ch) const {
    return r_cf + r_df + relay_cn_power(ch);
}

bool PowerAllocation::feasible(const GaussianChannel& ch, double tol) const {
    if (cn.size() != cnF.size()) return false;
    for (double v : cn)
        if (!(v >= 0.0) || !std::isfinite(v)) return false;
    for (double v : cnF)
        if (!(v >= 0.0) || !std::isfinite(v)) return false;
    for (double v : cf)
        if (!(v >= 0.0) || !std::isfinite(v)) return false;
    if (!(df >= 0.0) || !(cm >= 0.0) || !(r_cf >= 0.0) || !(r_df >= 0.0)) return false;
    for (size_t w = 0; w + 1 < cn.size(); ++w)
        if (cn[w] < cn[w + 1] - tol * ch.P) return false; // modulo reconstruction needs a
                                                          // nonincreasing split ladder
    if (tx_total() > ch.P * (1.0 + tol)) return false;
    if (relay_total(ch) > ch.P * (1.0 + tol)) return false;
    return true;
}

RelayCaps relay_constraints(const GaussianChannel& ch, const PowerAllocation& pa) {
    if (!pa.feasible(ch)) throw validation_error("relay_constraints: power budget violated");
    const double hs2 = ch.hs * ch.hs;
    const double Pcf = pa.cf_total();
    const double PcnF = pa.cnF_total();

    RelayCaps caps;
    {
        const double den = 2.0 * hs2 * (Pcf + PcnF + pa.df) + 1.0;
        caps.cm = std::min(c_of(hs2 * pa.cm / den), 0.5 * c_of(2.0 * hs2 * pa.cm / den));
    }
    caps.cf.resize(pa.cf.size());
    for (size_t l = 0; l < pa.cf.size(); ++l) {
        const double den = 2.0 * hs2 * (tail_sum(pa.cf, l + 1) + PcnF + pa.df) + 1.0;
        caps.cf[l] = c_plus(hs2 * pa.cf[l] / den - 0.5);
    }
    {
        const double den = 2.0 * hs2 * PcnF + 1.0;
        caps.df = std::min(c_of(hs2 * pa.df / den), 0.5 * c_of(2.0 * hs2 * pa.df / den));
    }
    caps.cn.resize(pa.cnF.size());
    for (size_t w = 0; w < pa.cnF.size(); ++w) {
        const double den = 2.0 * hs2 * tail_sum(pa.cnF, w + 1) + 1.0;
        caps.cn[w] = c_plus(hs2 * pa.cnF[w] / den - 0.5);
    }
    return caps;
}

DestCaps destination_constraints(const GaussianChannel& ch, const PowerAllocation& pa) {
    if (!pa.feasible(ch)) throw validation_error("destination_constraints: power budget violated");
    const double hd2 = ch.hd * ch.hd;
    const double hc2 = ch.hc * ch.hc;
    const double hr2 = ch.hr * ch.hr;
    const double Pcf = pa.cf_total();
    const double Pcn = pa.cn_total();
    const double PcnF = pa.cnF_total();
    // The relay re-emits the neutralization sums at cross strength, so its
    // contribution enters every denominator as hc^2 * Pcn.
    const double rcn = hc2 * Pcn;

    DestCaps caps;
    {
        const double den = (hd2 + hc2) * (Pcf + Pcn) + hc2 * PcnF +
                           hr2 * (pa.r_cf + pa.r_df) + rcn + 1.0;
        caps.cm = std::min(c_of(hd2 * pa.cm / den), 0.5 * c_of((hd2 + hc2) * pa.cm / den));
    }
    {
        const double den =
            (hd2 + hc2) * (Pcf + Pcn) + hc2 * PcnF + hr2 * pa.r_cf + rcn + 1.0;
        caps.df = 0.5 * c_of(hr2 * pa.r_df / den);
    }
    caps.cf.resize(pa.cf.size());
    const double cf_tail1 = pa.cf.empty() ? 0.0 : tail_sum(pa.cf, 1);
    if (std::abs(ch.hc) >= std::abs(ch.hr)) {
        // The interferer's first split arrives above the relay's forward
        // signal, so it is decoded first.
        if (!pa.cf.empty()) {
            const double den = hd2 * (Pcf + Pcn) + hc2 * (PcnF + Pcn + cf_tail1) +
                               hr2 * pa.r_cf + rcn + 1.0;
            caps.cf[0] = c_of(hc2 * pa.cf[0] / den);
        }
        const double den_r = (hd2 + hc2) * (cf_tail1 + Pcn) + hc2 * PcnF + rcn + 1.0;
        caps.r_cf = c_of(hr2 * pa.r_cf / den_r);
    } else {
        const double den_r = (hd2 + hc2) * (Pcf + Pcn) + hc2 * PcnF + rcn + 1.0;
        caps.r_cf = c_of(hr2 * pa.r_cf / den_r);
        if (!pa.cf.empty()) {
            const double den =
                hd2 * (Pcf + Pcn) + hc2 * (PcnF + Pcn + cf_tail1) + rcn + 1.0;
            caps.cf[0] = c_of(hc2 * pa.cf[0] / den);
        }
    }
    for (size_t l = 1; l < pa.cf.size(); ++l) {
        const double den = (hd2 + hc2) * Pcn + hc2 * (PcnF + tail_sum(pa.cf, l + 1)) +
                           hd2 * tail_sum(pa.cf, l) + rcn + 1.0;
        caps.cf[l] = c_of(hc2 * pa.cf[l] / den);
    }
    caps.cn.resize(pa.cn.size());
    for (size_t w = 0; w < pa.cn.size(); ++w) {
        const double tail = tail_sum(pa.cn, w + 1);
        const double den =
            hd2 * (pa.cn[w] + tail) + hc2 * (PcnF + tail) + hc2 * tail + 1.0;
        const double sinr = hc2 * pa.cn[w] / den;
        // C+(sinr - 1) without the cancellation hazard near sinr -> 0
        caps.cn[w] = sinr <= 1.0 ? 0.0 : c_of(sinr - 1.0);
    }
    return caps;
}

RateAllocation achievable_sum_rate(const GaussianChannel& ch, const PowerAllocation& pa) {
    const RelayCaps rel = relay_constraints(ch, pa);
    const DestCaps des = destination_constraints(ch, pa);

    RateAllocation r;
    auto pick = [&r](double a, double b, const std::string& name) {
        if (a <= b) {
            r.binding.push_back(name + "=relay");
            return a;
        }
        r.binding.push_back(name + "=dest");
        return b;
    };

    // The relay decodes the common messages only to cancel them ahead of its
    // own signals; with no relay-borne component in use that step vanishes
    // and the plain multiple-access operation survives a dead relay link.
    const bool relay_decodes =
        pa.cf_total() > 0.0 || pa.cnF_total() > 0.0 || pa.df > 0.0;
    if (relay_decodes) {
        r.cm = pick(rel.cm, des.cm, "cm");
    } else {
        r.cm = des.cm;
        r.binding.push_back("cm=dest");
    }
    r.df = pick(rel.df, des.df, "df");
    r.cn.resize(pa.cn.size());
    for (size_t w = 0; w < pa.cn.size(); ++w)
        r.cn[w] = pick(rel.cn[w], des.cn[w], "cn" + std::to_string(w + 1));
    r.cf.resize(pa.cf.size());
    for (size_t l = 0; l < pa.cf.size(); ++l)
        r.cf[l] = pick(rel.cf[l], des.cf[l], "cf" + std::to_string(l + 1));

    // The relay can only forward what its own transmit rate supports; trim the
    // later splits first until the forwarding budget holds.
    double excess = vsum(r.cf) - des.r_cf;
    for (size_t l = pa.cf.size(); l-- > 0 && excess > 0.0;) {
        const double cut = std::min(excess, r.cf[l]);
        if (cut > 0.0) {
            r.cf[l] -= cut;
            excess -= cut;
            r.binding.push_back("cf" + std::to_string(l + 1) + "=forward-budget");
        }
    }
    r.r_cf = vsum(r.cf);

    r.sum_rate = 2.0 * (vsum(r.cn) + vsum(r.cf) + r.cm + r.df);
    return r;
}

double upper_bound_sumrate(const GaussianChannel& ch) {
    if (ch.hc == 0.0) throw validation_error("upper_bound_sumrate: cross gain must be nonzero");
    const double ratio = ch.hd / ch.hc;
    return c_of(ratio * ratio + (ratio - 1.0) * (ratio - 1.0)) +
           c_of(1.0 + ch.P * (ch.hd * ch.hd + ch.hc * ch.hc)) + c_of(ch.P * ch.hr * ch.hr);
}

// ---------------------------------------------------------------------------
// Optimizer: powers are parameterized as P * S^{-t} with S the direct-link
// SNR, one exponent per component.  Projection onto the budgets keeps every
// candidate feasible, which keeps the objective total on its whole domain.

namespace {

constexpr double kOff = 6.0; // exponent that switches a component off in practice

struct ParamSpace {
    int W, L;
    int size() const { return 2 * W + L + 4; }
    // layout: [cn W][cnF W][cf L][df][cm][r_cf][r_df]
    int cn(int w) const { return w; }
    int cnF(int w) const { return W + w; }
    int cf(int l) const { return 2 * W + l; }
    int df() const { return 2 * W + L; }
    int cm() const { return 2 * W + L + 1; }
    int r_cf() const { return 2 * W + L + 2; }
    int r_df() const { return 2 * W + L + 3; }
};

PowerAllocation from_exponents(const GaussianChannel& ch, const ParamSpace& ps,
                               const std::vector<double>& t) {
    const double S = ch.snr_d();
    // the deepest exponent switches a component off exactly, so the relay's
    // decode set is well defined
    auto pw = [&](double e) {
        if (e >= kOff) return 0.0;
        return ch.P * std::pow(S, -std::clamp(e, 0.0, kOff));
    };

    // Keep split pairs together while enforcing the nonincreasing ladder.
    std::vector<int> order(static_cast<size_t>(ps.W));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return t[static_cast<size_t>(ps.cn(a))] < t[static_cast<size_t>(ps.cn(b))]; });

    PowerAllocation pa;
    for (int w : order) {
        pa.cn.push_back(pw(t[static_cast<size_t>(ps.cn(w))]));
        pa.cnF.push_back(pw(t[static_cast<size_t>(ps.cnF(w))]));
    }
    for (int l = 0; l < ps.L; ++l) pa.cf.push_back(pw(t[static_cast<size_t>(ps.cf(l))]));
    pa.df = pw(t[static_cast<size_t>(ps.df())]);
    pa.cm = pw(t[static_cast<size_t>(ps.cm())]);
    pa.r_cf = pw(t[static_cast<size_t>(ps.r_cf())]);
    pa.r_df = pw(t[static_cast<size_t>(ps.r_df())]);

    const double tx = pa.tx_total();
    if (tx > ch.P) {
        const double s = ch.P / tx;
        for (auto& v : pa.cn) v *= s;
        for (auto& v : pa.cnF) v *= s;
        for (auto& v : pa.cf) v *= s;
        pa.df *= s;
        pa.cm *= s;
    }
    const double rcn = pa.relay_cn_power(ch);
    if (rcn > ch.P) {
        const double s = ch.P / rcn;
        for (auto& v : pa.cn) v *= s;
    }
    const double rem = ch.P - pa.relay_cn_power(ch);
    const double rsum = pa.r_cf + pa.r_df;
    if (rsum > rem) {
        const double s = rem > 0.0 ? rem / rsum : 0.0;
        pa.r_cf *= s;
        pa.r_df *= s;
    }
    return pa;
}

// Regime-shaped starting points; the ascent does the fine work.
std::vector<std::vector<double>> structured_seeds(const GaussianChannel& ch,
                                                  const ParamSpace& ps) {
    const gdof::Params g = gdof::exponents_from_gains(ch);
    const double alpha = g.alpha, beta = g.beta, gamma = g.gamma;

    std::vector<std::vector<double>> seeds;
    std::vector<double> base(static_cast<size_t>(ps.size()), kOff);

    {
        // plain multiple-access operation, no relay strategies
        auto s = base;
        s[static_cast<size_t>(ps.cm())] = 0.0;
        seeds.push_back(s);
    }
    {
        auto s = base; // everything at full power, projection sorts it out
        std::fill(s.begin(), s.end(), 0.0);
        seeds.push_back(s);
    }

    std::vector<double> deltas;
    if (ps.W > 1) deltas.push_back(std::min(alpha - 1.0, 1.0 / (ps.W - 1)));
    deltas.push_back(std::max(0.02, std::min(alpha - 1.0, (gamma - alpha) / std::max(ps.W, 1))));
    deltas.push_back(std::max(0.02, alpha - 1.0));

    for (double delta : deltas) {
        if (!(delta > 0.0) || !std::isfinite(delta)) continue;
        for (int use_cf = 0; use_cf <= 1; ++use_cf) {
            auto s = base;
            const double cf_span = use_cf ? ps.L * delta : 0.0;
            if (use_cf)
                for (int l = 0; l < ps.L; ++l)
                    s[static_cast<size_t>(ps.cf(l))] = l * delta;
            for (int w = 0; w < ps.W; ++w)
                s[static_cast<size_t>(ps.cn(w))] = cf_span + w * delta;
            const double t_last = cf_span + (ps.W - 1) * delta;
            const double tF0 = std::clamp(alpha - std::max(1.0 - t_last, 0.0), 0.0, kOff);
            for (int w = 0; w < ps.W; ++w)
                s[static_cast<size_t>(ps.cnF(w))] = std::min(tF0 + w * delta, kOff);
            // decode-forward above the future copies at the relay
            s[static_cast<size_t>(ps.df())] = std::clamp(tF0 - 0.5 * (beta - alpha), 0.0, kOff);
            s[static_cast<size_t>(ps.r_df())] = 0.0;
            if (use_cf)
                s[static_cast<size_t>(ps.r_cf())] =
                    std::clamp(beta - alpha - cf_span, 0.0, kOff);
            seeds.push_back(s);
            // same shape without decode-forward
            auto s2 = s;
            s2[static_cast<size_t>(ps.df())] = kOff;
            s2[static_cast<size_t>(ps.r_df())] = kOff;
            seeds.push_back(s2);
        }
    }
    return seeds;
}

} // namespace

OptResult optimize_powers(const GaussianChannel& ch, const OptimizerConfig& cfg) {
    if (!ch.valid()) throw validation_error("optimize_powers: invalid channel");
    if (!ch.strong_interference())
        throw validation_error("optimize_powers: strong-interference scope required");
    if (ch.snr_d() <= 1.0)
        throw validation_error("optimize_powers: direct SNR must exceed 1");
    if (cfg.W < 1 || cfg.W > 8 || cfg.L < 1 || cfg.L > 8)
        throw validation_error("optimize_powers: split counts must be in 1..8");

    const ParamSpace ps{cfg.W, cfg.L};
    long iters = 0;
    auto objective = [&](const std::vector<double>& t) {
        ++iters;
        return achievable_sum_rate(ch, from_exponents(ch, ps, t)).sum_rate;
    };

    std::vector<std::vector<double>> seeds = structured_seeds(ch, ps);
    for (const auto& s : cfg.extra_seeds)
        if (static_cast<int>(s.size()) == ps.size()) seeds.push_back(s);
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unif(0.0, 3.0);
    for (int k = 0; k < cfg.random_seeds; ++k) {
        std::vector<double> s(static_cast<size_t>(ps.size()));
        for (auto& v : s) v = unif(rng);
        seeds.push_back(s);
    }

    // Coordinate ascent is local and the cap surface has many ridges; ascend
    // from the best few seeds rather than betting on one.
    std::vector<std::pair<double, size_t>> ranked;
    for (size_t i = 0; i < seeds.size(); ++i) ranked.emplace_back(objective(seeds[i]), i);
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    const size_t starts = std::min<size_t>(3, ranked.size());

    std::vector<double> best_t = seeds[ranked.front().second];
    double best_v = ranked.front().first;
    double last_gain = 0.0;
    for (size_t s = 0; s < starts; ++s) {
        std::vector<double> t = seeds[ranked[s].second];
        double v_best = ranked[s].first;
        double gain = 0.0;
        for (double step = cfg.step_init; step >= cfg.step_min; step *= 0.5) {
            bool improved = true;
            while (improved) {
                improved = false;
                const double sweep_start = v_best;
                for (int i = 0; i < ps.size(); ++i) {
                    for (double dir : {+1.0, -1.0}) {
                        std::vector<double> cand = t;
                        cand[static_cast<size_t>(i)] =
                            std::clamp(cand[static_cast<size_t>(i)] + dir * step, 0.0, kOff);
                        const double v = objective(cand);
                        if (v > v_best + 1e-12) {
                            v_best = v;
                            t = std::move(cand);
                            improved = true;
                        }
                    }
                }
                gain = v_best - sweep_start;
                if (gain < cfg.tol) break;
            }
        }
        if (v_best > best_v) {
            best_v = v_best;
            best_t = t;
            last_gain = gain;
        }
    }

    OptResult res;
    res.exponents = best_t;
    res.powers = from_exponents(ch, ps, best_t);
    res.rates = achievable_sum_rate(ch, res.powers);
    res.iterations = iters;
    res.final_improvement = last_gain;
    return res;
}

GaussianChannel channel_from_pattern(const gdof::Params& pattern, double snr) {
    if (!(snr > 1.0)) throw validation_error("channel_from_pattern: snr must exceed 1");
    GaussianChannel ch;
    ch.P = snr;
    ch.hd = 1.0;
    ch.hc = std::pow(snr, (pattern.alpha - 1.0) / 2.0);
    ch.hr = std::pow(snr, (pattern.beta - 1.0) / 2.0);
    ch.hs = std::pow(snr, (pattern.gamma - 1.0) / 2.0);
    return ch;
}

GdofEstimate estimate_gdof(const gdof::Params& pattern, const std::vector<double>& snrs,
                           const OptimizerConfig& cfg) {
    if (snrs.size() < 2)
        throw validation_error("estimate_gdof: need at least two SNR points for a slope");
    for (size_t i = 0; i + 1 < snrs.size(); ++i)
        if (!(snrs[i] < snrs[i + 1]))
            throw validation_error("estimate_gdof: SNR list must be ascending");

    GdofEstimate est;
    OptimizerConfig local = cfg;
    for (double snr : snrs) {
        const GaussianChannel ch = channel_from_pattern(pattern, snr);
        const OptResult r = optimize_powers(ch, local);
        est.snrs.push_back(snr);
        est.sum_rates.push_back(r.rates.sum_rate);
        est.upper_bounds.push_back(upper_bound_sumrate(ch));
        local.extra_seeds.push_back(r.exponents); // warm start the next point
    }

    const size_t n = est.snrs.size();
    double mx = 0.0, my = 0.0;
    std::vector<double> xs(n);
    for (size_t i = 0; i < n; ++i) {
        xs[i] = 0.5 * std::log2(est.snrs[i]);
        mx += xs[i];
        my += est.sum_rates[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < n; ++i) {
        num += (xs[i] - mx) * (est.sum_rates[i] - my);
        den += (xs[i] - mx) * (xs[i] - mx);
    }
    est.slope = num / den;
    return est;
}

namespace {

void put(std::ostream& os, double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    os << buf;
}

} // namespace

void write_opt_csv(std::ostream& os, const GaussianChannel& ch, const OptResult& r) {
    const auto& pa = r.powers;
    os << "snr_db,sum_rate_bits,upper_bound_bits";
    for (int w = 1; w <= pa.W(); ++w) os << ",p_cn_" << w;
    for (int w = 1; w <= pa.W(); ++w) os << ",p_cnf_" << w;
    for (int l = 1; l <= pa.L(); ++l) os << ",p_cf_" << l;
    os << ",p_df,p_cm,p_r_cf,p_r_df,p_r_cn,binding\n";

    put(os, 10.0 * std::log10(ch.snr_d()));
    os << ',';
    put(os, r.rates.sum_rate);
    os << ',';
    put(os, upper_bound_sumrate(ch));
    for (double v : pa.cn) { os << ','; put(os, v); }
    for (double v : pa.cnF) { os << ','; put(os, v); }
    for (double v : pa.cf) { os << ','; put(os, v); }
    os << ','; put(os, pa.df);
    os << ','; put(os, pa.cm);
    os << ','; put(os, pa.r_cf);
    os << ','; put(os, pa.r_df);
    os << ','; put(os, pa.relay_cn_power(ch));
    os << ',';
    for (size_t i = 0; i < r.rates.binding.size(); ++i) {
        if (i) os << '|';
        os << r.rates.binding[i];
    }
    os << '\n';
}

void write_estimate_csv(std::ostream& os, const GdofEstimate& e) {
    os << "snr_db,sum_rate_bits,upper_bound_bits,slope_estimate\n";
    for (size_t i = 0; i < e.snrs.size(); ++i) {
        put(os, 10.0 * std::log10(e.snrs[i]));
        os << ',';
        put(os, e.sum_rates[i]);
        os << ',';
        put(os, e.upper_bounds[i]);
        os << ',';
        put(os, e.slope);
        os << '\n';
    }
}

} // namespace irclab::gauss
