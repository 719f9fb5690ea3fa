#include "irclab/run.hpp"

#include <cstdio>

#include "irclab/errors.hpp"
#include "irclab/gauss.hpp"
#include "irclab/gdof.hpp"
#include "irclab/ld_scheme.hpp"

namespace irclab::cli {

namespace {

void put(std::ostream& os, double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    os << buf;
}

void run_bounds(const RunConfig& cfg, std::ostream& out) {
    const gdof::Point pt = gdof::evaluate_point(gdof::Params{cfg.alpha, cfg.beta, cfg.gamma});
    out << "bound_new,bound_known,gdof_irc,gdof_ic,binding_term,regime\n";
    put(out, pt.bound_new_value);
    out << ',';
    put(out, pt.bound_known_value);
    out << ',';
    if (pt.irc) put(out, *pt.irc);
    out << ',';
    put(out, pt.ic);
    out << ',';
    if (pt.binding) out << gdof::term_label(*pt.binding);
    out << ',' << gdof::regime_label(pt.regime) << '\n';
}

void run_ld_sim(const RunConfig& cfg, std::ostream& out, std::uint64_t seed,
                std::ostream* trace) {
    const ld::LdParams p = ld::LdParams::make(cfg.nd, cfg.nc, cfg.nr, cfg.ns);
    ld::Allocation a;
    if (cfg.allocation == "toy") {
        a = ld::toy_allocation();
    } else if (cfg.allocation == "auto") {
        a = ld::construct_allocation(p);
    } else {
        const ld::SearchResult sr = ld::search_allocation(p);
        if (!sr.best) throw validation_error("ld-sim: search found no feasible allocation");
        a = *sr.best;
    }
    const ld::ValidationReport v = ld::validate_allocation(a, p);
    if (!v.ok) throw validation_error("ld-sim: allocation invalid: " + v.first_violation);
    const ld::SimReport r = ld::simulate(p, a, cfg.blocks, seed, trace);
    ld::write_sim_csv(out, p, r);
}

gauss::OptimizerConfig optimizer_config(const RunConfig& cfg, std::uint64_t seed) {
    gauss::OptimizerConfig ocfg;
    ocfg.W = cfg.W;
    ocfg.L = cfg.L;
    ocfg.tol = cfg.tol;
    ocfg.step_init = cfg.step_init;
    ocfg.step_min = cfg.step_min;
    ocfg.random_seeds = cfg.restarts;
    ocfg.seed = seed;
    if (!cfg.seed_exponents.empty()) {
        const size_t want = static_cast<size_t>(2 * cfg.W + cfg.L + 4);
        if (cfg.seed_exponents.size() != want)
            throw validation_error("seed_exponents needs " + std::to_string(want) +
                                   " entries for these split counts");
        ocfg.extra_seeds.push_back(cfg.seed_exponents);
    }
    return ocfg;
}

void run_gauss_opt(const RunConfig& cfg, std::ostream& out, std::uint64_t seed) {
    GaussianChannel ch;
    if (cfg.has_gains)
        ch = GaussianChannel{cfg.hd, cfg.hc, cfg.hr, cfg.hs, cfg.power};
    else
        ch = gauss::channel_from_pattern(gdof::Params{cfg.alpha, cfg.beta, cfg.gamma}, cfg.snr);
    const gauss::OptResult r = gauss::optimize_powers(ch, optimizer_config(cfg, seed));
    gauss::write_opt_csv(out, ch, r);
}

void run_gdof_est(const RunConfig& cfg, std::ostream& out, std::uint64_t seed) {
    const gauss::GdofEstimate est = gauss::estimate_gdof(
        gdof::Params{cfg.alpha, cfg.beta, cfg.gamma}, cfg.snr_list, optimizer_config(cfg, seed));
    gauss::write_estimate_csv(out, est);
}

} // namespace

void run(const RunConfig& cfg, std::ostream& out, std::uint64_t seed, std::ostream* trace) {
    switch (cfg.command) {
    case RunConfig::Command::Bounds:
        run_bounds(cfg, out);
        break;
    case RunConfig::Command::Sweep:
        gdof::write_sweep_csv(
            out, gdof::sweep(cfg.alpha_min, cfg.alpha_max, cfg.alpha_step, cfg.beta, cfg.gamma));
        break;
    case RunConfig::Command::LdSim:
        run_ld_sim(cfg, out, seed, trace);
        break;
    case RunConfig::Command::GaussOpt:
        run_gauss_opt(cfg, out, seed);
        break;
    case RunConfig::Command::GdofEst:
        run_gdof_est(cfg, out, seed);
        break;
    }
}

} // namespace irclab::cli
