#ifndef IRCLAB_CONFIG_HPP
#define IRCLAB_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace irclab::cli {

// Parsed and validated experiment description.  One command per run.
struct RunConfig {
    enum class Command { Bounds, Sweep, LdSim, GaussOpt, GdofEst };
    Command command = Command::Bounds;

    // exponent pattern (bounds, sweep, gauss-opt, gdof-est)
    double alpha = 0.0, beta = 0.0, gamma = 0.0;

    // sweep grid
    double alpha_min = 0.0, alpha_max = 0.0, alpha_step = 0.0;

    // deterministic-model run
    int nd = 0, nc = 0, nr = 0, ns = 0, blocks = 0;
    std::string allocation = "auto"; // toy | auto | search

    // Gaussian channel, either explicit gains or a pattern at one SNR
    bool has_gains = false;
    double hd = 0.0, hc = 0.0, hr = 0.0, hs = 0.0, power = 0.0;
    bool has_snr = false;
    double snr = 0.0;

    // optimizer knobs
    int W = 2, L = 2;
    double tol = 1e-4;
    double step_init = 0.4, step_min = 0.02;
    int restarts = 4;
    std::vector<double> seed_exponents; // optional warm-start vector

    std::vector<double> snr_list; // gdof-est
};

// Strict key=value parser: unknown keys are rejected, missing required keys
// reported with the full list, malformed values carry line numbers.
RunConfig parse_config(const std::string& text);

} // namespace irclab::cli

#endif
