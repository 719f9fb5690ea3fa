#ifndef IRCLAB_GAUSS_HPP
#define IRCLAB_GAUSS_HPP

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "irclab/channel.hpp"
#include "irclab/gdof.hpp"

namespace irclab::gauss {

// Per-signal transmit powers (linear).  Both transmitters use the same
// allocation; the relay's neutralization power is derived, not chosen:
// it must retransmit the decoded sums scaled by hc/hr.
struct PowerAllocation {
    std::vector<double> cn;   // current splits, strongest first
    std::vector<double> cnF;  // next-block copies per split
    std::vector<double> cf;   // compute-forward splits
    double df = 0.0;
    double cm = 0.0;
    double r_cf = 0.0;
    double r_df = 0.0;

    int W() const { return static_cast<int>(cn.size()); }
    int L() const { return static_cast<int>(cf.size()); }

    double cn_total() const;
    double cnF_total() const;
    double cf_total() const;
    double tx_total() const; // everything one transmitter radiates

    // Power the relay spends re-emitting the neutralization sums.
    double relay_cn_power(const GaussianChannel& ch) const;
    double relay_total(const GaussianChannel& ch) const;

    bool feasible(const GaussianChannel& ch, double tol = 1e-9) const;
};

// Decoding caps at the relay, each already the min over its applicable forms.
struct RelayCaps {
    double cm = 0.0;
    std::vector<double> cf;
    double df = 0.0;
    std::vector<double> cn;
};

// Decoding caps at a destination under the fixed successive order.
struct DestCaps {
    double cm = 0.0;
    double df = 0.0;
    std::vector<double> cf;
    double r_cf = 0.0; // forwarding budget for the compute-forward sums
    std::vector<double> cn;
};

RelayCaps relay_constraints(const GaussianChannel& ch, const PowerAllocation& pa);
DestCaps destination_constraints(const GaussianChannel& ch, const PowerAllocation& pa);

struct RateAllocation {
    std::vector<double> cn, cf;
    double cm = 0.0;
    double df = 0.0;
    double r_cf = 0.0;
    double sum_rate = 0.0;
    std::vector<std::string> binding; // which cap bound each component
};

// Combine relay and destination caps per message, enforce the forwarding
// budget on the compute-forward splits, and sum both users' rates.
RateAllocation achievable_sum_rate(const GaussianChannel& ch, const PowerAllocation& pa);

// Genie-aided converse on the sum rate.
double upper_bound_sumrate(const GaussianChannel& ch);

struct OptimizerConfig {
    int W = 2;
    int L = 2;
    double tol = 1e-4;       // stop when a full sweep improves less than this
    double step_init = 0.4;  // exponent-space step schedule
    double step_min = 0.02;
    int random_seeds = 4;
    std::uint64_t seed = 1;
    std::vector<std::vector<double>> extra_seeds; // exponent vectors to include
};

struct OptResult {
    PowerAllocation powers;
    RateAllocation rates;
    std::vector<double> exponents; // internal parameter vector of the best point
    long iterations = 0;
    double final_improvement = 0.0;
};

// Derivative-free maximization of the achievable sum rate: structured seeds
// from the regime geometry plus coordinate ascent on power exponents.
// Deterministic given the configuration.
OptResult optimize_powers(const GaussianChannel& ch, const OptimizerConfig& cfg);

// Synthesize gains matching the exponent pattern at direct-link SNR snr.
GaussianChannel channel_from_pattern(const gdof::Params& pattern, double snr);

struct GdofEstimate {
    double slope = 0.0;
    std::vector<double> snrs;
    std::vector<double> sum_rates;
    std::vector<double> upper_bounds;
};

// Optimize at each SNR and fit the rate-vs-half-log-SNR slope.
GdofEstimate estimate_gdof(const gdof::Params& pattern, const std::vector<double>& snrs,
                           const OptimizerConfig& cfg);

void write_opt_csv(std::ostream& os, const GaussianChannel& ch, const OptResult& r);
void write_estimate_csv(std::ostream& os, const GdofEstimate& e);

} // namespace irclab::gauss

#endif
