#ifndef IRCLAB_GDOF_HPP
#define IRCLAB_GDOF_HPP

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "irclab/channel.hpp"

namespace irclab::gdof {

// Exponent triple describing the channel at high SNR:
//   alpha = cross/direct, beta = relay/direct, gamma = source-relay/direct,
// each as a ratio of log-SNRs.
struct Params {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;

    bool valid() const;
    // Cross link stronger than the direct link.
    bool strong_interference() const { return alpha > 1.0; }
    // Open interval 1 < alpha < gamma where the exact GDoF expression applies.
    bool theorem_scope() const { return alpha > 1.0 && alpha < gamma; }
};

// Gaussian capacity function and its nonnegative clamp, logs base 2.
double c_of(double x);
double c_plus(double x);

// Extract (alpha, beta, gamma) from linear gains at finite power.
Params exponents_from_gains(const GaussianChannel& ch);

// Terms of the achievable/upper-bound minimum, in fixed evaluation order.
enum class Term {
    TwoMaxOneBeta,       // 2*max(1, beta)
    TwoMaxOneGamma,      // 2*max(1, gamma)   (known bound only)
    RelayPlusExcess,     // max(alpha, beta) + (gamma - alpha)
    GammaPlusAlpha,      // gamma + alpha
    AlphaPlusBeta,       // alpha + beta
};

std::string term_label(Term t);

struct BoundValue {
    double value = 0.0;
    Term term = Term::TwoMaxOneBeta;
};

// Genie-aided sum bound: alpha + beta.
double bound_new(const Params& p);

// Prior-art bound: min{2max(1,b), 2max(1,g), max(a,b)+(g-a)+, g+a}, with the
// term that attains it (first minimizer in the listed order wins ties).
BoundValue bound_known(const Params& p);

// Exact GDoF on 1 < alpha < gamma: min{2max(1,b), max(a,b)+g-a, g+a, a+b}.
// Throws out_of_scope_error outside the open interval.
BoundValue gdof_irc(const Params& p);

// Plain interference channel baseline for alpha >= 1.
double gdof_ic(const Params& p);

enum class Regime { FutureRich, Boundary, FutureLimited, OutOfTheoremScope };

std::string regime_label(Regime r);

// Equality tolerance on 2*alpha - gamma for the boundary case.
inline constexpr double kRegimeTol = 1e-9;

Regime classify_regime(const Params& p, double tol = kRegimeTol);

// One evaluated grid point of a sweep.
struct Point {
    Params params;
    double bound_new_value = 0.0;
    double bound_known_value = 0.0;
    Term bound_known_term = Term::TwoMaxOneBeta;
    std::optional<double> irc;   // present only in theorem scope
    std::optional<Term> binding; // minimizing term of irc, when present
    double ic = 0.0;
    Regime regime = Regime::OutOfTheoremScope;
};

Point evaluate_point(const Params& p);

// Evaluate every alpha on [alpha_min, alpha_max] with the given step.
std::vector<Point> sweep(double alpha_min, double alpha_max, double step,
                         double beta, double gamma);

// CSV emission: alpha,bound_new,bound_known,gdof_irc,gdof_ic,binding_term,regime.
// gdof_irc and binding_term are empty outside theorem scope.
void write_sweep_csv(std::ostream& os, const std::vector<Point>& points);

} // namespace irclab::gdof

#endif
