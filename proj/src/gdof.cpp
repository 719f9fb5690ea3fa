#include "irclab/gdof.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "irclab/errors.hpp"

namespace irclab::gdof {

bool Params::valid() const {
    return std::isfinite(alpha) && std::isfinite(beta) && std::isfinite(gamma) &&
           alpha >= 0.0 && beta >= 0.0 && gamma >= 0.0;
}

double c_of(double x) {
    if (!(1.0 + x > 0.0))
        throw validation_error("c_of: argument of the logarithm must be positive");
    return 0.5 * std::log2(1.0 + x);
}

double c_plus(double x) { return std::max(0.0, c_of(x)); }

Params exponents_from_gains(const GaussianChannel& ch) {
    if (!ch.valid() || ch.hd == 0.0 || ch.hc == 0.0 || ch.hr == 0.0 || ch.hs == 0.0)
        throw validation_error("exponents_from_gains: gains must be nonzero and power positive");
    const double base = ch.snr_d();
    if (base <= 1.0)
        throw validation_error("exponents_from_gains: degenerate channel, direct SNR must exceed 1");
    const double denom = std::log(base);
    return Params{std::log(ch.snr_c()) / denom, std::log(ch.snr_r()) / denom,
                  std::log(ch.snr_s()) / denom};
}

std::string term_label(Term t) {
    switch (t) {
    case Term::TwoMaxOneBeta:   return "2max(1,beta)";
    case Term::TwoMaxOneGamma:  return "2max(1,gamma)";
    case Term::RelayPlusExcess: return "max(alpha,beta)+gamma-alpha";
    case Term::GammaPlusAlpha:  return "gamma+alpha";
    case Term::AlphaPlusBeta:   return "alpha+beta";
    }
    return "?";
}

double bound_new(const Params& p) { return p.alpha + p.beta; }

namespace {

BoundValue min_of(const std::array<std::pair<double, Term>, 4>& terms) {
    BoundValue best{terms[0].first, terms[0].second};
    for (const auto& [v, t] : terms) {
        if (v < best.value) {
            best.value = v;
            best.term = t;
        }
    }
    return best;
}

} // namespace

BoundValue bound_known(const Params& p) {
    const double excess = std::max(p.gamma - p.alpha, 0.0);
    return min_of({{
        {2.0 * std::max(1.0, p.beta), Term::TwoMaxOneBeta},
        {2.0 * std::max(1.0, p.gamma), Term::TwoMaxOneGamma},
        {std::max(p.alpha, p.beta) + excess, Term::RelayPlusExcess},
        {p.gamma + p.alpha, Term::GammaPlusAlpha},
    }});
}

BoundValue gdof_irc(const Params& p) {
    if (!p.theorem_scope())
        throw out_of_scope_error("gdof_irc: requires 1 < alpha < gamma");
    return min_of({{
        {2.0 * std::max(1.0, p.beta), Term::TwoMaxOneBeta},
        {std::max(p.alpha, p.beta) + p.gamma - p.alpha, Term::RelayPlusExcess},
        {p.gamma + p.alpha, Term::GammaPlusAlpha},
        {p.alpha + p.beta, Term::AlphaPlusBeta},
    }});
}

double gdof_ic(const Params& p) { return std::min(p.alpha, 2.0); }

std::string regime_label(Regime r) {
    switch (r) {
    case Regime::FutureRich:        return "future-rich";
    case Regime::Boundary:          return "boundary";
    case Regime::FutureLimited:     return "future-limited";
    case Regime::OutOfTheoremScope: return "out-of-scope";
    }
    return "?";
}

Regime classify_regime(const Params& p, double tol) {
    if (!p.theorem_scope()) return Regime::OutOfTheoremScope;
    const double gap = 2.0 * p.alpha - p.gamma;
    if (std::abs(gap) <= tol) return Regime::Boundary;
    return gap < 0.0 ? Regime::FutureRich : Regime::FutureLimited;
}

Point evaluate_point(const Params& p) {
    Point pt;
    pt.params = p;
    pt.bound_new_value = bound_new(p);
    const BoundValue known = bound_known(p);
    pt.bound_known_value = known.value;
    pt.bound_known_term = known.term;
    if (p.theorem_scope()) {
        const BoundValue d = gdof_irc(p);
        pt.irc = d.value;
        pt.binding = d.term;
    }
    pt.ic = gdof_ic(p);
    pt.regime = classify_regime(p);
    return pt;
}

std::vector<Point> sweep(double alpha_min, double alpha_max, double step,
                         double beta, double gamma) {
    if (!(step > 0.0)) throw validation_error("sweep: step must be positive");
    if (alpha_min < 0.0 || alpha_max > gamma + 1.0 + 1e-12)
        throw validation_error("sweep: alpha range must lie within [0, gamma+1]");
    if (alpha_max < alpha_min) throw validation_error("sweep: empty alpha range");

    std::vector<Point> points;
    const double span = alpha_max - alpha_min;
    const long n = static_cast<long>(std::floor(span / step + 1e-9));
    points.reserve(static_cast<size_t>(n) + 1);
    for (long i = 0; i <= n; ++i) {
        const double alpha = alpha_min + static_cast<double>(i) * step;
        points.push_back(evaluate_point(Params{alpha, beta, gamma}));
    }
    return points;
}

namespace {

void write_number(std::ostream& os, double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    os << buf;
}

} // namespace

void write_sweep_csv(std::ostream& os, const std::vector<Point>& points) {
    os << "alpha,bound_new,bound_known,gdof_irc,gdof_ic,binding_term,regime\n";
    for (const Point& pt : points) {
        write_number(os, pt.params.alpha);
        os << ',';
        write_number(os, pt.bound_new_value);
        os << ',';
        write_number(os, pt.bound_known_value);
        os << ',';
        if (pt.irc) write_number(os, *pt.irc);
        os << ',';
        write_number(os, pt.ic);
        os << ',';
        if (pt.binding) os << term_label(*pt.binding);
        os << ',' << regime_label(pt.regime) << '\n';
    }
}

} // namespace irclab::gdof
