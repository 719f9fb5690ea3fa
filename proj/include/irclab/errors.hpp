#ifndef IRCLAB_ERRORS_HPP
#define IRCLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace irclab {

// Bad user input or a violated precondition.  The CLI maps this to exit code 2.
struct validation_error : std::runtime_error {
    explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

// A quantity was requested outside the regime where it is defined.
struct out_of_scope_error : std::runtime_error {
    explicit out_of_scope_error(const std::string& what) : std::runtime_error(what) {}
};

// The deterministic scheme constructor cannot cover the requested channel.
// Carries the capacity target so callers can report what was unreachable.
struct unsupported_regime_error : std::runtime_error {
    unsupported_regime_error(const std::string& what, double target_bits_, int best_bits_)
        : std::runtime_error(what), target_bits(target_bits_), best_bits(best_bits_) {}
    double target_bits = 0.0;
    int best_bits = 0;
};

} // namespace irclab

#endif
