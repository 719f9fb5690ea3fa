#ifndef IRCLAB_RUN_HPP
#define IRCLAB_RUN_HPP

#include <cstdint>
#include <ostream>

#include "irclab/config.hpp"

namespace irclab::cli {

// Dispatch one validated configuration, writing CSV to `out` and, when
// enabled, per-slot level diagrams to `trace`.  Throws validation_error for
// bad inputs; anything else is a runtime failure.
void run(const RunConfig& cfg, std::ostream& out, std::uint64_t seed,
         std::ostream* trace = nullptr);

} // namespace irclab::cli

#endif
