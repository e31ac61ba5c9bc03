#pragma once

// The qcalc command line. Exit codes: 0 all checks pass, 1 some check failed
// (or the computation itself failed), 2 UsageError, 3 ConfigParseError.

#include <iosfwd>

namespace qcalc {

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qcalc
