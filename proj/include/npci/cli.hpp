#pragma once

#include <iosfwd>

namespace npci {

// Entry point of the npci tool. Subcommands: test, simulate, mc, granger.
// Returns 0 on success. Failures print one line to `err` of the form
//   npci: error[<kind>]: <message>
// and return a nonzero code.
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace npci
