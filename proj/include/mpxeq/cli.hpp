#pragma once

#include <iosfwd>

namespace mpxeq {

// Batch front end; returns the process exit code (0 success, 1 invalid
// input, 2 solver failure). Testable in-process.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace mpxeq
