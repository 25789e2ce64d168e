#pragma once

#include <ostream>

#include "idi/errors.hpp"

namespace idi {

/// 0 success, 1 validation error, 2 contradiction or inconsistency, 3 I/O.
int exit_code_for(ErrorCode code);

/// Entry point of the command-line tool (simulate, enumerate, retrieve,
/// verify). Returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace idi
