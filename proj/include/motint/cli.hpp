#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "motint/error.hpp"

namespace motint::cli {

/// 0 success, 1 domain error, 2 parse or validation error.
int exit_code(ErrorCode code);

/// Runs one command; args exclude the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace motint::cli
