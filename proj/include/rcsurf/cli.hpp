#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rcsurf {

/// Subcommands verify, fields, integrate, list. Exit codes: 0 success,
/// 1 verification failure, 2 input or configuration error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, char** argv);

}  // namespace rcsurf
