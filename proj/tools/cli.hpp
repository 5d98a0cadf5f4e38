// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bpop::cli
{

enum ExitCode : int
{
  Ok = 0,
  Violation = 1,
  Usage = 2,
  Numeric = 3
};

// Runs one subcommand. args excludes the program name.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);
int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

}  // namespace bpop::cli
