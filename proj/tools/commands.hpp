#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace onshell::cli {

struct CommandInfo {
  std::string name;
  std::string summary;
  /// Library operations this subcommand exposes.
  std::vector<std::string> operations;
};

const std::vector<CommandInfo>& command_registry();

/// Runs one invocation. args excludes the program name.
/// Exit codes: 0 ok, 1 usage or input error, 2 a mathematical "no".
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, std::istream& in);

}  // namespace onshell::cli
