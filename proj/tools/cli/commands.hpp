#ifndef GOAL_TOOLS_COMMANDS_HPP
#define GOAL_TOOLS_COMMANDS_HPP

#include <ostream>
#include <string>
#include <vector>

namespace goal::cli {

/// Runs the command line `args` (args[0] is the program name). Returns the
/// process exit code; failures print one "goal: error CODE (exit N): ..."
/// line to `err`.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace goal::cli

#endif  // GOAL_TOOLS_COMMANDS_HPP
