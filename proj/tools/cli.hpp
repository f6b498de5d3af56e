#ifndef FVQA_TOOLS_CLI_HPP_
#define FVQA_TOOLS_CLI_HPP_

#include <ostream>
#include <string>
#include <vector>

namespace fvqa::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

// args excludes the program name. Data goes to out (or to --out files),
// diagnostics and progress to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fvqa::cli

#endif  // FVQA_TOOLS_CLI_HPP_
