#ifndef NLB_TOOLS_CLI_HPP
#define NLB_TOOLS_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace nlb::cli {

enum Exit : int { ok = 0, failed = 1, usage = 2 };

/// args excludes the program name. Reports go to out, diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace nlb::cli

#endif
