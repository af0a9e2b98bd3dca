#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace dw::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kCheckFailed = 1;
inline constexpr int kUsage = 2;
inline constexpr int kRuntime = 3;

/// Runs one `dwitness` invocation. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace dw::cli
