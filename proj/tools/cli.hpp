#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace qwalk::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitInternal = 3;

/// Default directory for output files when no explicit path is given.
inline constexpr const char* kOutputDirEnv = "QWALK_OUTPUT_DIR";

/// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qwalk::cli
