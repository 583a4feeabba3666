#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace srwec::cli {

/// Process exit codes.
enum Exit : int { kOk = 0, kUsage = 1, kData = 2, kNumeric = 3 };

/// Full command line (argv[0] included). Summaries go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace srwec::cli
