#pragma once

#include <ostream>
#include <string>
#include <string_view>

namespace morphoseq::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int { kOk = 0, kUsage = 1, kDataError = 2, kNumericError = 3 };

/// Runs the `morphoseq` command line. Normal output goes to `out`, usage
/// text, diagnostics and progress to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// 64-bit FNV-1a of a byte string, as 16 lowercase hex digits (corpus fingerprint).
std::string fnv1a64_hex(std::string_view bytes);

}  // namespace morphoseq::cli
