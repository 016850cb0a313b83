#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace susbam::cli {

// sysexits.h values
inline constexpr int kExitOk = 0;
inline constexpr int kExitFlagged = 2;
inline constexpr int kExitUsage = 64;
inline constexpr int kExitValidation = 65;
inline constexpr int kExitInternal = 70;
inline constexpr int kExitIo = 74;

/// Runs the `susbam` command line. `args` excludes the program name.
/// Machine-readable results go to `out` as newline-delimited JSON,
/// diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Directory holding the bundled catalog and survey CSVs.
std::filesystem::path data_dir();

}  // namespace susbam::cli
