#pragma once

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace dlpad::cli {

inline constexpr const char* kVersion = "1.0.0";

enum ExitCode { kSuccess = 0, kValidationFailure = 1, kUsageError = 2 };

using Cell = std::variant<long long, double, std::string>;

/// A versioned table. CSV writes one header row; JSON wraps rows in
/// {"meta": ..., "rows": [...]}.
struct Table {
  std::string schema;  // e.g. "cumulants.v1"
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

/// 17 significant digits, round-trip safe.
std::string format_double(double v);

void write_csv(const Table& table, std::ostream& out);

/// Runs one command line (args exclude the program name). Output goes to
/// `out` unless --out is given; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dlpad::cli
