#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>

#include "dpboot/core.hpp"

namespace dpboot::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;

/// Runs the command line `args` (args[0] is the program name). Every usage
/// or input error is reported on `err` and returns kExitUsage.
int run(std::span<const std::string> args, std::istream& in, std::ostream& out, std::ostream& err);

/// One float per line; blank lines and lines starting with '#' are skipped.
/// Throws InvalidInput naming `source` and the offending line number.
Dataset parse_dataset(std::istream& in, std::string_view source);

/// Parses "normal:MU,SD" or "uniform:LO,HI".
BaseMeasure parse_parametric(std::string_view text);

/// 17 significant digits, shortest %g form ("7", "0.10000000000000001").
std::string format_double(double v);

}  // namespace dpboot::cli
