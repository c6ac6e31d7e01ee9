#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hypmax::cli {

/// Runs one command line (without the program name). Returns 0 when every
/// declared check passed, 1 when one failed, 2 on a usage error.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "a..b" (inclusive integers) or a single integer.
std::vector<int> parse_int_range(const std::string& text);
/// "a..b:step" (inclusive, last point clipped to b), "a..b" with step 1, or a single value.
std::vector<double> parse_real_range(const std::string& text);

}  // namespace hypmax::cli
