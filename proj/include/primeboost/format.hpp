#pragma once

#include <string>
#include <string_view>

namespace primeboost {

/// Shortest decimal that parses back to the same double.
[[nodiscard]] std::string format_double(double v);
[[nodiscard]] double parse_double(std::string_view text);

} // namespace primeboost
