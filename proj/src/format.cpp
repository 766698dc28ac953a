#include "primeboost/format.hpp"

#include "primeboost/errors.hpp"

#include <array>
#include <charconv>

namespace primeboost {

std::string format_double(double v) {
    std::array<char, 64> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    if (ec != std::errc{}) throw std::logic_error("to_chars failed");
    return {buf.data(), ptr};
}

double parse_double(std::string_view text) {
    double v = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc{} || ptr != end) {
        throw DomainError("not a number: '" + std::string(text) + "'");
    }
    return v;
}

} // namespace primeboost
