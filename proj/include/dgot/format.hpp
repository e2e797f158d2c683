#pragma once

#include <charconv>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dgot {

/// Shortest round-trip decimal form; deterministic across runs.
inline std::string format_double(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    (void)ec;
    return std::string(buf, ptr);
}

inline double parse_double(std::string_view text) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size())
        throw std::invalid_argument("not a number: " + std::string(text));
    return value;
}

inline long parse_long(std::string_view text) {
    long value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size())
        throw std::invalid_argument("not an integer: " + std::string(text));
    return value;
}

} // namespace dgot
