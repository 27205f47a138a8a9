#pragma once

#include <charconv>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>

namespace hybridcell {

/// Shortest decimal text that parses back to the same double.
inline std::string format_number(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return {buf, res.ptr};
}

inline std::string format_number(std::int64_t value) {
    return std::to_string(value);
}

inline std::string format_number(int value) {
    return std::to_string(value);
}

/// Whole-string parse; nullopt on trailing garbage or range error.
template <class T>
std::optional<T> parse_number(std::string_view text) {
    T value{};
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (!text.empty() && text.front() == '+')
        ++first;
    const auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc{} || res.ptr != last || first == last)
        return std::nullopt;
    return value;
}

} // namespace hybridcell
