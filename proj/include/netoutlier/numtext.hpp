#pragma once

#include <charconv>
#include <string>
#include <string_view>

#include "netoutlier/errors.hpp"

namespace netoutlier {

// Shortest decimal string that round-trips to the same double. Used for all
// CSV output so identical runs produce identical bytes.
inline std::string to_shortest_string(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;  // 32 chars always suffice for shortest form
    return std::string(buf, ptr);
}

inline double parse_double(std::string_view text, const std::string& context) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw FormatError("not a number: '" + std::string(text) + "' in " + context);
    }
    return value;
}

}  // namespace netoutlier
