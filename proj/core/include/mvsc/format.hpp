#pragma once

#include <charconv>
#include <string>
#include <system_error>

namespace mvsc {

// Locale-independent %.{digits}g. 17 digits round-trips every double.
inline std::string format_number(double x, int digits = 17) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, digits);
    return res.ec == std::errc{} ? std::string(buf, res.ptr) : std::string("nan");
}

} // namespace mvsc
