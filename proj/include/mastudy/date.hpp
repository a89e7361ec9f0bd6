#pragma once

#include <chrono>
#include <cstdio>
#include <string>
#include <string_view>

#include "mastudy/error.hpp"

namespace mastudy {

using Date = std::chrono::year_month_day;

// Strict YYYY-MM-DD.
inline Date parse_date(std::string_view text) {
    auto digits = [&](std::size_t from, std::size_t count) {
        int value = 0;
        for (std::size_t i = from; i < from + count; ++i) {
            const char c = text[i];
            if (c < '0' || c > '9') fail(ErrorKind::Parse, "bad date '" + std::string(text) + "'");
            value = value * 10 + (c - '0');
        }
        return value;
    };
    if (text.size() != 10 || text[4] != '-' || text[7] != '-')
        fail(ErrorKind::Parse, "bad date '" + std::string(text) + "', expected YYYY-MM-DD");
    const Date d{std::chrono::year{digits(0, 4)},
                 std::chrono::month{static_cast<unsigned>(digits(5, 2))},
                 std::chrono::day{static_cast<unsigned>(digits(8, 2))}};
    if (!d.ok()) fail(ErrorKind::Parse, "invalid calendar date '" + std::string(text) + "'");
    return d;
}

inline std::string format_date(const Date& d) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()),
                  static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
    return buf;
}

inline int year_of(const Date& d) { return static_cast<int>(d.year()); }

inline Date add_days(const Date& d, int days) {
    return Date{std::chrono::sys_days{d} + std::chrono::days{days}};
}

inline bool is_weekend(const Date& d) {
    const std::chrono::weekday wd{std::chrono::sys_days{d}};
    return wd == std::chrono::Saturday || wd == std::chrono::Sunday;
}

} // namespace mastudy
