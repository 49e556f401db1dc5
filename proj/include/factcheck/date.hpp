#pragma once

#include <compare>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

#include "factcheck/errors.hpp"

namespace factcheck {

// Calendar date with ISO-8601 (YYYY-MM-DD) parsing. Claim statement dates and
// page publication dates only need day resolution, so no time-of-day here.
struct Date {
    int year = 0;
    int month = 0;
    int day = 0;

    auto operator<=>(const Date&) const = default;

    bool valid() const {
        if (year < 1 || month < 1 || month > 12 || day < 1) return false;
        static const int days[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
        int max_day = days[month - 1];
        if (month == 2 && (year % 4 == 0 && (year % 100 != 0 || year % 400 == 0))) max_day = 29;
        return day <= max_day;
    }

    std::string to_string() const {
        char buf[16];
        std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year, month, day);
        return buf;
    }

    Date prev_day() const {
        Date d = *this;
        if (--d.day >= 1) return d;
        if (--d.month < 1) {
            d.month = 12;
            --d.year;
        }
        for (d.day = 31; d.day > 28; --d.day) {
            if (Date{d.year, d.month, d.day}.valid()) break;
        }
        return d;
    }
};

inline std::optional<Date> try_parse_date(std::string_view s) {
    // Accepts YYYY-MM-DD, tolerating a trailing time component (e.g. Bing's
    // datePublished "2014-03-01T08:00:00").
    if (s.size() < 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
    auto digits = [&](std::size_t at, std::size_t len) -> int {
        int v = 0;
        for (std::size_t i = at; i < at + len; ++i) {
            if (s[i] < '0' || s[i] > '9') return -1;
            v = v * 10 + (s[i] - '0');
        }
        return v;
    };
    Date d{digits(0, 4), digits(5, 2), digits(8, 2)};
    if (s.size() > 10 && s[10] != 'T' && s[10] != ' ') return std::nullopt;
    if (!d.valid()) return std::nullopt;
    return d;
}

inline Date parse_date(std::string_view s) {
    auto d = try_parse_date(s);
    if (!d) throw InvalidDate("not an ISO-8601 date: " + std::string(s));
    return *d;
}

}  // namespace factcheck
