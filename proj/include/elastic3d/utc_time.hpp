#pragma once

// UTC timestamps with microsecond resolution. Accepts "YYYY-MM-DD hh:mm:ss[.f]"
// or the ISO form with 'T' separator and optional trailing 'Z'.

#include <chrono>
#include <cstdio>
#include <string>
#include <string_view>

#include "errors.hpp"

namespace elastic3d {

using UtcTime = std::chrono::sys_time<std::chrono::microseconds>;

namespace detail {

inline int parse_fixed_int(std::string_view s, std::size_t pos, std::size_t len, std::string_view whole) {
    if (pos + len > s.size()) {
        throw DomainError("malformed timestamp '" + std::string(whole) + "'");
    }
    int v = 0;
    for (std::size_t i = pos; i < pos + len; ++i) {
        const char c = s[i];
        if (c < '0' || c > '9') {
            throw DomainError("malformed timestamp '" + std::string(whole) + "'");
        }
        v = v * 10 + (c - '0');
    }
    return v;
}

}  // namespace detail

inline UtcTime parse_utc(std::string_view text) {
    using namespace std::chrono;
    std::string_view s = text;
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == 'Z')) s.remove_suffix(1);

    // YYYY-MM-DD?hh:mm:ss
    if (s.size() < 19 || s[4] != '-' || s[7] != '-' || (s[10] != 'T' && s[10] != ' ') || s[13] != ':' ||
        s[16] != ':') {
        throw DomainError("malformed timestamp '" + std::string(text) + "'");
    }
    const int yr = detail::parse_fixed_int(s, 0, 4, text);
    const int mo = detail::parse_fixed_int(s, 5, 2, text);
    const int dy = detail::parse_fixed_int(s, 8, 2, text);
    const int hh = detail::parse_fixed_int(s, 11, 2, text);
    const int mm = detail::parse_fixed_int(s, 14, 2, text);
    const int ss = detail::parse_fixed_int(s, 17, 2, text);

    long long micros = 0;
    if (s.size() > 19) {
        if (s[19] != '.') throw DomainError("malformed timestamp '" + std::string(text) + "'");
        const std::string_view frac = s.substr(20);
        if (frac.empty() || frac.size() > 6) {
            throw DomainError("timestamp fraction must have 1-6 digits: '" + std::string(text) + "'");
        }
        micros = detail::parse_fixed_int(frac, 0, frac.size(), text);
        for (std::size_t i = frac.size(); i < 6; ++i) micros *= 10;
    }

    const year_month_day ymd{year{yr}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(dy)}};
    if (!ymd.ok() || hh > 23 || mm > 59 || ss > 60) {
        throw DomainError("invalid calendar time '" + std::string(text) + "'");
    }
    return sys_days{ymd} + hours{hh} + minutes{mm} + seconds{ss} + microseconds{micros};
}

inline std::string format_utc(UtcTime t) {
    using namespace std::chrono;
    const auto day_point = floor<days>(t);
    const year_month_day ymd{day_point};
    auto rem = t - day_point;
    const auto h = duration_cast<hours>(rem);
    rem -= h;
    const auto m = duration_cast<minutes>(rem);
    rem -= m;
    const auto s = duration_cast<seconds>(rem);
    rem -= s;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02d.%06lldZ", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()), static_cast<int>(h.count()),
                  static_cast<int>(m.count()), static_cast<int>(s.count()), static_cast<long long>(rem.count()));
    return buf;
}

/// Signed seconds from `from` to `to`.
inline double seconds_between(UtcTime from, UtcTime to) {
    return std::chrono::duration<double>(to - from).count();
}

}  // namespace elastic3d
