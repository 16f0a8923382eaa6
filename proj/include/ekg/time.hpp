#pragma once

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

#include "ekg/errors.hpp"

namespace ekg {

// Milliseconds since the Unix epoch, UTC. All timestamps in the engine use this.
struct Timestamp {
    std::int64_t millis = 0;

    friend auto operator<=>(const Timestamp&, const Timestamp&) = default;
};

namespace time_detail {

// Days between 1970-01-01 and y-m-d (proleptic Gregorian).
inline std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

inline void civil_from_days(std::int64_t z, std::int64_t& y, unsigned& m, unsigned& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = doy - (153 * mp + 2) / 5 + 1;
    m = mp + (mp < 10 ? 3 : -9);
    y += m <= 2;
}

inline bool read_digits(std::string_view s, std::size_t& pos, int count, int& out) {
    if (pos + count > s.size()) return false;
    int v = 0;
    for (int i = 0; i < count; ++i) {
        char c = s[pos + i];
        if (c < '0' || c > '9') return false;
        v = v * 10 + (c - '0');
    }
    pos += count;
    out = v;
    return true;
}

}  // namespace time_detail

// Parses per a small pattern language: yyyy yy MM dd HH mm ss SSS are field
// tokens, everything else matches literally. Two-digit years map to 2000+yy.
inline std::optional<Timestamp> parse_timestamp_pattern(std::string_view text,
                                                        std::string_view pattern) {
    using time_detail::read_digits;
    int year = 1970, month = 1, day = 1, hour = 0, minute = 0, second = 0, milli = 0;
    std::size_t tp = 0;
    for (std::size_t fp = 0; fp < pattern.size();) {
        auto starts = [&](std::string_view tok) { return pattern.substr(fp, tok.size()) == tok; };
        if (starts("yyyy")) {
            if (!read_digits(text, tp, 4, year)) return std::nullopt;
            fp += 4;
        } else if (starts("SSS")) {
            if (!read_digits(text, tp, 3, milli)) return std::nullopt;
            fp += 3;
        } else if (starts("yy")) {
            if (!read_digits(text, tp, 2, year)) return std::nullopt;
            year += 2000;
            fp += 2;
        } else if (starts("MM")) {
            if (!read_digits(text, tp, 2, month)) return std::nullopt;
            fp += 2;
        } else if (starts("dd")) {
            if (!read_digits(text, tp, 2, day)) return std::nullopt;
            fp += 2;
        } else if (starts("HH")) {
            if (!read_digits(text, tp, 2, hour)) return std::nullopt;
            fp += 2;
        } else if (starts("mm")) {
            if (!read_digits(text, tp, 2, minute)) return std::nullopt;
            fp += 2;
        } else if (starts("ss")) {
            if (!read_digits(text, tp, 2, second)) return std::nullopt;
            fp += 2;
        } else {
            if (tp >= text.size() || text[tp] != pattern[fp]) return std::nullopt;
            ++tp;
            ++fp;
        }
    }
    if (tp != text.size()) return std::nullopt;
    if (month < 1 || month > 12 || day < 1 || day > 31 || hour > 23 || minute > 59 || second > 60)
        return std::nullopt;
    std::int64_t days = time_detail::days_from_civil(year, static_cast<unsigned>(month),
                                                     static_cast<unsigned>(day));
    return Timestamp{((days * 24 + hour) * 60 + minute) * 60000 + second * 1000 + milli};
}

// ISO 8601: "YYYY-MM-DD[ T]hh:mm[:ss[.fff]][Z|+hh:mm|-hh:mm]". Offsets are
// normalized to UTC.
inline std::optional<Timestamp> parse_timestamp_iso8601(std::string_view s) {
    using time_detail::read_digits;
    std::size_t p = 0;
    int year, month, day, hour, minute, second = 0, milli = 0;
    if (!read_digits(s, p, 4, year)) return std::nullopt;
    if (p >= s.size() || s[p++] != '-') return std::nullopt;
    if (!read_digits(s, p, 2, month)) return std::nullopt;
    if (p >= s.size() || s[p++] != '-') return std::nullopt;
    if (!read_digits(s, p, 2, day)) return std::nullopt;
    if (p >= s.size() || (s[p] != 'T' && s[p] != ' ')) return std::nullopt;
    ++p;
    if (!read_digits(s, p, 2, hour)) return std::nullopt;
    if (p >= s.size() || s[p++] != ':') return std::nullopt;
    if (!read_digits(s, p, 2, minute)) return std::nullopt;
    if (p < s.size() && s[p] == ':') {
        ++p;
        if (!read_digits(s, p, 2, second)) return std::nullopt;
        if (p < s.size() && s[p] == '.') {
            ++p;
            if (!read_digits(s, p, 3, milli)) return std::nullopt;
        }
    }
    std::int64_t offset_ms = 0;
    if (p < s.size()) {
        if (s[p] == 'Z') {
            ++p;
        } else if (s[p] == '+' || s[p] == '-') {
            int sign = s[p] == '+' ? 1 : -1;
            ++p;
            int oh, om;
            if (!read_digits(s, p, 2, oh)) return std::nullopt;
            if (p >= s.size() || s[p++] != ':') return std::nullopt;
            if (!read_digits(s, p, 2, om)) return std::nullopt;
            offset_ms = sign * (oh * 60 + om) * 60000LL;
        }
    }
    if (p != s.size()) return std::nullopt;
    if (month < 1 || month > 12 || day < 1 || day > 31 || hour > 23 || minute > 59 || second > 60)
        return std::nullopt;
    std::int64_t days = time_detail::days_from_civil(year, static_cast<unsigned>(month),
                                                     static_cast<unsigned>(day));
    std::int64_t ms = ((days * 24 + hour) * 60 + minute) * 60000 + second * 1000 + milli;
    return Timestamp{ms - offset_ms};
}

// The pattern "iso8601" (or empty) selects the ISO parser.
inline std::optional<Timestamp> parse_timestamp(std::string_view text, std::string_view pattern) {
    if (pattern.empty() || pattern == "iso8601" || pattern == "ISO8601")
        return parse_timestamp_iso8601(text);
    return parse_timestamp_pattern(text, pattern);
}

// Canonical UTC rendering used by exporters: 2019-08-29T10:30:00.000Z
inline std::string format_timestamp_iso8601(Timestamp t) {
    std::int64_t ms = t.millis;
    std::int64_t days = ms / 86400000;
    std::int64_t rem = ms % 86400000;
    if (rem < 0) {
        rem += 86400000;
        --days;
    }
    std::int64_t y;
    unsigned mo, d;
    time_detail::civil_from_days(days, y, mo, d);
    int hh = static_cast<int>(rem / 3600000);
    int mi = static_cast<int>(rem / 60000 % 60);
    int ss = static_cast<int>(rem / 1000 % 60);
    int mmm = static_cast<int>(rem % 1000);
    char buf[40];
    std::snprintf(buf, sizeof buf, "%04lld-%02u-%02uT%02d:%02d:%02d.%03dZ",
                  static_cast<long long>(y), mo, d, hh, mi, ss, mmm);
    return buf;
}

// ISO 8601 duration, hours as the largest unit: PT24H, PT4H46M, PT0.5S, PT0S.
inline std::string format_duration_iso8601(std::int64_t ms) {
    std::string out = "PT";
    if (ms < 0) {
        out = "-PT";
        ms = -ms;
    }
    std::int64_t h = ms / 3600000;
    std::int64_t m = ms / 60000 % 60;
    std::int64_t s = ms / 1000 % 60;
    std::int64_t f = ms % 1000;
    if (h) out += std::to_string(h) + "H";
    if (m) out += std::to_string(m) + "M";
    if (s || f || (!h && !m)) {
        out += std::to_string(s);
        if (f) {
            char buf[8];
            std::snprintf(buf, sizeof buf, ".%03lld", static_cast<long long>(f));
            out += buf;
        }
        out += "S";
    }
    return out;
}

}  // namespace ekg
