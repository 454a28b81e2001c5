#include "fintext/datetime.hpp"

#include <cstdio>
#include <stdexcept>

namespace fintext {

// Howard Hinnant's civil date algorithms.
int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<int64_t>(doe) - 719468;
}

void civil_from_days(int64_t z, int& year, int& month, int& day) {
    z += 719468;
    const int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const int64_t y = static_cast<int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    day = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
    month = static_cast<int>(mp + (mp < 10 ? 3 : -9));
    year = static_cast<int>(y + (month <= 2));
}

namespace {

bool parse_int(const std::string& s, size_t pos, size_t len, int& out) {
    if (pos + len > s.size()) return false;
    int v = 0;
    for (size_t i = pos; i < pos + len; ++i) {
        if (s[i] < '0' || s[i] > '9') return false;
        v = v * 10 + (s[i] - '0');
    }
    out = v;
    return true;
}

}  // namespace

int64_t parse_date(const std::string& s) {
    int y, m, d;
    if (s.size() != 10 || s[4] != '-' || s[7] != '-' ||
        !parse_int(s, 0, 4, y) || !parse_int(s, 5, 2, m) || !parse_int(s, 8, 2, d) ||
        m < 1 || m > 12 || d < 1 || d > 31) {
        throw std::runtime_error("malformed date: '" + s + "'");
    }
    return days_from_civil(y, m, d);
}

int64_t parse_timestamp(const std::string& s) {
    if (s.size() == 10) return parse_date(s) * 86400;
    if (s.size() < 19 || (s[10] != 'T' && s[10] != ' ') || s[13] != ':' || s[16] != ':') {
        throw std::runtime_error("malformed timestamp: '" + s + "'");
    }
    if (s.size() > 19 && !(s.size() == 20 && s[19] == 'Z')) {
        throw std::runtime_error("malformed timestamp (expect UTC 'Z' or none): '" + s + "'");
    }
    int64_t days = parse_date(s.substr(0, 10));
    int hh, mm, ss;
    if (!parse_int(s, 11, 2, hh) || !parse_int(s, 14, 2, mm) || !parse_int(s, 17, 2, ss) ||
        hh > 23 || mm > 59 || ss > 60) {
        throw std::runtime_error("malformed timestamp: '" + s + "'");
    }
    return days * 86400 + hh * 3600 + mm * 60 + ss;
}

std::string format_date(int64_t days) {
    int y, m, d;
    civil_from_days(days, y, m, d);
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", y, m, d);
    return buf;
}

std::string format_timestamp(int64_t seconds) {
    int64_t days = seconds >= 0 ? seconds / 86400 : (seconds - 86399) / 86400;
    int64_t rem = seconds - days * 86400;
    char buf[16];
    std::snprintf(buf, sizeof buf, "T%02d:%02d:%02dZ", static_cast<int>(rem / 3600),
                  static_cast<int>(rem / 60 % 60), static_cast<int>(rem % 60));
    return format_date(days) + buf;
}

int64_t timestamp_date(int64_t seconds) {
    return seconds >= 0 ? seconds / 86400 : (seconds - 86399) / 86400;
}

}  // namespace fintext
