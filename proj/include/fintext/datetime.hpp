#pragma once

#include <cstdint>
#include <string>

namespace fintext {

// Calendar helpers. Timestamps are seconds since the Unix epoch (UTC),
// dates are days since the epoch. No time zones beyond UTC.

int64_t days_from_civil(int year, int month, int day);
void civil_from_days(int64_t days, int& year, int& month, int& day);

// "YYYY-MM-DD" -> epoch days. Throws on malformed input.
int64_t parse_date(const std::string& s);

// ISO-8601 "YYYY-MM-DD" or "YYYY-MM-DDTHH:MM:SS[Z]" -> epoch seconds.
int64_t parse_timestamp(const std::string& s);

std::string format_date(int64_t days);
std::string format_timestamp(int64_t seconds);

// Epoch seconds -> epoch days (floor).
int64_t timestamp_date(int64_t seconds);

}  // namespace fintext
