#include "selfsched/calendar.hpp"

#include <charconv>
#include <cstdio>

#include "selfsched/errors.hpp"

namespace selfsched {

namespace {

bool parse_uint(std::string_view text, int& out) {
  if (text.empty()) return false;
  for (char c : text) {
    if (c < '0' || c > '9') return false;
  }
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc{} && ptr == text.data() + text.size();
}

}  // namespace

Date Date::from_ymd(int year, unsigned month, unsigned day) {
  using namespace std::chrono;
  const year_month_day ymd{std::chrono::year{year}, std::chrono::month{month},
                           std::chrono::day{day}};
  if (!ymd.ok()) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", year, month, day);
    throw PlanningError(ErrorCode::InvalidDate, std::string("no such date ") + buf);
  }
  return Date(sys_days{ymd});
}

Date Date::parse_iso(std::string_view text) {
  int y = 0, m = 0, d = 0;
  if (text.size() != 10 || text[4] != '-' || text[7] != '-' ||
      !parse_uint(text.substr(0, 4), y) || !parse_uint(text.substr(5, 2), m) ||
      !parse_uint(text.substr(8, 2), d)) {
    throw PlanningError(ErrorCode::InvalidDate,
                        "expected YYYY-MM-DD, got '" + std::string(text) + "'");
  }
  return from_ymd(y, static_cast<unsigned>(m), static_cast<unsigned>(d));
}

std::chrono::year_month_day Date::ymd() const {
  return std::chrono::year_month_day{
      std::chrono::sys_days{std::chrono::days{days_}}};
}

int Date::year() const { return static_cast<int>(ymd().year()); }
unsigned Date::month() const { return static_cast<unsigned>(ymd().month()); }
unsigned Date::day() const { return static_cast<unsigned>(ymd().day()); }

std::chrono::weekday Date::weekday() const {
  return std::chrono::weekday{std::chrono::sys_days{std::chrono::days{days_}}};
}

std::string Date::iso() const {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", year(), month(), day());
  return buf;
}

YearMonth YearMonth::of(int year, int month) {
  if (month < 1 || month > 12) {
    throw PlanningError(ErrorCode::InvalidMonth,
                        "month must be 1..12, got " + std::to_string(month));
  }
  return {year, static_cast<unsigned>(month)};
}

YearMonth YearMonth::parse(std::string_view text) {
  int y = 0, m = 0;
  if (text.size() != 7 || text[4] != '-' || !parse_uint(text.substr(0, 4), y) ||
      !parse_uint(text.substr(5, 2), m)) {
    throw PlanningError(ErrorCode::InvalidMonth,
                        "expected YYYY-MM, got '" + std::string(text) + "'");
  }
  return of(y, m);
}

std::string YearMonth::str() const {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u", year, month);
  return buf;
}

Date YearMonth::first_day() const { return Date::from_ymd(year, month, 1); }

Date YearMonth::last_day() const { return next().first_day().plus_days(-1); }

int YearMonth::days_in_month() const { return next().first_day() - first_day(); }

YearMonth YearMonth::next() const {
  return month == 12 ? YearMonth{year + 1, 1} : YearMonth{year, month + 1};
}

YearMonth YearMonth::prev() const {
  return month == 1 ? YearMonth{year - 1, 12} : YearMonth{year, month - 1};
}

ClockTime ClockTime::parse(std::string_view text) {
  int h = 0, m = 0;
  if (text.size() != 5 || text[2] != ':' || !parse_uint(text.substr(0, 2), h) ||
      !parse_uint(text.substr(3, 2), m) || h > 23 || m > 59) {
    throw PlanningError(ErrorCode::InvalidField,
                        "expected HH:MM, got '" + std::string(text) + "'");
  }
  return {h * 60 + m};
}

std::string ClockTime::str() const {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%02d:%02d", minutes / 60, minutes % 60);
  return buf;
}

}  // namespace selfsched
