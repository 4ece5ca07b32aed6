#pragma once

#include <chrono>
#include <compare>
#include <string>
#include <string_view>

namespace selfsched {

/// A proleptic Gregorian calendar date, stored as days since 1970-01-01.
class Date {
 public:
  constexpr Date() = default;
  explicit Date(std::chrono::sys_days d)
      : days_(static_cast<int>(d.time_since_epoch().count())) {}

  /// Throws PlanningError(InvalidDate) for impossible dates.
  static Date from_ymd(int year, unsigned month, unsigned day);
  /// Parses strict `YYYY-MM-DD`.
  static Date parse_iso(std::string_view text);
  static constexpr Date from_days(int days) {
    Date d;
    d.days_ = days;
    return d;
  }

  std::string iso() const;
  std::chrono::year_month_day ymd() const;
  int year() const;
  unsigned month() const;
  unsigned day() const;

  std::chrono::weekday weekday() const;
  bool is_saturday() const { return weekday() == std::chrono::Saturday; }
  bool is_sunday() const { return weekday() == std::chrono::Sunday; }
  bool is_weekend() const { return is_saturday() || is_sunday(); }

  Date plus_days(int n) const { return from_days(days_ + n); }
  int days_since_epoch() const { return days_; }

  friend constexpr int operator-(Date a, Date b) { return a.days_ - b.days_; }
  friend constexpr auto operator<=>(const Date&, const Date&) = default;

 private:
  int days_ = 0;
};

/// A calendar month; the unit of a planning cycle.
struct YearMonth {
  int year = 1970;
  unsigned month = 1;

  /// Throws PlanningError(InvalidMonth) unless 1 <= month <= 12.
  static YearMonth of(int year, int month);
  /// Parses `YYYY-MM`.
  static YearMonth parse(std::string_view text);
  static YearMonth of_date(Date d) { return {d.year(), d.month()}; }

  std::string str() const;
  Date first_day() const;
  Date last_day() const;
  int days_in_month() const;
  bool contains(Date d) const { return d.year() == year && d.month() == month; }
  YearMonth next() const;
  YearMonth prev() const;

  friend constexpr auto operator<=>(const YearMonth&, const YearMonth&) = default;
};

/// Time of day as minutes after midnight, `HH:MM` on the wire.
struct ClockTime {
  int minutes = 0;

  static ClockTime parse(std::string_view text);
  std::string str() const;

  friend constexpr auto operator<=>(const ClockTime&, const ClockTime&) = default;
};

/// Floor division for negative day offsets.
constexpr int floor_div(int a, int b) {
  const int q = a / b;
  return (a % b != 0 && ((a < 0) != (b < 0))) ? q - 1 : q;
}

}  // namespace selfsched
