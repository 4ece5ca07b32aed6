#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "selfsched/calendar.hpp"
#include "selfsched/domain.hpp"

namespace selfsched {

struct ShiftTimes {
  ClockTime start;
  ClockTime end;

  int minutes() const { return end.minutes - start.minutes; }
  double hours() const { return minutes() / 60.0; }
};

struct MonthDay {
  unsigned month = 1;
  unsigned day = 1;

  static MonthDay parse(std::string_view text);  // "MM-DD"
  std::string str() const;
  bool matches(Date d) const { return d.month() == month && d.day() == day; }

  friend constexpr auto operator<=>(const MonthDay&, const MonthDay&) = default;
};

/// Two holiday date sets with the reciprocity rule: whoever works one set
/// gets the other set off. Dates of `second` earlier in the year than the
/// first entry of `first` belong to the following calendar year.
struct HolidayPair {
  std::string name;
  std::vector<MonthDay> first;
  std::vector<MonthDay> second;
};

struct SoftWeights {
  double preference = 1.0;
  double hours = 1.0;
  double weekend_spread = 1.0;
};

struct SystemConfig {
  int wish_quota = 5;
  bool priority_enabled = false;
  std::array<ShiftTimes, 2> shift_times{ShiftTimes{ClockTime{6 * 60}, ClockTime{14 * 60}},
                                        ShiftTimes{ClockTime{13 * 60 + 30}, ClockTime{21 * 60 + 30}}};
  std::array<int, 2> min_staff{2, 2};
  std::array<int, 2> min_certified{1, 1};
  double rest_hours_min = 11.0;
  int release_lead_days = 14;
  std::vector<HolidayPair> holiday_pairs = default_holiday_pairs();
  bool reciprocity_enabled = true;
  /// One-year apprentices count toward min_certified when set.
  bool apprenticeship_counts_as_certified = false;
  std::vector<Date> holidays;
  int solution_cap = 50;
  long node_budget = 1'000'000;
  SoftWeights weights;
  int fairness_spread_threshold = 1;
  std::vector<std::string> wish_examples = default_wish_examples();

  const ShiftTimes& times(ShiftKind s) const { return shift_times[index_of(s)]; }
  int staff_required(ShiftKind s) const { return min_staff[index_of(s)]; }
  int certified_required(ShiftKind s) const { return min_certified[index_of(s)]; }

  /// Throws PlanningError(InvalidConfig).
  void validate() const;

  static std::vector<HolidayPair> default_holiday_pairs();
  static std::vector<std::string> default_wish_examples();
};

SystemConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const SystemConfig& c);

/// Absolute start/end of a slot in minutes since the epoch.
long slot_start_minute(const ShiftSlot& slot, const SystemConfig& config);
long slot_end_minute(const ShiftSlot& slot, const SystemConfig& config);

}  // namespace selfsched
