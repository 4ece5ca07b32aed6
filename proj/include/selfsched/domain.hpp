#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "selfsched/calendar.hpp"

namespace selfsched {

enum class Qualification { certified_nurse, one_year_apprenticeship, apprentice, aide };
enum class ShiftKind { morning, afternoon };
enum class ShiftPreference { morning, afternoon, none };
enum class AbsenceReason { vacation, sick, other };
enum class WeekendStatus { work_weekend, free_weekend, weekday };
enum class Role { worker, planner };

inline constexpr ShiftKind kShiftKinds[] = {ShiftKind::morning, ShiftKind::afternoon};

std::string_view to_string(Qualification q);
std::string_view to_string(ShiftKind s);
std::string_view to_string(ShiftPreference p);
std::string_view to_string(AbsenceReason r);
std::string_view to_string(WeekendStatus w);
std::string_view to_string(Role r);

Qualification parse_qualification(std::string_view text);
ShiftKind parse_shift_kind(std::string_view text);
ShiftPreference parse_shift_preference(std::string_view text);
AbsenceReason parse_absence_reason(std::string_view text);
Role parse_role(std::string_view text);

constexpr int index_of(ShiftKind s) { return s == ShiftKind::morning ? 0 : 1; }

struct Worker {
  std::string id;
  std::string display_name;
  Qualification qualification = Qualification::aide;
  bool is_leader = false;
  double contract_hours_per_week = 0.0;
  Date weekend_parity_anchor;
  int max_consecutive_days = 5;
  ShiftPreference shift_preference = ShiftPreference::none;
  std::map<Date, AbsenceReason> absences;

  bool absent_on(Date d) const { return absences.contains(d); }
};

struct AbsenceRecord {
  std::string worker_id;
  Date date;
  AbsenceReason reason = AbsenceReason::other;
};

/// Validated, immutable set of workers sorted by id.
class Roster {
 public:
  Roster() = default;

  const std::vector<Worker>& workers() const { return workers_; }
  const Worker* find(std::string_view id) const;
  /// Throws PlanningError(UnknownWorker).
  const Worker& at(std::string_view id) const;
  std::size_t size() const { return workers_.size(); }
  bool empty() const { return workers_.empty(); }

 private:
  friend Roster build_roster(std::vector<Worker> records);
  std::vector<Worker> workers_;
};

/// Validates worker records into a roster. All-or-nothing: the first invalid
/// record aborts with DuplicateWorkerId, AnchorNotSaturday, NegativeHours or
/// InvalidField.
Roster build_roster(std::vector<Worker> records);

/// Returns a copy of `roster` with absences attached. Throws UnknownWorker.
Roster with_absences(const Roster& roster, std::span<const AbsenceRecord> absences);

/// Weekends alternate work/free starting from the worker's anchor Saturday,
/// whose weekend is a work weekend.
WeekendStatus weekend_status(const Worker& worker, Date date);

struct ShiftSlot {
  Date date;
  ShiftKind shift = ShiftKind::morning;

  std::string str() const;
  friend constexpr auto operator<=>(const ShiftSlot&, const ShiftSlot&) = default;
};

ShiftSlot parse_slot(std::string_view date, std::string_view shift);

struct CalendarDay {
  Date date;
  bool is_weekend = false;
  bool is_holiday = false;
};

struct MonthGrid {
  YearMonth month;
  std::vector<CalendarDay> days;
};

MonthGrid month_grid(YearMonth month, std::span<const Date> holidays);
/// Throws InvalidMonth for month outside 1..12.
MonthGrid month_grid(int year, int month, std::span<const Date> holidays);

/// Contiguous run of days that a schedule covers. A cycle's window is its
/// whole month; tests and what-if checks use shorter windows.
struct PlanningWindow {
  std::vector<CalendarDay> days;

  static PlanningWindow of(const MonthGrid& grid);
  static PlanningWindow range(Date first, int count, std::span<const Date> holidays = {});

  bool contains(Date d) const;
  bool contains(const ShiftSlot& s) const { return contains(s.date); }
  Date first() const { return days.front().date; }
  Date last() const { return days.back().date; }
  int size() const { return static_cast<int>(days.size()); }
  std::vector<ShiftSlot> slots() const;
};

struct Actor {
  std::string id;
  Role role = Role::worker;

  bool is_planner() const { return role == Role::planner; }
};

}  // namespace selfsched
