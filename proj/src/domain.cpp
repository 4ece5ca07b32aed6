#include "selfsched/domain.hpp"

#include <algorithm>
#include <set>

#include "selfsched/errors.hpp"

namespace selfsched {

std::string_view to_string(Qualification q) {
  switch (q) {
    case Qualification::certified_nurse: return "certified_nurse";
    case Qualification::one_year_apprenticeship: return "one_year_apprenticeship";
    case Qualification::apprentice: return "apprentice";
    case Qualification::aide: return "aide";
  }
  return "aide";
}

std::string_view to_string(ShiftKind s) {
  return s == ShiftKind::morning ? "morning" : "afternoon";
}

std::string_view to_string(ShiftPreference p) {
  switch (p) {
    case ShiftPreference::morning: return "morning";
    case ShiftPreference::afternoon: return "afternoon";
    case ShiftPreference::none: return "none";
  }
  return "none";
}

std::string_view to_string(AbsenceReason r) {
  switch (r) {
    case AbsenceReason::vacation: return "vacation";
    case AbsenceReason::sick: return "sick";
    case AbsenceReason::other: return "other";
  }
  return "other";
}

std::string_view to_string(WeekendStatus w) {
  switch (w) {
    case WeekendStatus::work_weekend: return "work_weekend";
    case WeekendStatus::free_weekend: return "free_weekend";
    case WeekendStatus::weekday: return "weekday";
  }
  return "weekday";
}

std::string_view to_string(Role r) { return r == Role::planner ? "planner" : "worker"; }

namespace {

[[noreturn]] void bad_value(std::string_view what, std::string_view text) {
  throw PlanningError(ErrorCode::InvalidField,
                      "invalid " + std::string(what) + " '" + std::string(text) + "'");
}

}  // namespace

Qualification parse_qualification(std::string_view text) {
  if (text == "certified_nurse") return Qualification::certified_nurse;
  if (text == "one_year_apprenticeship") return Qualification::one_year_apprenticeship;
  if (text == "apprentice") return Qualification::apprentice;
  if (text == "aide") return Qualification::aide;
  bad_value("qualification", text);
}

ShiftKind parse_shift_kind(std::string_view text) {
  if (text == "morning" || text == "M") return ShiftKind::morning;
  if (text == "afternoon" || text == "A") return ShiftKind::afternoon;
  bad_value("shift", text);
}

ShiftPreference parse_shift_preference(std::string_view text) {
  if (text == "morning") return ShiftPreference::morning;
  if (text == "afternoon") return ShiftPreference::afternoon;
  if (text == "none" || text.empty()) return ShiftPreference::none;
  bad_value("shift_preference", text);
}

AbsenceReason parse_absence_reason(std::string_view text) {
  if (text == "vacation") return AbsenceReason::vacation;
  if (text == "sick") return AbsenceReason::sick;
  if (text == "other") return AbsenceReason::other;
  bad_value("absence reason", text);
}

Role parse_role(std::string_view text) {
  if (text == "planner") return Role::planner;
  if (text == "worker") return Role::worker;
  bad_value("role", text);
}

const Worker* Roster::find(std::string_view id) const {
  auto it = std::lower_bound(workers_.begin(), workers_.end(), id,
                             [](const Worker& w, std::string_view key) { return w.id < key; });
  if (it == workers_.end() || it->id != id) return nullptr;
  return &*it;
}

const Worker& Roster::at(std::string_view id) const {
  if (const Worker* w = find(id)) return *w;
  throw PlanningError(ErrorCode::UnknownWorker, "no worker '" + std::string(id) + "'");
}

Roster build_roster(std::vector<Worker> records) {
  std::set<std::string> seen;
  for (const Worker& w : records) {
    if (w.id.empty()) {
      throw PlanningError(ErrorCode::InvalidField, "worker_id must not be empty");
    }
    if (!seen.insert(w.id).second) {
      throw PlanningError(ErrorCode::DuplicateWorkerId, "duplicate worker_id '" + w.id + "'",
                          {{"worker_id", w.id}});
    }
    if (!w.weekend_parity_anchor.is_saturday()) {
      throw PlanningError(ErrorCode::AnchorNotSaturday,
                          "weekend anchor " + w.weekend_parity_anchor.iso() + " of '" + w.id +
                              "' is not a Saturday",
                          {{"worker_id", w.id}});
    }
    if (!(w.contract_hours_per_week >= 0.0)) {
      throw PlanningError(ErrorCode::NegativeHours,
                          "contract hours of '" + w.id + "' must be >= 0",
                          {{"worker_id", w.id}});
    }
    if (w.max_consecutive_days < 1) {
      throw PlanningError(ErrorCode::InvalidField,
                          "max_consecutive_days of '" + w.id + "' must be >= 1",
                          {{"worker_id", w.id}});
    }
  }
  Roster roster;
  roster.workers_ = std::move(records);
  std::sort(roster.workers_.begin(), roster.workers_.end(),
            [](const Worker& a, const Worker& b) { return a.id < b.id; });
  return roster;
}

Roster with_absences(const Roster& roster, std::span<const AbsenceRecord> absences) {
  std::vector<Worker> workers = roster.workers();
  for (const AbsenceRecord& a : absences) {
    auto it = std::find_if(workers.begin(), workers.end(),
                           [&](const Worker& w) { return w.id == a.worker_id; });
    if (it == workers.end()) {
      throw PlanningError(ErrorCode::UnknownWorker,
                          "absence for unknown worker '" + a.worker_id + "'");
    }
    it->absences[a.date] = a.reason;
  }
  return build_roster(std::move(workers));
}

WeekendStatus weekend_status(const Worker& worker, Date date) {
  if (!date.is_weekend()) return WeekendStatus::weekday;
  const Date saturday = date.is_saturday() ? date : date.plus_days(-1);
  const int weeks = floor_div(saturday - worker.weekend_parity_anchor, 7);
  return (weeks % 2 == 0) ? WeekendStatus::work_weekend : WeekendStatus::free_weekend;
}

std::string ShiftSlot::str() const { return date.iso() + "/" + std::string(to_string(shift)); }

ShiftSlot parse_slot(std::string_view date, std::string_view shift) {
  return {Date::parse_iso(date), parse_shift_kind(shift)};
}

MonthGrid month_grid(YearMonth month, std::span<const Date> holidays) {
  MonthGrid grid{month, {}};
  const Date first = month.first_day();
  const int n = month.days_in_month();
  grid.days.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const Date d = first.plus_days(i);
    const bool holiday = std::find(holidays.begin(), holidays.end(), d) != holidays.end();
    grid.days.push_back({d, d.is_weekend(), holiday});
  }
  return grid;
}

MonthGrid month_grid(int year, int month, std::span<const Date> holidays) {
  return month_grid(YearMonth::of(year, month), holidays);
}

PlanningWindow PlanningWindow::of(const MonthGrid& grid) { return {grid.days}; }

PlanningWindow PlanningWindow::range(Date first, int count, std::span<const Date> holidays) {
  PlanningWindow w;
  for (int i = 0; i < count; ++i) {
    const Date d = first.plus_days(i);
    const bool holiday = std::find(holidays.begin(), holidays.end(), d) != holidays.end();
    w.days.push_back({d, d.is_weekend(), holiday});
  }
  return w;
}

bool PlanningWindow::contains(Date d) const {
  return !days.empty() && d >= first() && d <= last();
}

std::vector<ShiftSlot> PlanningWindow::slots() const {
  std::vector<ShiftSlot> out;
  out.reserve(days.size() * 2);
  for (const CalendarDay& day : days) {
    for (ShiftKind s : kShiftKinds) out.push_back({day.date, s});
  }
  return out;
}

}  // namespace selfsched
