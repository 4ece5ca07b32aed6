#include "selfsched/constraints.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

#include "selfsched/errors.hpp"

namespace selfsched {

namespace {

std::string hours_text(double h) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", h);
  return buf;
}

}  // namespace

std::vector<HolidayHit> holiday_hits(Date date, const std::vector<HolidayPair>& pairs) {
  std::vector<HolidayHit> hits;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const HolidayPair& pair = pairs[i];
    if (pair.first.empty()) continue;
    const unsigned season_month = pair.first.front().month;
    const int season = date.month() >= season_month ? date.year() : date.year() - 1;
    auto in = [&](const std::vector<MonthDay>& set) {
      return std::any_of(set.begin(), set.end(), [&](const MonthDay& md) { return md.matches(date); });
    };
    if (in(pair.first)) hits.push_back({i, season, true});
    if (in(pair.second)) hits.push_back({i, season, false});
  }
  return hits;
}

void HolidayLedger::record(const std::string& worker_id, const HolidayHit& hit) {
  HolidayFlags& f = entries_[{worker_id, hit.pair_index, hit.season_year}];
  (hit.in_first ? f.worked_first : f.worked_second) = true;
}

HolidayFlags HolidayLedger::flags(const std::string& worker_id, std::size_t pair_index,
                                  int season_year) const {
  auto it = entries_.find({worker_id, pair_index, season_year});
  return it == entries_.end() ? HolidayFlags{} : it->second;
}

void HolidayLedger::merge(const HolidayLedger& other) {
  for (const auto& [key, f] : other.entries_) {
    HolidayFlags& mine = entries_[key];
    mine.worked_first = mine.worked_first || f.worked_first;
    mine.worked_second = mine.worked_second || f.worked_second;
  }
}

HolidayLedger HolidayLedger::from_schedule(const ScheduleDraft& schedule,
                                           const std::vector<HolidayPair>& pairs) {
  HolidayLedger ledger;
  for (const auto& [slot, workers] : schedule.assignment()) {
    const auto hits = holiday_hits(slot.date, pairs);
    if (hits.empty()) continue;
    for (const auto& w : workers) {
      for (const auto& hit : hits) ledger.record(w, hit);
    }
  }
  return ledger;
}

RuleSet RuleSet::from(const SystemConfig& config, HolidayLedger ledger) {
  config.validate();
  return RuleSet{config, std::move(ledger)};
}

std::string_view to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::coverage: return "coverage";
    case ViolationKind::skill_mix: return "skill_mix";
    case ViolationKind::rest: return "rest";
    case ViolationKind::consecutive_days: return "consecutive_days";
    case ViolationKind::parity: return "parity";
    case ViolationKind::absence: return "absence";
    case ViolationKind::wish_violation: return "wish_violation";
    case ViolationKind::reciprocity: return "reciprocity";
  }
  return "coverage";
}

bool ValidationReport::has(ViolationKind kind) const { return count(kind) > 0; }

std::size_t ValidationReport::count(ViolationKind kind) const {
  return static_cast<std::size_t>(std::count_if(hard_violations.begin(), hard_violations.end(),
                                                [&](const Violation& v) { return v.kind == kind; }));
}

std::vector<Violation> new_violations(const ValidationReport& before, const ValidationReport& after) {
  std::vector<Violation> out;
  for (const Violation& v : after.hard_violations) {
    if (std::find(before.hard_violations.begin(), before.hard_violations.end(), v) ==
        before.hard_violations.end()) {
      out.push_back(v);
    }
  }
  return out;
}

Deficit compute_deficit(int staff, int certified, ShiftKind shift, const RuleSet& rules) {
  return {std::max(0, rules.config.staff_required(shift) - staff),
          std::max(0, rules.config.certified_required(shift) - certified)};
}

Availability::Availability(PlanningWindow window, const Roster& roster, std::span<const Wish> wishes)
    : window_(std::move(window)), roster_(&roster) {
  for (const Wish& w : wishes) {
    if (w.is_pending()) pending_.push_back(w);
  }
}

bool Availability::is_available(const Worker& worker, const ShiftSlot& slot) const {
  if (worker.absent_on(slot.date)) return false;
  if (weekend_status(worker, slot.date) == WeekendStatus::free_weekend) return false;
  return std::none_of(pending_.begin(), pending_.end(), [&](const Wish& w) {
    return w.worker_id == worker.id && w.covers(slot);
  });
}

std::vector<const Worker*> Availability::available(const ShiftSlot& slot) const {
  if (!window_.contains(slot)) {
    throw PlanningError(ErrorCode::SlotOutsideCycle, "slot " + slot.str() + " is outside the cycle");
  }
  std::vector<const Worker*> out;
  for (const Worker& w : roster_->workers()) {
    if (is_available(w, slot)) out.push_back(&w);
  }
  return out;
}

Deficit coverage_deficit(const Availability& availability, const ShiftSlot& slot, const RuleSet& rules) {
  const auto workers = availability.available(slot);
  const int certified = static_cast<int>(std::count_if(
      workers.begin(), workers.end(), [&](const Worker* w) { return rules.counts_as_certified(*w); }));
  return compute_deficit(static_cast<int>(workers.size()), certified, slot.shift, rules);
}

Deficit coverage_deficit(const ScheduleDraft& draft, const Roster& roster, const PlanningWindow& window,
                         const ShiftSlot& slot, const RuleSet& rules) {
  if (!window.contains(slot)) {
    throw PlanningError(ErrorCode::SlotOutsideCycle, "slot " + slot.str() + " is outside the cycle");
  }
  int staff = 0, certified = 0;
  for (const auto& id : draft.workers_on(slot)) {
    const Worker* w = roster.find(id);
    if (!w) continue;
    ++staff;
    if (rules.counts_as_certified(*w)) ++certified;
  }
  return compute_deficit(staff, certified, slot.shift, rules);
}

std::vector<Violation> rest_check(const std::string& worker_id, std::vector<ShiftSlot> slots,
                                  const RuleSet& rules) {
  std::sort(slots.begin(), slots.end());
  slots.erase(std::unique(slots.begin(), slots.end()), slots.end());
  std::vector<Violation> out;
  const long rest = rules.rest_minutes();
  for (std::size_t i = 1; i < slots.size(); ++i) {
    const long gap = slot_start_minute(slots[i], rules.config) - slot_end_minute(slots[i - 1], rules.config);
    if (gap < rest) {
      out.push_back({ViolationKind::rest, slots[i], worker_id,
                     "rest " + hours_text(gap / 60.0) + "h after " + slots[i - 1].str() + " is below " +
                         hours_text(rules.config.rest_hours_min) + "h"});
    }
  }
  return out;
}

std::vector<Violation> consecutive_days_check(const Worker& worker, std::vector<ShiftSlot> slots) {
  std::set<Date> days;
  for (const auto& s : slots) days.insert(s.date);
  std::vector<Violation> out;
  int run = 0;
  Date prev;
  bool reported = false;
  for (Date d : days) {
    if (run > 0 && d - prev == 1) {
      ++run;
    } else {
      run = 1;
      reported = false;
    }
    prev = d;
    if (run > worker.max_consecutive_days && !reported) {
      out.push_back({ViolationKind::consecutive_days, ShiftSlot{d, ShiftKind::morning}, worker.id,
                     "more than " + std::to_string(worker.max_consecutive_days) + " consecutive days"});
      reported = true;
    }
  }
  return out;
}

std::vector<Violation> reciprocity_check(const HolidayLedger& ledger, const ScheduleDraft& draft,
                                         const RuleSet& rules) {
  std::vector<Violation> out;
  for (const auto& [slot, workers] : draft.assignment()) {
    const auto hits = holiday_hits(slot.date, rules.config.holiday_pairs);
    for (const auto& hit : hits) {
      for (const auto& w : workers) {
        const HolidayFlags f = ledger.flags(w, hit.pair_index, hit.season_year);
        const bool worked_other = hit.in_first ? f.worked_second : f.worked_first;
        if (worked_other) {
          const auto& name = rules.config.holiday_pairs[hit.pair_index].name;
          out.push_back({ViolationKind::reciprocity, slot, w,
                         "worked the other half of '" + name + "' " + std::to_string(hit.season_year)});
        }
      }
    }
  }
  return out;
}

double target_hours(const Worker& worker, int days) {
  return worker.contract_hours_per_week * static_cast<double>(days) / 7.0;
}

std::map<std::string, int> free_weekend_counts(const ScheduleDraft& draft, const Roster& roster,
                                               const PlanningWindow& window) {
  std::map<Date, std::vector<Date>> weekends;  // Saturday -> days of that weekend in window
  for (const CalendarDay& day : window.days) {
    if (!day.date.is_weekend()) continue;
    const Date sat = day.date.is_saturday() ? day.date : day.date.plus_days(-1);
    weekends[sat].push_back(day.date);
  }
  std::map<std::string, int> counts;
  for (const Worker& w : roster.workers()) {
    int free = 0;
    for (const auto& [sat, days] : weekends) {
      const bool worked = std::any_of(days.begin(), days.end(), [&](Date d) {
        return draft.is_assigned(w.id, {d, ShiftKind::morning}) ||
               draft.is_assigned(w.id, {d, ShiftKind::afternoon});
      });
      if (!worked) ++free;
    }
    counts[w.id] = free;
  }
  return counts;
}

ValidationReport validate_schedule(const ScheduleDraft& draft, const PlanningWindow& window,
                                   const Roster& roster, std::span<const Wish> wishes,
                                   const RuleSet& rules) {
  ValidationReport report;
  auto& hard = report.hard_violations;

  for (const ShiftSlot& slot : window.slots()) {
    const Deficit d = coverage_deficit(draft, roster, window, slot, rules);
    if (d.staff > 0) {
      hard.push_back({ViolationKind::coverage, slot, "",
                      std::to_string(d.staff) + " staff short of " +
                          std::to_string(rules.config.staff_required(slot.shift))});
    }
    if (d.certified > 0) {
      hard.push_back({ViolationKind::skill_mix, slot, "",
                      std::to_string(d.certified) + " certified short of " +
                          std::to_string(rules.config.certified_required(slot.shift))});
    }
  }
  for (const auto& [slot, workers] : draft.assignment()) {
    if (!window.contains(slot)) {
      hard.push_back({ViolationKind::coverage, slot, "", "assignment outside the planning window"});
    }
    for (const auto& id : workers) {
      if (!roster.find(id)) {
        hard.push_back({ViolationKind::coverage, slot, id, "assigned worker is not on the roster"});
      }
    }
  }

  for (const Worker& w : roster.workers()) {
    const auto slots = draft.slots_of(w.id);
    for (const ShiftSlot& s : slots) {
      if (w.absent_on(s.date)) {
        hard.push_back({ViolationKind::absence, s, w.id,
                        "assigned while absent (" + std::string(to_string(w.absences.at(s.date))) + ")"});
      }
      if (weekend_status(w, s.date) == WeekendStatus::free_weekend) {
        hard.push_back({ViolationKind::parity, s, w.id, "assigned on a free weekend"});
      }
    }
    for (auto& v : rest_check(w.id, slots, rules)) hard.push_back(std::move(v));
    for (auto& v : consecutive_days_check(w, slots)) hard.push_back(std::move(v));
  }

  for (const Wish& wish : wishes) {
    if (!wish.is_binding()) continue;
    for (ShiftKind s : kShiftKinds) {
      const ShiftSlot slot{wish.date, s};
      if (!wish.covers(slot) || !draft.is_assigned(wish.worker_id, slot)) continue;
      if (draft.wish_overridden(wish.id)) continue;
      hard.push_back({ViolationKind::wish_violation, slot, wish.worker_id,
                      "assigned on wish " + wish.id + " (" + std::string(to_string(wish.scope)) + ")"});
    }
  }

  if (rules.config.reciprocity_enabled && !rules.config.holiday_pairs.empty()) {
    HolidayLedger ledger = rules.ledger;
    ledger.merge(HolidayLedger::from_schedule(draft, rules.config.holiday_pairs));
    for (auto& v : reciprocity_check(ledger, draft, rules)) hard.push_back(std::move(v));
  }

  std::stable_sort(hard.begin(), hard.end(), [](const Violation& a, const Violation& b) {
    if (a.slot != b.slot) return a.slot < b.slot;
    if (a.kind != b.kind) return a.kind < b.kind;
    return a.worker_id < b.worker_id;
  });

  for (const Worker& w : roster.workers()) {
    double assigned = 0.0;
    for (const ShiftSlot& s : draft.slots_of(w.id)) {
      assigned += rules.config.times(s.shift).hours();
      if ((w.shift_preference == ShiftPreference::morning && s.shift == ShiftKind::afternoon) ||
          (w.shift_preference == ShiftPreference::afternoon && s.shift == ShiftKind::morning)) {
        ++report.soft.preference_mismatches;
      }
    }
    report.soft.hours_deviation += std::abs(assigned - target_hours(w, window.size()));
  }
  const auto free = free_weekend_counts(draft, roster, window);
  if (!free.empty()) {
    auto [lo, hi] = std::minmax_element(free.begin(), free.end(),
                                        [](const auto& a, const auto& b) { return a.second < b.second; });
    report.soft.weekend_spread = hi->second - lo->second;
  }
  report.soft_penalty = rules.config.weights.preference * report.soft.preference_mismatches +
                        rules.config.weights.hours * report.soft.hours_deviation;
  report.warnings = draft.wish_collisions();
  return report;
}

}  // namespace selfsched
