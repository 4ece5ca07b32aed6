#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "selfsched/config.hpp"
#include "selfsched/domain.hpp"
#include "selfsched/schedule.hpp"
#include "selfsched/wish.hpp"

namespace selfsched {

/// Position of a date inside a configured holiday pair.
struct HolidayHit {
  std::size_t pair_index = 0;
  int season_year = 0;
  bool in_first = true;
};

std::vector<HolidayHit> holiday_hits(Date date, const std::vector<HolidayPair>& pairs);

struct HolidayFlags {
  bool worked_first = false;
  bool worked_second = false;
};

struct SeasonKey {
  std::string worker_id;
  std::size_t pair_index = 0;
  int season_year = 0;

  friend auto operator<=>(const SeasonKey&, const SeasonKey&) = default;
};

/// Which holiday sets each worker actually worked, per season.
class HolidayLedger {
 public:
  void record(const std::string& worker_id, const HolidayHit& hit);
  HolidayFlags flags(const std::string& worker_id, std::size_t pair_index, int season_year) const;
  void merge(const HolidayLedger& other);
  bool empty() const { return entries_.empty(); }
  const std::map<SeasonKey, HolidayFlags>& entries() const { return entries_; }

  static HolidayLedger from_schedule(const ScheduleDraft& schedule,
                                     const std::vector<HolidayPair>& pairs);

 private:
  std::map<SeasonKey, HolidayFlags> entries_;
};

struct RuleSet {
  SystemConfig config;
  HolidayLedger ledger;

  static RuleSet from(const SystemConfig& config, HolidayLedger ledger = {});

  bool counts_as_certified(Qualification q) const {
    return q == Qualification::certified_nurse ||
           (config.apprenticeship_counts_as_certified && q == Qualification::one_year_apprenticeship);
  }
  bool counts_as_certified(const Worker& w) const { return counts_as_certified(w.qualification); }
  long rest_minutes() const { return std::lround(config.rest_hours_min * 60.0); }
};

enum class ViolationKind {
  coverage,
  skill_mix,
  rest,
  consecutive_days,
  parity,
  absence,
  wish_violation,
  reciprocity,
};

std::string_view to_string(ViolationKind k);

struct Violation {
  ViolationKind kind = ViolationKind::coverage;
  std::optional<ShiftSlot> slot;
  std::string worker_id;
  std::string detail;

  friend bool operator==(const Violation& a, const Violation& b) {
    return a.kind == b.kind && a.slot == b.slot && a.worker_id == b.worker_id;
  }
};

struct SoftBreakdown {
  int preference_mismatches = 0;
  double hours_deviation = 0.0;
  int weekend_spread = 0;
};

struct ValidationReport {
  std::vector<Violation> hard_violations;
  /// Weighted preference mismatches plus contract-hour deviation.
  double soft_penalty = 0.0;
  SoftBreakdown soft;
  /// Acknowledged override collisions; visible, not blocking.
  std::vector<WishCollision> warnings;

  bool legal() const { return hard_violations.empty(); }
  bool has(ViolationKind kind) const;
  std::size_t count(ViolationKind kind) const;
};

/// Hard violations in `after` that are absent from `before`.
std::vector<Violation> new_violations(const ValidationReport& before, const ValidationReport& after);

struct Deficit {
  int staff = 0;
  int certified = 0;

  bool any() const { return staff > 0 || certified > 0; }
  friend bool operator==(const Deficit&, const Deficit&) = default;
};

Deficit compute_deficit(int staff, int certified, ShiftKind shift, const RuleSet& rules);

/// Who could work a slot before any schedule exists: not absent, not on a
/// free weekend, and not holding a pending wish that covers it.
class Availability {
 public:
  Availability(PlanningWindow window, const Roster& roster, std::span<const Wish> wishes);

  const PlanningWindow& window() const { return window_; }
  bool is_available(const Worker& worker, const ShiftSlot& slot) const;
  /// Throws SlotOutsideCycle.
  std::vector<const Worker*> available(const ShiftSlot& slot) const;

 private:
  PlanningWindow window_;
  const Roster* roster_;
  std::vector<Wish> pending_;
};

/// Throws SlotOutsideCycle.
Deficit coverage_deficit(const Availability& availability, const ShiftSlot& slot, const RuleSet& rules);
Deficit coverage_deficit(const ScheduleDraft& draft, const Roster& roster, const PlanningWindow& window,
                         const ShiftSlot& slot, const RuleSet& rules);

/// One violation per chronologically consecutive pair with a gap shorter
/// than the rest minimum. Input order does not matter.
std::vector<Violation> rest_check(const std::string& worker_id, std::vector<ShiftSlot> slots,
                                  const RuleSet& rules);

/// One violation per run of working days longer than the worker's cap.
std::vector<Violation> consecutive_days_check(const Worker& worker, std::vector<ShiftSlot> slots);

/// Worked one set of a holiday pair (per ledger) and assigned on the other.
std::vector<Violation> reciprocity_check(const HolidayLedger& ledger, const ScheduleDraft& draft,
                                         const RuleSet& rules);

/// Contract hours pro-rated to a number of days.
double target_hours(const Worker& worker, int days);

/// Free weekends per worker inside the window (any Saturday/Sunday group
/// without an assignment counts as free).
std::map<std::string, int> free_weekend_counts(const ScheduleDraft& draft, const Roster& roster,
                                               const PlanningWindow& window);

/// Total check: reports every hard violation against `rules` and the soft
/// penalty. Binding wishes (active or granted) make their scope off-limits
/// for the wisher unless the draft carries an override collision for them.
ValidationReport validate_schedule(const ScheduleDraft& draft, const PlanningWindow& window,
                                   const Roster& roster, std::span<const Wish> wishes,
                                   const RuleSet& rules);

}  // namespace selfsched
