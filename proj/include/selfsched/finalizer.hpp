#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "selfsched/constraints.hpp"
#include "selfsched/domain.hpp"
#include "selfsched/schedule.hpp"
#include "selfsched/wish.hpp"
#include "selfsched/workflow.hpp"

namespace selfsched {

/// A worker fixed to a slot before the search starts ("known fixed days").
struct Pin {
  ShiftSlot slot;
  std::string worker_id;

  friend bool operator==(const Pin&, const Pin&) = default;
};

struct AutofillOptions {
  std::vector<Pin> pins;
  /// Falls back to SystemConfig::node_budget.
  std::optional<long> node_budget;
  /// Lets autofill run while conflicts are still open. Their wishes are then
  /// honored where possible but no longer binding.
  bool acknowledge_conflicts = false;
  /// Adds workers beyond the minimum while that lowers the soft objective.
  bool improve = true;
};

struct InfeasibilityReport {
  std::optional<ShiftSlot> slot;
  std::vector<std::string> binding_constraints;
  ScheduleDraft partial;
  bool budget_exhausted = false;
  long nodes = 0;
};

using AutofillResult = std::variant<ScheduleDraft, InfeasibilityReport>;

/// Core search over an arbitrary window. Pending wishes in `wishes` that
/// are active or granted are hard; in_conflict wishes are soft.
AutofillResult autofill_window(const PlanningWindow& window, YearMonth month, const Roster& roster,
                               std::span<const Wish> wishes, const RuleSet& rules,
                               const AutofillOptions& options = {});

/// Throws PhaseClosed or UnresolvedConflicts.
AutofillResult autofill(const PlanningCycle& cycle, const Roster& roster, const RuleSet& rules,
                        const AutofillOptions& options = {});

/// The quantity autofill minimizes: soft_penalty plus weighted weekend spread.
double soft_objective(const ValidationReport& report, const RuleSet& rules);

enum class OverrideKind { assign, unassign, replace };

std::string_view to_string(OverrideKind k);
OverrideKind parse_override_kind(std::string_view text);

struct OverrideChange {
  OverrideKind kind = OverrideKind::assign;
  ShiftSlot slot;
  std::string worker_id;
  /// Incoming worker for `replace`.
  std::string replacement;

  friend bool operator==(const OverrideChange&, const OverrideChange&) = default;
};

struct OverrideOutcome {
  ScheduleDraft draft;
  std::vector<WishCollision> new_collisions;
};

/// Applies a planner edit. Assigning a worker on a slot covered by one of
/// their binding wishes is allowed but records a collision and flags the
/// worker for notification. Throws Forbidden, NotAssigned, UnknownWorker or
/// ValidationFailed when the edit introduces a hard violation.
OverrideOutcome apply_override(const ScheduleDraft& draft, const Actor& caller, const OverrideChange& change,
                               const PlanningWindow& window, const Roster& roster, std::span<const Wish> wishes,
                               const RuleSet& rules);

/// Cycle wrapper: edits the released schedule when there is one, else the
/// draft. Bumps draft_version. Throws NoDraft.
OverrideOutcome apply_override(PlanningCycle& cycle, const Actor& caller, const OverrideChange& change,
                               const Roster& roster, const RuleSet& rules);

/// Installs a new draft for the cycle (phase must be preparation).
void install_draft(PlanningCycle& cycle, ScheduleDraft draft);

/// Publishes the draft: phase -> running, honored pending wishes become
/// granted. Throws NoDraft, StaleSnapshot, HardViolationsPresent or
/// PhaseClosed.
const ReleaseInfo& release(PlanningCycle& cycle, const Actor& caller, std::optional<int> expected_version,
                           const Roster& roster, const RuleSet& rules, Date today);

struct FairnessRow {
  std::string worker_id;
  int free_weekends = 0;
  bool flagged = false;
};

struct HolidaySummary {
  std::string worker_id;
  std::string pair_name;
  int season_year = 0;
  bool worked_first = false;
  bool worked_second = false;
};

struct FairnessReport {
  std::vector<YearMonth> months;
  int weekends = 0;
  std::vector<FairnessRow> rows;
  int min_free = 0;
  int max_free = 0;
  int spread = 0;
  double median = 0.0;
  std::vector<HolidaySummary> holidays;
};

/// Free weekends per worker over the finalized schedules given. A weekend
/// split across two months counts once. A worker is flagged when their
/// count is further than `threshold` from the median. Throws EmptyWindow.
FairnessReport fairness_report(std::span<const ScheduleDraft> schedules, const Roster& roster,
                               const SystemConfig& config);

/// Ledger of holiday work recorded in released schedules before `month`.
HolidayLedger prior_ledger(const CycleMap& cycles, YearMonth month, const SystemConfig& config);

}  // namespace selfsched
