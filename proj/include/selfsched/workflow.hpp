#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "selfsched/calendar.hpp"
#include "selfsched/config.hpp"
#include "selfsched/conflicts.hpp"
#include "selfsched/constraints.hpp"
#include "selfsched/domain.hpp"
#include "selfsched/schedule.hpp"
#include "selfsched/wish.hpp"

namespace selfsched {

enum class Phase { preparation, running, retrospective, closed };
enum class SwapState { proposed, accepted, rejected, invalidated };

std::string_view to_string(Phase p);
std::string_view to_string(SwapState s);
Phase parse_phase(std::string_view text);
SwapState parse_swap_state(std::string_view text);

/// The proposer gives away `proposer_slot` and takes `counterpart_slot`.
struct SwapProposal {
  std::string id;
  std::string proposer;
  std::string counterpart;
  ShiftSlot proposer_slot;
  ShiftSlot counterpart_slot;
  SwapState state = SwapState::proposed;

  friend bool operator==(const SwapProposal&, const SwapProposal&) = default;
};

struct StandInEvent {
  std::string absent_worker;
  std::string volunteer;
  ShiftSlot slot;
  std::string timestamp;

  friend bool operator==(const StandInEvent&, const StandInEvent&) = default;
};

struct ReleaseInfo {
  Date released_on;
  bool late = false;
  std::string advisory;

  friend bool operator==(const ReleaseInfo&, const ReleaseInfo&) = default;
};

struct HoursStatement {
  std::string worker_id;
  YearMonth month;
  double target_hours = 0.0;
  double assigned_hours = 0.0;
  double delta = 0.0;
  int shifts = 0;
};

struct PlanningCycle {
  YearMonth month;
  Phase phase = Phase::preparation;
  int quota = 5;
  Date release_date;
  std::vector<Wish> wishes;
  std::vector<Conflict> conflicts;
  std::vector<DeficientSlot> uncovered;
  /// Bumped whenever the draft changes; releases quote the version they saw.
  int draft_version = 0;
  std::optional<ScheduleDraft> draft;
  /// Set at release; later edits go through swaps, stand-ins and overrides.
  std::optional<ScheduleDraft> schedule;
  std::optional<ReleaseInfo> release;
  std::vector<SwapProposal> swaps;
  std::vector<StandInEvent> stand_ins;

  const Wish* find_wish(std::string_view id) const;
  Wish* find_wish(std::string_view id);
  const SwapProposal* find_swap(std::string_view id) const;
  PlanningWindow window(const SystemConfig& config) const;
  /// Worker-origin wishes still counted against the quota.
  int quota_used(const std::string& worker_id) const;
};

using CycleMap = std::map<YearMonth, PlanningCycle>;

/// Registers a new cycle in the preparation phase. `quota` overrides the
/// configured wish quota for this month only. Throws CycleExists.
PlanningCycle& open_cycle(CycleMap& cycles, YearMonth month, const SystemConfig& config,
                          std::optional<int> quota = std::nullopt);

/// Throws PhaseClosed, DateOutsideCycle, FreeWeekend, WholeDayOnWeekend,
/// DuplicateWish, QuotaExceeded, PriorityDisabled or PriorityTaken.
const Wish& submit_wish(PlanningCycle& cycle, const Worker& worker, Date date, WishScope scope, bool priority,
                        const SystemConfig& config);

/// Same calendar rules as submit_wish but outside the quota. Throws
/// Forbidden for non-planners.
const Wish& planner_enter_wish(PlanningCycle& cycle, const Actor& caller, const Worker& worker, Date date,
                               WishScope scope, const SystemConfig& config);

/// Throws UnknownWish, NotOwner, AlreadyWithdrawn, InvalidTransition or
/// PhaseClosed.
const Wish& withdraw_wish(PlanningCycle& cycle, const std::string& wish_id, const Actor& caller);

/// Installs a detection result: involved wishes become in_conflict and
/// every other in_conflict wish returns to active.
void apply_detection(PlanningCycle& cycle, DetectionResult result);

/// detect_conflicts over the cycle window followed by apply_detection.
void redetect(PlanningCycle& cycle, const Roster& roster, const RuleSet& rules);

const SwapProposal& propose_swap(PlanningCycle& cycle, const Actor& proposer, const std::string& counterpart,
                                 const ShiftSlot& give, const ShiftSlot& take);

/// Exchanges the two assignments if doing so creates no new hard
/// violation; otherwise throws ValidationFailed with the report as detail.
const SwapProposal& accept_swap(PlanningCycle& cycle, const std::string& swap_id, const Actor& caller,
                                const Roster& roster, const RuleSet& rules);

const SwapProposal& reject_swap(PlanningCycle& cycle, const std::string& swap_id, const Actor& caller);

/// Replaces `absent_worker` on `slot` by `volunteer`. Throws NotAssigned or
/// VolunteerUnavailable (with the offending violations as detail).
const StandInEvent& record_stand_in(PlanningCycle& cycle, const std::string& absent_worker,
                                    const std::string& volunteer, const ShiftSlot& slot, const Roster& roster,
                                    const RuleSet& rules, std::string timestamp);

/// Throws NoDraft before release.
HoursStatement hours_ledger(const PlanningCycle& cycle, const Worker& worker, const SystemConfig& config);

/// running -> retrospective -> closed. Leaving preparation only happens
/// through release. Throws InvalidTransition.
void advance_phase(PlanningCycle& cycle);

/// The schedule currently in force: the released one, else the draft.
const ScheduleDraft* current_schedule(const PlanningCycle& cycle);

}  // namespace selfsched
