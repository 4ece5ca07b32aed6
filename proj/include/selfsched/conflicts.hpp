#pragma once

#include <span>
#include <string>
#include <vector>

#include "selfsched/constraints.hpp"
#include "selfsched/domain.hpp"
#include "selfsched/wish.hpp"

namespace selfsched {

struct DeficientSlot {
  ShiftSlot slot;
  Deficit deficit;

  friend bool operator==(const DeficientSlot&, const DeficientSlot&) = default;
};

/// Wishes whose joint withdrawal restores every slot of a conflict; no
/// proper subset does. Ids are listed in solution order (worker, date).
struct WithdrawalSet {
  std::vector<std::string> wish_ids;

  friend bool operator==(const WithdrawalSet&, const WithdrawalSet&) = default;
};

struct SolutionList {
  std::vector<WithdrawalSet> sets;
  bool truncated = false;
};

struct Conflict {
  std::string id;
  std::vector<DeficientSlot> deficient_slots;
  /// Pending wishes on a deficient slot whose withdrawal would add
  /// capacity there (sorted by id).
  std::vector<std::string> involved_wishes;
  std::vector<WithdrawalSet> solutions;
  bool truncated = false;
  /// False when even withdrawing every involved wish leaves a deficit.
  bool resolvable = true;
};

struct DetectionResult {
  std::vector<Conflict> conflicts;
  /// Deficits no wish can relieve (absences, thin weekends).
  std::vector<DeficientSlot> uncovered;
};

/// Honors every pending wish, finds the deficient slots, links slots that
/// share a helpful wish into components and solves each component.
DetectionResult detect_conflicts(const PlanningWindow& window, const Roster& roster,
                                 std::span<const Wish> wishes, const RuleSet& rules);

/// All minimal withdrawal sets of one conflict, ordered by size, then by the
/// sorted (worker_id, date) sequence of their wishes, truncated at `cap`.
/// Throws EmptyConflict or NoSolution.
SolutionList enumerate_solutions(const Conflict& conflict, const Roster& roster,
                                 std::span<const Wish> wishes, const RuleSet& rules, int cap);

struct ConflictParticipant {
  std::string wish_id;
  std::string worker_id;
  std::string display_name;
  Date date;
  WishScope scope = WishScope::whole_day;
  bool priority = false;
};

/// A conflict as shown to one caller. Only involved colleagues appear.
struct ConflictView {
  std::string id;
  std::vector<DeficientSlot> deficient_slots;
  std::vector<ConflictParticipant> participants;
  std::vector<WithdrawalSet> solutions;
  bool truncated = false;
  bool resolvable = true;
};

ConflictView make_view(const Conflict& conflict, std::span<const Wish> wishes, const Roster& roster);

/// Planners see every conflict; workers only those holding one of their wishes.
std::vector<ConflictView> conflicts_visible_to(const Actor& caller, std::span<const Conflict> conflicts,
                                               std::span<const Wish> wishes, const Roster& roster);

bool involves_worker(const Conflict& conflict, std::span<const Wish> wishes, const std::string& worker_id);

}  // namespace selfsched
