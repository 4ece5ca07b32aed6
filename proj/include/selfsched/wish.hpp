#pragma once

#include <string>
#include <string_view>

#include "selfsched/calendar.hpp"
#include "selfsched/domain.hpp"

namespace selfsched {

enum class WishScope { morning, afternoon, whole_day };
enum class WishStatus { active, withdrawn, in_conflict, granted };
enum class WishOrigin { worker, planner };

std::string_view to_string(WishScope s);
std::string_view to_string(WishStatus s);
std::string_view to_string(WishOrigin o);
WishScope parse_wish_scope(std::string_view text);
WishStatus parse_wish_status(std::string_view text);
WishOrigin parse_wish_origin(std::string_view text);

/// A request for a free shift. There is deliberately no free-text field:
/// reasons are negotiated face to face, never stored.
struct Wish {
  std::string id;
  std::string worker_id;
  Date date;
  WishScope scope = WishScope::whole_day;
  WishStatus status = WishStatus::active;
  bool priority = false;
  WishOrigin origin = WishOrigin::worker;

  bool covers(const ShiftSlot& slot) const {
    if (slot.date != date) return false;
    switch (scope) {
      case WishScope::whole_day: return true;
      case WishScope::morning: return slot.shift == ShiftKind::morning;
      case WishScope::afternoon: return slot.shift == ShiftKind::afternoon;
    }
    return false;
  }
  /// Still awaiting the schedule (counts toward quota).
  bool is_pending() const { return status == WishStatus::active || status == WishStatus::in_conflict; }
  /// Must be honored by any legal schedule.
  bool is_binding() const { return status == WishStatus::active || status == WishStatus::granted; }
};

/// Two wishes of one worker overlap when they share a date and either is
/// whole-day or both name the same shift.
bool scopes_overlap(WishScope a, WishScope b);

bool can_transition(WishStatus from, WishStatus to);

}  // namespace selfsched
