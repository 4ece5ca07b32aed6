#include "selfsched/wish.hpp"

#include "selfsched/errors.hpp"

namespace selfsched {

std::string_view to_string(WishScope s) {
  switch (s) {
    case WishScope::morning: return "morning";
    case WishScope::afternoon: return "afternoon";
    case WishScope::whole_day: return "whole_day";
  }
  return "whole_day";
}

std::string_view to_string(WishStatus s) {
  switch (s) {
    case WishStatus::active: return "active";
    case WishStatus::withdrawn: return "withdrawn";
    case WishStatus::in_conflict: return "in_conflict";
    case WishStatus::granted: return "granted";
  }
  return "active";
}

std::string_view to_string(WishOrigin o) { return o == WishOrigin::planner ? "planner" : "worker"; }

WishScope parse_wish_scope(std::string_view text) {
  if (text == "morning") return WishScope::morning;
  if (text == "afternoon") return WishScope::afternoon;
  if (text == "whole_day") return WishScope::whole_day;
  throw PlanningError(ErrorCode::InvalidField, "invalid wish scope '" + std::string(text) + "'");
}

WishStatus parse_wish_status(std::string_view text) {
  if (text == "active") return WishStatus::active;
  if (text == "withdrawn") return WishStatus::withdrawn;
  if (text == "in_conflict") return WishStatus::in_conflict;
  if (text == "granted") return WishStatus::granted;
  throw PlanningError(ErrorCode::InvalidField, "invalid wish status '" + std::string(text) + "'");
}

WishOrigin parse_wish_origin(std::string_view text) {
  if (text == "worker") return WishOrigin::worker;
  if (text == "planner") return WishOrigin::planner;
  throw PlanningError(ErrorCode::InvalidField, "invalid wish origin '" + std::string(text) + "'");
}

bool scopes_overlap(WishScope a, WishScope b) {
  return a == WishScope::whole_day || b == WishScope::whole_day || a == b;
}

bool can_transition(WishStatus from, WishStatus to) {
  switch (from) {
    case WishStatus::active:
      return to == WishStatus::withdrawn || to == WishStatus::in_conflict || to == WishStatus::granted;
    case WishStatus::in_conflict:
      return to == WishStatus::withdrawn || to == WishStatus::active || to == WishStatus::granted;
    case WishStatus::withdrawn:
    case WishStatus::granted:
      return false;
  }
  return false;
}

}  // namespace selfsched
