#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "selfsched/calendar.hpp"
#include "selfsched/domain.hpp"

namespace selfsched {

enum class DraftStatus { draft, finalized };
enum class Provenance { autofill, override, swap, stand_in };

std::string_view to_string(DraftStatus s);
std::string_view to_string(Provenance p);
DraftStatus parse_draft_status(std::string_view text);
Provenance parse_provenance(std::string_view text);

/// Planner override that put a worker on a slot covered by one of their wishes.
struct WishCollision {
  std::string wish_id;
  std::string worker_id;
  ShiftSlot slot;

  friend auto operator<=>(const WishCollision&, const WishCollision&) = default;
};

/// Day x shift -> workers. A worker appears at most once per slot by
/// construction (sets); legality is judged by validate_schedule.
class ScheduleDraft {
 public:
  ScheduleDraft() = default;
  explicit ScheduleDraft(YearMonth month) : month_(month) {}

  YearMonth month() const { return month_; }
  DraftStatus status() const { return status_; }
  void set_status(DraftStatus s) { status_ = s; }

  const std::map<ShiftSlot, std::set<std::string>>& assignment() const { return assignment_; }
  const std::set<std::string>& workers_on(const ShiftSlot& slot) const;
  bool is_assigned(const std::string& worker_id, const ShiftSlot& slot) const;
  int headcount(const ShiftSlot& slot) const;
  /// Slots of one worker in chronological order.
  std::vector<ShiftSlot> slots_of(const std::string& worker_id) const;

  void assign(const ShiftSlot& slot, const std::string& worker_id, Provenance why);
  void unassign(const ShiftSlot& slot, const std::string& worker_id);
  Provenance provenance(const ShiftSlot& slot, const std::string& worker_id) const;

  const std::vector<WishCollision>& wish_collisions() const { return collisions_; }
  void add_wish_collision(WishCollision c);
  bool wish_overridden(const std::string& wish_id) const;

  const std::set<std::string>& notify() const { return notify_; }
  void flag_for_notification(const std::string& worker_id) { notify_.insert(worker_id); }

  friend bool operator==(const ScheduleDraft&, const ScheduleDraft&) = default;

 private:
  YearMonth month_;
  DraftStatus status_ = DraftStatus::draft;
  std::map<ShiftSlot, std::set<std::string>> assignment_;
  std::map<std::pair<ShiftSlot, std::string>, Provenance> provenance_;
  std::vector<WishCollision> collisions_;
  std::set<std::string> notify_;
};

}  // namespace selfsched
