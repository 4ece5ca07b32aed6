#include "selfsched/schedule.hpp"

#include <algorithm>

#include "selfsched/errors.hpp"

namespace selfsched {

std::string_view to_string(DraftStatus s) { return s == DraftStatus::finalized ? "finalized" : "draft"; }

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::autofill: return "autofill";
    case Provenance::override: return "override";
    case Provenance::swap: return "swap";
    case Provenance::stand_in: return "stand_in";
  }
  return "autofill";
}

DraftStatus parse_draft_status(std::string_view text) {
  if (text == "draft") return DraftStatus::draft;
  if (text == "finalized") return DraftStatus::finalized;
  throw PlanningError(ErrorCode::InvalidField, "invalid draft status '" + std::string(text) + "'");
}

Provenance parse_provenance(std::string_view text) {
  if (text == "autofill") return Provenance::autofill;
  if (text == "override") return Provenance::override;
  if (text == "swap") return Provenance::swap;
  if (text == "stand_in") return Provenance::stand_in;
  throw PlanningError(ErrorCode::InvalidField, "invalid provenance '" + std::string(text) + "'");
}

const std::set<std::string>& ScheduleDraft::workers_on(const ShiftSlot& slot) const {
  static const std::set<std::string> kEmpty;
  auto it = assignment_.find(slot);
  return it == assignment_.end() ? kEmpty : it->second;
}

bool ScheduleDraft::is_assigned(const std::string& worker_id, const ShiftSlot& slot) const {
  return workers_on(slot).contains(worker_id);
}

int ScheduleDraft::headcount(const ShiftSlot& slot) const {
  return static_cast<int>(workers_on(slot).size());
}

std::vector<ShiftSlot> ScheduleDraft::slots_of(const std::string& worker_id) const {
  std::vector<ShiftSlot> out;
  for (const auto& [slot, workers] : assignment_) {
    if (workers.contains(worker_id)) out.push_back(slot);
  }
  return out;
}

void ScheduleDraft::assign(const ShiftSlot& slot, const std::string& worker_id, Provenance why) {
  assignment_[slot].insert(worker_id);
  provenance_[{slot, worker_id}] = why;
}

void ScheduleDraft::unassign(const ShiftSlot& slot, const std::string& worker_id) {
  auto it = assignment_.find(slot);
  if (it == assignment_.end()) return;
  it->second.erase(worker_id);
  if (it->second.empty()) assignment_.erase(it);
  provenance_.erase({slot, worker_id});
}

Provenance ScheduleDraft::provenance(const ShiftSlot& slot, const std::string& worker_id) const {
  auto it = provenance_.find({slot, worker_id});
  return it == provenance_.end() ? Provenance::autofill : it->second;
}

void ScheduleDraft::add_wish_collision(WishCollision c) {
  if (std::find(collisions_.begin(), collisions_.end(), c) == collisions_.end()) {
    collisions_.push_back(std::move(c));
  }
}

bool ScheduleDraft::wish_overridden(const std::string& wish_id) const {
  return std::any_of(collisions_.begin(), collisions_.end(),
                     [&](const WishCollision& c) { return c.wish_id == wish_id; });
}

}  // namespace selfsched
