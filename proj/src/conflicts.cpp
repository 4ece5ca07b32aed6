#include "selfsched/conflicts.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <tuple>

#include "selfsched/errors.hpp"

namespace selfsched {

namespace {

struct CoverItem {
  const Wish* wish = nullptr;
  bool certified = false;
};

/// "At least `need` of `helpers` must be withdrawn."
struct CoverRequirement {
  std::vector<int> helpers;
  int need = 0;
};

/// Enumerates the inclusion-minimal item sets meeting every requirement.
/// Each level k runs a branching search limited to k items: branch on the
/// tightest unmet requirement, trying its helpers in turn while excluding
/// the helpers already tried, so every set is reached on exactly one path.
class MinimalCoverSearch {
 public:
  MinimalCoverSearch(std::size_t item_count, std::vector<CoverRequirement> reqs)
      : reqs_(std::move(reqs)), item_reqs_(item_count), chosen_(item_count, 0), excluded_(item_count, 0),
        met_(reqs_.size(), 0) {
    for (std::size_t r = 0; r < reqs_.size(); ++r) {
      for (int item : reqs_[r].helpers) item_reqs_[static_cast<std::size_t>(item)].push_back(static_cast<int>(r));
    }
  }

  bool jointly_satisfiable() const {
    return std::all_of(reqs_.begin(), reqs_.end(),
                       [](const CoverRequirement& r) { return static_cast<int>(r.helpers.size()) >= r.need; });
  }

  /// Minimal sets of exactly `k` items. With `stop_after_first`, returns
  /// after one hit.
  std::vector<std::vector<int>> of_size(int k, bool stop_after_first) {
    found_.clear();
    limit_ = k;
    stop_after_first_ = stop_after_first;
    recurse();
    return std::move(found_);
  }

 private:
  int remaining(std::size_t r) const { return reqs_[r].need - met_[r]; }

  bool usable(int item) const {
    return !chosen_[static_cast<std::size_t>(item)] && !excluded_[static_cast<std::size_t>(item)];
  }

  void choose(int item, int delta) {
    chosen_[static_cast<std::size_t>(item)] = delta > 0;
    for (int r : item_reqs_[static_cast<std::size_t>(item)]) met_[static_cast<std::size_t>(r)] += delta;
    if (delta > 0) current_.push_back(item);
    else current_.pop_back();
  }

  bool minimal() const {
    for (int item : current_) {
      bool needed = false;
      for (int r : item_reqs_[static_cast<std::size_t>(item)]) {
        if (met_[static_cast<std::size_t>(r)] - 1 < reqs_[static_cast<std::size_t>(r)].need) {
          needed = true;
          break;
        }
      }
      if (!needed) return false;
    }
    return true;
  }

  void recurse() {
    if (stop_after_first_ && !found_.empty()) return;
    const int picks_left = limit_ - static_cast<int>(current_.size());
    int best = -1;
    int best_slack = std::numeric_limits<int>::max();
    for (std::size_t r = 0; r < reqs_.size(); ++r) {
      const int need = remaining(r);
      if (need <= 0) continue;
      if (need > picks_left) return;
      int open = 0;
      for (int item : reqs_[r].helpers) open += usable(item) ? 1 : 0;
      const int slack = open - need;
      if (slack < 0) return;
      if (slack < best_slack) {
        best_slack = slack;
        best = static_cast<int>(r);
      }
    }
    if (best < 0) {
      if (picks_left == 0 && minimal()) {
        std::vector<int> set = current_;
        std::sort(set.begin(), set.end());
        found_.push_back(std::move(set));
      }
      return;
    }
    std::vector<int> tried;
    for (int item : reqs_[static_cast<std::size_t>(best)].helpers) {
      if (!usable(item)) continue;
      choose(item, +1);
      recurse();
      choose(item, -1);
      excluded_[static_cast<std::size_t>(item)] = 1;
      tried.push_back(item);
      if (stop_after_first_ && !found_.empty()) break;
    }
    for (int item : tried) excluded_[static_cast<std::size_t>(item)] = 0;
  }

  std::vector<CoverRequirement> reqs_;
  std::vector<std::vector<int>> item_reqs_;
  std::vector<char> chosen_;
  std::vector<char> excluded_;
  std::vector<int> met_;
  std::vector<int> current_;
  std::vector<std::vector<int>> found_;
  int limit_ = 0;
  bool stop_after_first_ = false;
};

int scope_rank(WishScope s) {
  switch (s) {
    case WishScope::morning: return 0;
    case WishScope::afternoon: return 1;
    case WishScope::whole_day: return 2;
  }
  return 2;
}

using ElementKey = std::tuple<std::string, Date, int, std::string>;

ElementKey element_key(const Wish& w) { return {w.worker_id, w.date, scope_rank(w.scope), w.id}; }

const Wish* find_wish(std::span<const Wish> wishes, const std::string& id) {
  for (const Wish& w : wishes) {
    if (w.id == id) return &w;
  }
  return nullptr;
}

/// A pending wish adds capacity to a deficient slot when its holder could
/// otherwise work there and the slot is short of what the holder provides.
bool helps(const Wish& wish, const Worker& holder, const DeficientSlot& ds, const RuleSet& rules) {
  if (!wish.is_pending() || !wish.covers(ds.slot)) return false;
  if (holder.absent_on(ds.slot.date)) return false;
  if (weekend_status(holder, ds.slot.date) == WeekendStatus::free_weekend) return false;
  return ds.deficit.staff > 0 || (ds.deficit.certified > 0 && rules.counts_as_certified(holder));
}

std::vector<const Wish*> involved_in(const std::vector<DeficientSlot>& slots, const Roster& roster,
                                     std::span<const Wish> wishes, const RuleSet& rules) {
  std::vector<const Wish*> out;
  for (const Wish& w : wishes) {
    const Worker* holder = roster.find(w.worker_id);
    if (!holder) continue;
    if (std::any_of(slots.begin(), slots.end(),
                    [&](const DeficientSlot& ds) { return helps(w, *holder, ds, rules); })) {
      out.push_back(&w);
    }
  }
  return out;
}

int find_root(std::vector<int>& parent, int x) {
  while (parent[static_cast<std::size_t>(x)] != x) {
    parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
    x = parent[static_cast<std::size_t>(x)];
  }
  return x;
}

}  // namespace

SolutionList enumerate_solutions(const Conflict& conflict, const Roster& roster, std::span<const Wish> wishes,
                                 const RuleSet& rules, int cap) {
  if (conflict.deficient_slots.empty()) {
    throw PlanningError(ErrorCode::EmptyConflict, "conflict " + conflict.id + " has no deficient slot");
  }
  std::vector<CoverItem> items;
  for (const std::string& id : conflict.involved_wishes) {
    const Wish* w = find_wish(wishes, id);
    if (!w || !w->is_pending()) continue;
    const Worker* holder = roster.find(w->worker_id);
    if (!holder) continue;
    items.push_back({w, rules.counts_as_certified(*holder)});
  }
  std::sort(items.begin(), items.end(),
            [](const CoverItem& a, const CoverItem& b) { return element_key(*a.wish) < element_key(*b.wish); });

  std::vector<CoverRequirement> reqs;
  for (const DeficientSlot& ds : conflict.deficient_slots) {
    CoverRequirement staff{{}, ds.deficit.staff};
    CoverRequirement certified{{}, ds.deficit.certified};
    for (std::size_t i = 0; i < items.size(); ++i) {
      const Worker& holder = roster.at(items[i].wish->worker_id);
      if (!helps(*items[i].wish, holder, ds, rules)) continue;
      staff.helpers.push_back(static_cast<int>(i));
      if (items[i].certified) certified.helpers.push_back(static_cast<int>(i));
    }
    if (staff.need > 0) reqs.push_back(std::move(staff));
    if (certified.need > 0) reqs.push_back(std::move(certified));
  }

  MinimalCoverSearch search(items.size(), reqs);
  if (!search.jointly_satisfiable()) {
    throw PlanningError(ErrorCode::NoSolution,
                        "no combination of withdrawals relieves conflict " + conflict.id,
                        {{"conflict_id", conflict.id}});
  }

  const int n = static_cast<int>(items.size());
  std::vector<std::vector<int>> found;
  int k = 1;
  for (; k <= n && static_cast<int>(found.size()) < cap; ++k) {
    auto level = search.of_size(k, false);
    found.insert(found.end(), std::make_move_iterator(level.begin()), std::make_move_iterator(level.end()));
  }
  SolutionList result;
  result.truncated = static_cast<int>(found.size()) > cap;
  for (; k <= n && !result.truncated; ++k) {
    result.truncated = !search.of_size(k, true).empty();
  }

  // Items are pre-sorted by (worker_id, date), so index order is key order.
  std::sort(found.begin(), found.end(), [](const std::vector<int>& a, const std::vector<int>& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  if (static_cast<int>(found.size()) > cap) found.resize(static_cast<std::size_t>(cap));
  if (found.empty()) {
    throw PlanningError(ErrorCode::NoSolution, "no combination of withdrawals relieves conflict " + conflict.id,
                        {{"conflict_id", conflict.id}});
  }
  for (const auto& set : found) {
    WithdrawalSet ws;
    for (int i : set) ws.wish_ids.push_back(items[static_cast<std::size_t>(i)].wish->id);
    result.sets.push_back(std::move(ws));
  }
  return result;
}

DetectionResult detect_conflicts(const PlanningWindow& window, const Roster& roster, std::span<const Wish> wishes,
                                 const RuleSet& rules) {
  const Availability availability(window, roster, wishes);
  std::vector<DeficientSlot> deficient;
  for (const ShiftSlot& slot : window.slots()) {
    const Deficit d = coverage_deficit(availability, slot, rules);
    if (d.any()) deficient.push_back({slot, d});
  }

  // Link deficient slots through wishes that help more than one of them.
  std::vector<int> parent(deficient.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::vector<std::vector<const Wish*>> helpers(deficient.size());
  std::map<std::string, int> first_slot_of_wish;
  for (std::size_t i = 0; i < deficient.size(); ++i) {
    for (const Wish& w : wishes) {
      const Worker* holder = roster.find(w.worker_id);
      if (!holder || !helps(w, *holder, deficient[i], rules)) continue;
      helpers[i].push_back(&w);
      auto [it, inserted] = first_slot_of_wish.emplace(w.id, static_cast<int>(i));
      if (!inserted) parent[static_cast<std::size_t>(find_root(parent, static_cast<int>(i)))] = find_root(parent, it->second);
    }
  }

  DetectionResult result;
  std::map<int, std::vector<std::size_t>> components;  // root -> slot indices (chronological)
  for (std::size_t i = 0; i < deficient.size(); ++i) {
    if (helpers[i].empty()) {
      result.uncovered.push_back(deficient[i]);
      continue;
    }
    components[find_root(parent, static_cast<int>(i))].push_back(i);
  }

  std::vector<std::vector<std::size_t>> ordered;
  for (auto& [root, members] : components) ordered.push_back(std::move(members));
  std::sort(ordered.begin(), ordered.end(),
            [&](const auto& a, const auto& b) { return deficient[a.front()].slot < deficient[b.front()].slot; });

  for (const auto& members : ordered) {
    Conflict c;
    const ShiftSlot& first = deficient[members.front()].slot;
    c.id = "cf-" + first.date.iso() + "-" + std::string(to_string(first.shift));
    for (std::size_t i : members) c.deficient_slots.push_back(deficient[i]);
    for (const Wish* w : involved_in(c.deficient_slots, roster, wishes, rules)) c.involved_wishes.push_back(w->id);
    std::sort(c.involved_wishes.begin(), c.involved_wishes.end());
    try {
      SolutionList sl = enumerate_solutions(c, roster, wishes, rules, rules.config.solution_cap);
      c.solutions = std::move(sl.sets);
      c.truncated = sl.truncated;
    } catch (const PlanningError& e) {
      if (e.code() != ErrorCode::NoSolution) throw;
      c.resolvable = false;
    }
    result.conflicts.push_back(std::move(c));
  }
  return result;
}

bool involves_worker(const Conflict& conflict, std::span<const Wish> wishes, const std::string& worker_id) {
  return std::any_of(conflict.involved_wishes.begin(), conflict.involved_wishes.end(), [&](const std::string& id) {
    const Wish* w = find_wish(wishes, id);
    return w && w->worker_id == worker_id;
  });
}

ConflictView make_view(const Conflict& conflict, std::span<const Wish> wishes, const Roster& roster) {
  ConflictView v{conflict.id, conflict.deficient_slots, {}, conflict.solutions, conflict.truncated,
                 conflict.resolvable};
  for (const std::string& id : conflict.involved_wishes) {
    const Wish* w = find_wish(wishes, id);
    if (!w) continue;
    const Worker* holder = roster.find(w->worker_id);
    v.participants.push_back(
        {w->id, w->worker_id, holder ? holder->display_name : w->worker_id, w->date, w->scope, w->priority});
  }
  return v;
}

std::vector<ConflictView> conflicts_visible_to(const Actor& caller, std::span<const Conflict> conflicts,
                                               std::span<const Wish> wishes, const Roster& roster) {
  std::vector<ConflictView> out;
  for (const Conflict& c : conflicts) {
    if (caller.is_planner() || involves_worker(c, wishes, caller.id)) out.push_back(make_view(c, wishes, roster));
  }
  return out;
}

}  // namespace selfsched
