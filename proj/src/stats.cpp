#include "selfsched/stats.hpp"

#include <algorithm>

#include "selfsched/codec.hpp"

namespace selfsched {

bool StatsQuery::includes(YearMonth m) const {
  if (from && m < *from) return false;
  if (to && m > *to) return false;
  return !exclude.contains(m);
}

int UsageStats::max_per_worker() const {
  int best = 0;
  for (const auto& [id, n] : per_worker) best = std::max(best, n);
  return best;
}

UsageStats stats_report(std::span<const Event> events, const StatsQuery& query) {
  UsageStats s;
  for (const Event& e : events) {
    if (e.kind == EventKind::WishWithdrawn) {
      if (query.includes(field<YearMonth>(e.payload, "month"))) {
        s.withdrawn += static_cast<int>(field<std::vector<std::string>>(e.payload, "wish_ids").size());
      }
      continue;
    }
    if (e.kind != EventKind::WishSubmitted && e.kind != EventKind::PlannerWishEntered) continue;
    const YearMonth month = field<YearMonth>(e.payload, "month");
    if (!query.includes(month)) continue;
    ++s.total;
    ++s.per_month[month];
    ++s.per_worker[field<std::string>(e.payload, "worker_id")];
    switch (parse_wish_scope(field<std::string>(e.payload, "scope"))) {
      case WishScope::morning: ++s.morning; break;
      case WishScope::afternoon: ++s.afternoon; break;
      case WishScope::whole_day: ++s.whole_day; break;
    }
    if (e.kind == EventKind::PlannerWishEntered) ++s.planner_entered;
  }
  return s;
}

nlohmann::json to_json_value(const UsageStats& stats) {
  nlohmann::json months = nlohmann::json::object();
  for (const auto& [m, n] : stats.per_month) months[m.str()] = n;
  return {{"total", stats.total},
          {"per_month", months},
          {"per_worker", stats.per_worker},
          {"scopes", {{"morning", stats.morning}, {"afternoon", stats.afternoon}, {"whole_day", stats.whole_day}}},
          {"distinct_workers", stats.distinct_workers()},
          {"max_per_worker", stats.max_per_worker()},
          {"planner_entered", stats.planner_entered},
          {"withdrawn", stats.withdrawn}};
}

std::vector<std::string> wish_reminders(const SystemState& state, YearMonth month) {
  const PlanningCycle& cycle = state.cycle(month);
  std::vector<std::string> out;
  for (const Worker& w : state.roster.workers()) {
    const bool any = std::any_of(cycle.wishes.begin(), cycle.wishes.end(),
                                 [&](const Wish& wish) { return wish.worker_id == w.id; });
    if (!any) out.push_back(w.id);
  }
  return out;
}

}  // namespace selfsched
