#pragma once

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "selfsched/calendar.hpp"
#include "selfsched/event_log.hpp"
#include "selfsched/state.hpp"

namespace selfsched {

struct StatsQuery {
  std::optional<YearMonth> from;
  std::optional<YearMonth> to;
  std::set<YearMonth> exclude;

  bool includes(YearMonth m) const;
};

/// Wish submissions folded from the log. Planner-entered wishes count like
/// any other; later withdrawals do not remove a submission.
struct UsageStats {
  int total = 0;
  std::map<YearMonth, int> per_month;
  std::map<std::string, int> per_worker;
  int morning = 0;
  int afternoon = 0;
  int whole_day = 0;
  int planner_entered = 0;
  int withdrawn = 0;

  int distinct_workers() const { return static_cast<int>(per_worker.size()); }
  int max_per_worker() const;
};

UsageStats stats_report(std::span<const Event> events, const StatsQuery& query = {});

nlohmann::json to_json_value(const UsageStats& stats);

/// Roster members without a single wish in the month so far.
std::vector<std::string> wish_reminders(const SystemState& state, YearMonth month);

}  // namespace selfsched
