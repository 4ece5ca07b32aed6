#pragma once

#include <map>
#include <span>
#include <string>

#include <nlohmann/json.hpp>

#include "selfsched/config.hpp"
#include "selfsched/constraints.hpp"
#include "selfsched/domain.hpp"
#include "selfsched/event_log.hpp"
#include "selfsched/workflow.hpp"

namespace selfsched {

/// Everything the log describes. Built only by folding events.
struct SystemState {
  SystemConfig config;
  Roster roster;
  CycleMap cycles;
  std::map<std::string, int> kudos;
  long last_seq = 0;
  /// seq of the last event that touched each cycle (roster imports touch
  /// all of them). Autofill results quote it to detect stale inputs.
  std::map<YearMonth, long> revision;

  const PlanningCycle& cycle(YearMonth month) const;
  PlanningCycle& cycle(YearMonth month);
  /// Rules for a month, with holiday work from earlier released months.
  RuleSet rules_for(YearMonth month) const;
  long revision_of(YearMonth month) const;
};

/// Applies one event by re-running the workflow operation it records.
/// Fills result ids (wish_id, swap_id) into the payload when absent and
/// verifies them when present. Throws PlanningError from the operation.
void apply_event(SystemState& state, Event& event);

/// Folds a log from an initial state. Any failing event is reported as
/// CorruptLog naming its seq.
SystemState replay(const SystemConfig& config, std::span<const Event> events);

nlohmann::json state_to_json(const SystemState& state);

/// The cycle month an event belongs to, when it has one.
std::optional<YearMonth> event_month(const Event& event);

}  // namespace selfsched
