#pragma once

#include <filesystem>
#include <string>

#include "selfsched/config.hpp"

namespace selfsched::study {

/// Configuration the usage log was recorded under.
SystemConfig fixture_config();

/// Replays eleven months of team usage (2019-03 to 2020-01)
/// through PlanningService with a scripted clock. The wish counts per month,
/// per worker and per scope are fixed targets; the dates
/// are synthetic. Returns the event log as JSON lines.
std::string build_event_log();

/// Writes events.jsonl and config.json into `dir`.
void write_fixture(const std::filesystem::path& dir);

}  // namespace selfsched::study
