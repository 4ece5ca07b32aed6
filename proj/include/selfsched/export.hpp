#pragma once

#include <string>

#include "selfsched/config.hpp"
#include "selfsched/domain.hpp"
#include "selfsched/schedule.hpp"

namespace selfsched {

/// Rows are workers, columns are the days of the month. Cells hold `M`,
/// `A`, `MA` or a middle dot for a free day.
std::string schedule_matrix_csv(const ScheduleDraft& schedule, const Roster& roster);

/// One VEVENT per assigned shift of `worker_id`, with floating local times.
/// `stamp` is the DTSTAMP value (UTC, YYYYMMDDTHHMMSSZ).
std::string worker_icalendar(const ScheduleDraft& schedule, const Worker& worker, const SystemConfig& config,
                             const std::string& stamp);

}  // namespace selfsched
