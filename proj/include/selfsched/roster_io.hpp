#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "selfsched/domain.hpp"

namespace selfsched {

inline constexpr std::string_view kRosterHeader =
    "worker_id,name,qualification,is_leader,contract_hours_per_week,weekend_anchor,"
    "max_consecutive_days,shift_preference";
inline constexpr std::string_view kAbsenceHeader = "worker_id,date,reason";

/// Splits one CSV record; double-quoted fields may contain commas and "".
std::vector<std::string> split_csv_line(std::string_view line);

/// Parses the roster import file. Throws ParseError with the line number on
/// malformed rows; invariant checks are left to build_roster.
std::vector<Worker> parse_roster_csv(std::istream& in);
std::vector<AbsenceRecord> parse_absences_csv(std::istream& in);

std::string write_roster_csv(const Roster& roster);
std::string write_absences_csv(const Roster& roster);

}  // namespace selfsched
