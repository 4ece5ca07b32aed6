#include "selfsched/roster_io.hpp"

#include <charconv>
#include <istream>
#include <sstream>

#include "selfsched/errors.hpp"

namespace selfsched {

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  fields.push_back(std::move(current));
  return fields;
}

namespace {

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

std::string strip_bom(std::string line) {
  if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
  return line;
}

[[noreturn]] void row_error(int line_no, const std::string& msg) {
  throw PlanningError(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": " + msg,
                      {{"line", line_no}});
}

bool parse_bool(const std::string& text, int line_no) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no" || text.empty()) return false;
  row_error(line_no, "invalid boolean '" + text + "'");
}

template <typename T>
T parse_number(const std::string& text, int line_no, const char* field) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    row_error(line_no, std::string("invalid ") + field + " '" + text + "'");
  }
  return value;
}

void expect_header(std::istream& in, std::string_view header) {
  std::string line;
  if (!std::getline(in, line)) {
    throw PlanningError(ErrorCode::ParseError, "missing header '" + std::string(header) + "'");
  }
  if (strip_bom(strip_cr(line)) != header) {
    throw PlanningError(ErrorCode::ParseError, "unexpected header, want '" + std::string(header) + "'",
                        {{"line", 1}});
  }
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  return out + "\"";
}

std::string format_hours(double h) {
  std::ostringstream os;
  os << h;
  return os.str();
}

}  // namespace

std::vector<Worker> parse_roster_csv(std::istream& in) {
  expect_header(in, kRosterHeader);
  std::vector<Worker> workers;
  std::string line;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 8) row_error(line_no, "expected 8 fields, got " + std::to_string(f.size()));
    try {
      Worker w;
      w.id = f[0];
      w.display_name = f[1];
      w.qualification = parse_qualification(f[2]);
      w.is_leader = parse_bool(f[3], line_no);
      w.contract_hours_per_week = parse_number<double>(f[4], line_no, "contract_hours_per_week");
      w.weekend_parity_anchor = Date::parse_iso(f[5]);
      w.max_consecutive_days = parse_number<int>(f[6], line_no, "max_consecutive_days");
      w.shift_preference = parse_shift_preference(f[7]);
      workers.push_back(std::move(w));
    } catch (const PlanningError& e) {
      if (e.code() == ErrorCode::ParseError) throw;
      row_error(line_no, e.what());
    }
  }
  return workers;
}

std::vector<AbsenceRecord> parse_absences_csv(std::istream& in) {
  expect_header(in, kAbsenceHeader);
  std::vector<AbsenceRecord> out;
  std::string line;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 3) row_error(line_no, "expected 3 fields, got " + std::to_string(f.size()));
    try {
      out.push_back({f[0], Date::parse_iso(f[1]), parse_absence_reason(f[2])});
    } catch (const PlanningError& e) {
      row_error(line_no, e.what());
    }
  }
  return out;
}

std::string write_roster_csv(const Roster& roster) {
  std::string out(kRosterHeader);
  out += '\n';
  for (const Worker& w : roster.workers()) {
    out += csv_field(w.id) + ',' + csv_field(w.display_name) + ',' +
           std::string(to_string(w.qualification)) + ',' + (w.is_leader ? "true" : "false") + ',' +
           format_hours(w.contract_hours_per_week) + ',' + w.weekend_parity_anchor.iso() + ',' +
           std::to_string(w.max_consecutive_days) + ',' +
           std::string(to_string(w.shift_preference)) + '\n';
  }
  return out;
}

std::string write_absences_csv(const Roster& roster) {
  std::string out(kAbsenceHeader);
  out += '\n';
  for (const Worker& w : roster.workers()) {
    for (const auto& [date, reason] : w.absences) {
      out += csv_field(w.id) + ',' + date.iso() + ',' + std::string(to_string(reason)) + '\n';
    }
  }
  return out;
}

}  // namespace selfsched
