#include "selfsched/export.hpp"

#include <cstdio>
#include <sstream>

namespace selfsched {

namespace {

constexpr const char* kFreeCell = "·";

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string ical_time(Date d, ClockTime t) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d%02u%02uT%02d%02d00", d.year(), d.month(), d.day(), t.minutes / 60,
                t.minutes % 60);
  return buf;
}

/// RFC 5545 TEXT escaping.
std::string ical_text(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '\\' || c == ';' || c == ',') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  return out;
}

}  // namespace

std::string schedule_matrix_csv(const ScheduleDraft& schedule, const Roster& roster) {
  const YearMonth month = schedule.month();
  std::ostringstream out;
  out << "worker_id";
  for (Date d = month.first_day(); d <= month.last_day(); d = d.plus_days(1)) out << ',' << d.iso();
  out << '\n';
  for (const Worker& w : roster.workers()) {
    out << csv_field(w.id);
    for (Date d = month.first_day(); d <= month.last_day(); d = d.plus_days(1)) {
      std::string cell;
      if (schedule.is_assigned(w.id, {d, ShiftKind::morning})) cell += 'M';
      if (schedule.is_assigned(w.id, {d, ShiftKind::afternoon})) cell += 'A';
      out << ',' << (cell.empty() ? kFreeCell : cell);
    }
    out << '\n';
  }
  return out.str();
}

std::string worker_icalendar(const ScheduleDraft& schedule, const Worker& worker, const SystemConfig& config,
                             const std::string& stamp) {
  std::string out;
  auto line = [&](const std::string& l) { out += l + "\r\n"; };
  line("BEGIN:VCALENDAR");
  line("VERSION:2.0");
  line("PRODID:-//selfsched//shift schedule//EN");
  line("CALSCALE:GREGORIAN");
  line("X-WR-CALNAME:" + ical_text("Shifts " + worker.display_name + " " + schedule.month().str()));
  for (const ShiftSlot& slot : schedule.slots_of(worker.id)) {
    const ShiftTimes& t = config.times(slot.shift);
    line("BEGIN:VEVENT");
    line("UID:" + worker.id + "-" + slot.date.iso() + "-" + std::string(to_string(slot.shift)) + "@selfsched");
    line("DTSTAMP:" + stamp);
    line("DTSTART:" + ical_time(slot.date, t.start));
    line("DTEND:" + ical_time(slot.date, t.end));
    line("SUMMARY:" + ical_text(slot.shift == ShiftKind::morning ? "Morning shift" : "Afternoon shift"));
    line("CATEGORIES:" + std::string(to_string(schedule.provenance(slot, worker.id))));
    line("END:VEVENT");
  }
  line("END:VCALENDAR");
  return out;
}

}  // namespace selfsched
