#include "selfsched/event_log.hpp"

#include <array>
#include <fstream>
#include <sstream>

#include "selfsched/errors.hpp"

namespace selfsched {

namespace {

constexpr std::array kKinds{
    EventKind::RosterImported,   EventKind::CycleOpened,         EventKind::WishSubmitted,
    EventKind::WishWithdrawn,    EventKind::PlannerWishEntered,  EventKind::ConflictsRecomputed,
    EventKind::DraftCreated,     EventKind::OverrideApplied,     EventKind::ScheduleReleased,
    EventKind::SwapProposed,     EventKind::SwapAccepted,        EventKind::SwapRejected,
    EventKind::StandInRecorded,  EventKind::KudosGiven,          EventKind::PhaseAdvanced,
};

[[noreturn]] void corrupt(long line_no, const std::string& why) {
  throw PlanningError(ErrorCode::CorruptLog, "line " + std::to_string(line_no) + ": " + why,
                      {{"line", line_no}});
}

}  // namespace

std::string_view to_string(EventKind k) {
  switch (k) {
    case EventKind::RosterImported: return "RosterImported";
    case EventKind::CycleOpened: return "CycleOpened";
    case EventKind::WishSubmitted: return "WishSubmitted";
    case EventKind::WishWithdrawn: return "WishWithdrawn";
    case EventKind::PlannerWishEntered: return "PlannerWishEntered";
    case EventKind::ConflictsRecomputed: return "ConflictsRecomputed";
    case EventKind::DraftCreated: return "DraftCreated";
    case EventKind::OverrideApplied: return "OverrideApplied";
    case EventKind::ScheduleReleased: return "ScheduleReleased";
    case EventKind::SwapProposed: return "SwapProposed";
    case EventKind::SwapAccepted: return "SwapAccepted";
    case EventKind::SwapRejected: return "SwapRejected";
    case EventKind::StandInRecorded: return "StandInRecorded";
    case EventKind::KudosGiven: return "KudosGiven";
    case EventKind::PhaseAdvanced: return "PhaseAdvanced";
  }
  return "CycleOpened";
}

EventKind parse_event_kind(std::string_view text) {
  for (EventKind k : kKinds) {
    if (to_string(k) == text) return k;
  }
  throw PlanningError(ErrorCode::InvalidField, "unknown event kind '" + std::string(text) + "'");
}

std::string serialize_event(const Event& e) {
  const nlohmann::json j{{"seq", e.seq},
                         {"timestamp", e.timestamp},
                         {"actor", e.actor},
                         {"kind", to_string(e.kind)},
                         {"payload", e.payload}};
  return j.dump();
}

Event parse_event(const std::string& line, long line_no) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& err) {
    corrupt(line_no, std::string("malformed JSON: ") + err.what());
  }
  if (!j.is_object()) corrupt(line_no, "event is not an object");
  try {
    Event e;
    e.seq = j.at("seq").get<long>();
    e.timestamp = j.at("timestamp").get<std::string>();
    e.actor = j.at("actor").get<std::string>();
    e.kind = parse_event_kind(j.at("kind").get<std::string>());
    e.payload = j.at("payload");
    if (!e.payload.is_object()) corrupt(line_no, "payload is not an object");
    return e;
  } catch (const nlohmann::json::exception& err) {
    corrupt(line_no, err.what());
  } catch (const PlanningError& err) {
    if (err.code() == ErrorCode::CorruptLog) throw;
    corrupt(line_no, err.what());
  }
}

std::vector<Event> read_events(std::istream& in) {
  std::vector<Event> events;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    Event e = parse_event(line, line_no);
    const long expected = events.empty() ? 1 : events.back().seq + 1;
    if (e.seq != expected) {
      corrupt(line_no, "expected seq " + std::to_string(expected) + ", found " + std::to_string(e.seq));
    }
    events.push_back(std::move(e));
  }
  return events;
}

void write_events(std::ostream& out, const std::vector<Event>& events) {
  for (const Event& e : events) out << serialize_event(e) << '\n';
}

EventLog::EventLog(std::filesystem::path path) : path_(std::move(path)) {
  if (!path_.empty() && std::filesystem::exists(path_)) {
    const auto events = load();
    last_seq_ = events.empty() ? 0 : events.back().seq;
  }
}

std::vector<Event> EventLog::load() const {
  if (path_.empty()) return memory_;
  std::ifstream in(path_);
  if (!in) {
    if (!std::filesystem::exists(path_)) return {};
    throw PlanningError(ErrorCode::IoError, "cannot read " + path_.string());
  }
  return read_events(in);
}

void EventLog::append(const Event& e) {
  if (e.seq != last_seq_ + 1) {
    throw PlanningError(ErrorCode::CorruptLog, "append out of order: seq " + std::to_string(e.seq) +
                                                   " after " + std::to_string(last_seq_));
  }
  if (path_.empty()) {
    memory_.push_back(e);
  } else {
    std::ofstream out(path_, std::ios::app);
    out << serialize_event(e) << '\n';
    out.flush();
    if (!out) throw PlanningError(ErrorCode::IoError, "cannot append to " + path_.string());
  }
  last_seq_ = e.seq;
}

}  // namespace selfsched
