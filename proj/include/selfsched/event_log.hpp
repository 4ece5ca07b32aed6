#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace selfsched {

enum class EventKind {
  RosterImported,
  CycleOpened,
  WishSubmitted,
  WishWithdrawn,
  PlannerWishEntered,
  ConflictsRecomputed,
  DraftCreated,
  OverrideApplied,
  ScheduleReleased,
  SwapProposed,
  SwapAccepted,
  SwapRejected,
  StandInRecorded,
  KudosGiven,
  PhaseAdvanced,
};

std::string_view to_string(EventKind k);
/// Throws InvalidField.
EventKind parse_event_kind(std::string_view text);

struct Event {
  long seq = 0;
  std::string timestamp;
  std::string actor;
  EventKind kind = EventKind::CycleOpened;
  nlohmann::json payload = nlohmann::json::object();

  friend bool operator==(const Event&, const Event&) = default;
};

/// One compact JSON object, no trailing newline.
std::string serialize_event(const Event& e);
/// Throws CorruptLog naming `line_no`.
Event parse_event(const std::string& line, long line_no);

/// Parses a whole log and checks that seq runs 1, 2, 3, ... without gaps.
std::vector<Event> read_events(std::istream& in);
void write_events(std::ostream& out, const std::vector<Event>& events);

/// Append-only JSONL file. With an empty path the log lives in memory only.
class EventLog {
 public:
  EventLog() = default;
  explicit EventLog(std::filesystem::path path);

  const std::filesystem::path& path() const { return path_; }
  /// Reads the file (or returns the in-memory events). Throws CorruptLog.
  std::vector<Event> load() const;
  /// Writes one line and flushes. Throws IoError.
  void append(const Event& e);
  long last_seq() const { return last_seq_; }

 private:
  std::filesystem::path path_;
  std::vector<Event> memory_;
  long last_seq_ = 0;
};

}  // namespace selfsched
