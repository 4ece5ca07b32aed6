#pragma once

#include <chrono>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "selfsched/config.hpp"
#include "selfsched/conflicts.hpp"
#include "selfsched/event_log.hpp"
#include "selfsched/finalizer.hpp"
#include "selfsched/state.hpp"
#include "selfsched/stats.hpp"

namespace selfsched {

struct UserToken {
  std::string token;
  Actor actor;
};

/// Contents of the service config file: the planning rules plus the
/// deployment bits (static bearer tokens, listen address).
struct ServiceSettings {
  SystemConfig system;
  std::vector<UserToken> users;
  std::string host = "127.0.0.1";
  int port = 8080;
};

/// Throws InvalidConfig.
ServiceSettings settings_from_json(const nlohmann::json& j);
ServiceSettings load_settings(const std::filesystem::path& path);

using Clock = std::function<std::chrono::system_clock::time_point()>;

std::string iso_timestamp(std::chrono::system_clock::time_point t);
Date date_of(std::chrono::system_clock::time_point t);
/// Parses "YYYY-MM-DDTHH:MM:SSZ" or a bare date (midnight UTC).
std::chrono::system_clock::time_point parse_timestamp(const std::string& text);

/// Serializes every mutation through one writer: copy the current state,
/// apply the event, append it to the log, then publish the new state as an
/// immutable snapshot. Readers only ever see complete snapshots.
class PlanningService {
 public:
  PlanningService(SystemConfig config, EventLog log, Clock clock = {});

  std::shared_ptr<const SystemState> snapshot() const;
  std::vector<Event> events() const;
  const SystemConfig& config() const { return config_; }
  std::chrono::system_clock::time_point now() const { return clock_(); }

  Event import_roster(const Actor& caller, std::vector<Worker> workers);
  Event open_cycle(const Actor& caller, YearMonth month, std::optional<int> quota = std::nullopt);
  Wish submit_wish(const Actor& caller, YearMonth month, Date date, WishScope scope, bool priority = false);
  Wish planner_enter_wish(const Actor& caller, YearMonth month, const std::string& worker_id, Date date,
                          WishScope scope);
  Event withdraw_wishes(const Actor& caller, YearMonth month, std::vector<std::string> wish_ids,
                        std::optional<std::string> conflict_id = std::nullopt);
  /// Withdraws from a conflict; defaults to all of the caller's wishes in it.
  Event withdraw_from_conflict(const Actor& caller, const std::string& conflict_id,
                               std::vector<std::string> wish_ids);
  std::vector<Conflict> detect(const Actor& caller, YearMonth month);
  /// Computes against a snapshot outside the writer lock; a successful draft
  /// is installed only if the cycle has not changed meanwhile (else
  /// StaleSnapshot).
  AutofillResult autofill(const Actor& caller, YearMonth month, const AutofillOptions& options = {});
  OverrideOutcome apply_override(const Actor& caller, YearMonth month, const OverrideChange& change);
  ReleaseInfo release(const Actor& caller, YearMonth month, std::optional<int> expected_version = std::nullopt);
  SwapProposal propose_swap(const Actor& caller, YearMonth month, const std::string& counterpart,
                            const ShiftSlot& give, const ShiftSlot& take);
  SwapProposal accept_swap(const Actor& caller, const std::string& swap_id);
  SwapProposal reject_swap(const Actor& caller, const std::string& swap_id);
  StandInEvent record_stand_in(const Actor& caller, YearMonth month, const std::string& absent_worker,
                               const std::string& volunteer, const ShiftSlot& slot);
  int give_kudos(const Actor& caller, const std::string& worker_id);
  Phase advance_phase(const Actor& caller, YearMonth month);

 private:
  struct Committed {
    Event event;
    std::shared_ptr<const SystemState> state;
  };

  Committed commit(const Actor& caller, EventKind kind, nlohmann::json payload);
  Committed commit_locked(const Actor& caller, EventKind kind, nlohmann::json payload);

  SystemConfig config_;
  EventLog log_;
  Clock clock_;
  std::mutex writer_;
  mutable std::mutex snapshot_mutex_;
  std::shared_ptr<const SystemState> current_;
  std::vector<Event> events_;
};

void require_planner(const Actor& caller);

}  // namespace selfsched
