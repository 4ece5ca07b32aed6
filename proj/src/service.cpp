#include "selfsched/service.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include "selfsched/codec.hpp"
#include "selfsched/errors.hpp"

namespace selfsched {

ServiceSettings settings_from_json(const nlohmann::json& j) {
  ServiceSettings s;
  s.system = config_from_json(j);
  try {
    s.host = j.value("host", s.host);
    s.port = j.value("port", s.port);
    if (j.contains("users")) {
      for (const auto& u : j.at("users")) {
        UserToken t;
        t.token = u.at("token").get<std::string>();
        t.actor.id = u.at("id").get<std::string>();
        t.actor.role = parse_role(u.value("role", std::string("worker")));
        if (t.token.empty()) throw PlanningError(ErrorCode::InvalidConfig, "empty token for " + t.actor.id);
        s.users.push_back(std::move(t));
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw PlanningError(ErrorCode::InvalidConfig, std::string("users: ") + e.what());
  } catch (const PlanningError& e) {
    if (e.code() == ErrorCode::InvalidConfig) throw;
    throw PlanningError(ErrorCode::InvalidConfig, e.what());
  }
  if (s.port < 0 || s.port > 65535) throw PlanningError(ErrorCode::InvalidConfig, "port out of range");
  return s;
}

ServiceSettings load_settings(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw PlanningError(ErrorCode::InvalidConfig, "cannot read config " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw PlanningError(ErrorCode::InvalidConfig, path.string() + ": " + e.what());
  }
  return settings_from_json(j);
}

std::string iso_timestamp(std::chrono::system_clock::time_point t) {
  using namespace std::chrono;
  const auto secs = floor<seconds>(t);
  const auto day = floor<days>(secs);
  const hh_mm_ss hms{secs - day};
  const Date d = Date::from_days(static_cast<int>(day.time_since_epoch().count()));
  char buf[32];
  std::snprintf(buf, sizeof buf, "%sT%02d:%02d:%02dZ", d.iso().c_str(), static_cast<int>(hms.hours().count()),
                static_cast<int>(hms.minutes().count()), static_cast<int>(hms.seconds().count()));
  return buf;
}

Date date_of(std::chrono::system_clock::time_point t) {
  using namespace std::chrono;
  return Date::from_days(static_cast<int>(floor<days>(t).time_since_epoch().count()));
}

std::chrono::system_clock::time_point parse_timestamp(const std::string& text) {
  using namespace std::chrono;
  const Date d = Date::parse_iso(text.substr(0, std::min<std::size_t>(10, text.size())));
  sys_seconds t{seconds{static_cast<long long>(d.days_since_epoch()) * 86400}};
  if (text.size() == 10) return t;
  int h = 0, m = 0, s = 0;
  char tail = 0;
  if (text.size() != 20 || text[10] != 'T' ||
      std::sscanf(text.c_str() + 11, "%2d:%2d:%2d%c", &h, &m, &s, &tail) != 4 || tail != 'Z' || h > 23 ||
      m > 59 || s > 59) {
    throw PlanningError(ErrorCode::InvalidField, "expected YYYY-MM-DDTHH:MM:SSZ, got '" + text + "'");
  }
  return t + hours{h} + minutes{m} + seconds{s};
}

void require_planner(const Actor& caller) {
  if (!caller.is_planner()) throw PlanningError(ErrorCode::Forbidden, caller.id + " is not a planner");
}

PlanningService::PlanningService(SystemConfig config, EventLog log, Clock clock)
    : config_(std::move(config)), log_(std::move(log)), clock_(std::move(clock)) {
  if (!clock_) clock_ = [] { return std::chrono::system_clock::now(); };
  config_.validate();
  events_ = log_.load();
  current_ = std::make_shared<const SystemState>(replay(config_, events_));
}

std::shared_ptr<const SystemState> PlanningService::snapshot() const {
  std::lock_guard lock(snapshot_mutex_);
  return current_;
}

std::vector<Event> PlanningService::events() const {
  std::lock_guard lock(snapshot_mutex_);
  return events_;
}

PlanningService::Committed PlanningService::commit(const Actor& caller, EventKind kind, nlohmann::json payload) {
  std::lock_guard lock(writer_);
  return commit_locked(caller, kind, std::move(payload));
}

PlanningService::Committed PlanningService::commit_locked(const Actor& caller, EventKind kind,
                                                          nlohmann::json payload) {
  auto next = std::make_shared<SystemState>(*snapshot());
  payload["actor_role"] = to_string(caller.role);
  Event e{next->last_seq + 1, iso_timestamp(clock_()), caller.id, kind, std::move(payload)};
  apply_event(*next, e);
  log_.append(e);
  std::shared_ptr<const SystemState> published = std::move(next);
  {
    std::lock_guard lock(snapshot_mutex_);
    events_.push_back(e);
    current_ = published;
  }
  return {std::move(e), std::move(published)};
}

Event PlanningService::import_roster(const Actor& caller, std::vector<Worker> workers) {
  require_planner(caller);
  return commit(caller, EventKind::RosterImported, {{"workers", workers}}).event;
}

Event PlanningService::open_cycle(const Actor& caller, YearMonth month, std::optional<int> quota) {
  require_planner(caller);
  nlohmann::json p{{"month", month}};
  if (quota) p["quota"] = *quota;
  return commit(caller, EventKind::CycleOpened, std::move(p)).event;
}

Wish PlanningService::submit_wish(const Actor& caller, YearMonth month, Date date, WishScope scope, bool priority) {
  nlohmann::json p{{"month", month}, {"worker_id", caller.id}, {"date", date}, {"scope", to_string(scope)}};
  if (priority) p["priority"] = true;
  const Committed c = commit(caller, EventKind::WishSubmitted, std::move(p));
  return *c.state->cycle(month).find_wish(c.event.payload.at("wish_id").get<std::string>());
}

Wish PlanningService::planner_enter_wish(const Actor& caller, YearMonth month, const std::string& worker_id,
                                         Date date, WishScope scope) {
  require_planner(caller);
  const Committed c = commit(caller, EventKind::PlannerWishEntered,
                             {{"month", month}, {"worker_id", worker_id}, {"date", date}, {"scope", to_string(scope)}});
  return *c.state->cycle(month).find_wish(c.event.payload.at("wish_id").get<std::string>());
}

Event PlanningService::withdraw_wishes(const Actor& caller, YearMonth month, std::vector<std::string> wish_ids,
                                       std::optional<std::string> conflict_id) {
  nlohmann::json p{{"month", month}, {"wish_ids", wish_ids}};
  if (conflict_id) p["conflict_id"] = *conflict_id;
  return commit(caller, EventKind::WishWithdrawn, std::move(p)).event;
}

Event PlanningService::withdraw_from_conflict(const Actor& caller, const std::string& conflict_id,
                                              std::vector<std::string> wish_ids) {
  const auto state = snapshot();
  for (const auto& [month, cycle] : state->cycles) {
    for (const Conflict& c : cycle.conflicts) {
      if (c.id != conflict_id) continue;
      if (!caller.is_planner() && !involves_worker(c, cycle.wishes, caller.id)) {
        throw PlanningError(ErrorCode::UnknownConflict, "no conflict " + conflict_id);
      }
      if (wish_ids.empty()) {
        for (const std::string& id : c.involved_wishes) {
          const Wish* w = cycle.find_wish(id);
          if (w && w->worker_id == caller.id) wish_ids.push_back(id);
        }
      }
      for (const std::string& id : wish_ids) {
        if (std::find(c.involved_wishes.begin(), c.involved_wishes.end(), id) == c.involved_wishes.end()) {
          throw PlanningError(ErrorCode::InvalidField, id + " is not part of " + conflict_id);
        }
      }
      if (wish_ids.empty()) throw PlanningError(ErrorCode::NotOwner, caller.id + " holds no wish in " + conflict_id);
      return withdraw_wishes(caller, month, std::move(wish_ids), conflict_id);
    }
  }
  throw PlanningError(ErrorCode::UnknownConflict, "no conflict " + conflict_id);
}

std::vector<Conflict> PlanningService::detect(const Actor& caller, YearMonth month) {
  require_planner(caller);
  const Committed c = commit(caller, EventKind::ConflictsRecomputed, {{"month", month}});
  return c.state->cycle(month).conflicts;
}

AutofillResult PlanningService::autofill(const Actor& caller, YearMonth month, const AutofillOptions& options) {
  require_planner(caller);
  const auto state = snapshot();
  const long revision = state->revision_of(month);
  AutofillResult result = selfsched::autofill(state->cycle(month), state->roster, state->rules_for(month), options);
  if (const auto* draft = std::get_if<ScheduleDraft>(&result)) {
    std::lock_guard lock(writer_);
    if (snapshot()->revision_of(month) != revision) {
      throw PlanningError(ErrorCode::StaleSnapshot, "cycle " + month.str() + " changed while autofill ran");
    }
    commit_locked(caller, EventKind::DraftCreated,
                  {{"month", month},
                   {"based_on_revision", revision},
                   {"draft", *draft},
                   {"acknowledged", options.acknowledge_conflicts}});
  }
  return result;
}

OverrideOutcome PlanningService::apply_override(const Actor& caller, YearMonth month, const OverrideChange& change) {
  require_planner(caller);
  const Committed c = commit(caller, EventKind::OverrideApplied, {{"month", month}, {"change", change}});
  const auto ids = field<std::vector<std::string>>(c.event.payload, "collided_wishes");
  OverrideOutcome out{*current_schedule(c.state->cycle(month)), {}};
  for (const WishCollision& wc : out.draft.wish_collisions()) {
    if (std::find(ids.begin(), ids.end(), wc.wish_id) != ids.end() && wc.slot == change.slot) {
      out.new_collisions.push_back(wc);
    }
  }
  return out;
}

ReleaseInfo PlanningService::release(const Actor& caller, YearMonth month, std::optional<int> expected_version) {
  require_planner(caller);
  nlohmann::json p{{"month", month}, {"released_on", date_of(clock_())}};
  if (expected_version) p["expected_version"] = *expected_version;
  const Committed c = commit(caller, EventKind::ScheduleReleased, std::move(p));
  return *c.state->cycle(month).release;
}

SwapProposal PlanningService::propose_swap(const Actor& caller, YearMonth month, const std::string& counterpart,
                                           const ShiftSlot& give, const ShiftSlot& take) {
  const Committed c = commit(caller, EventKind::SwapProposed,
                             {{"month", month}, {"counterpart", counterpart}, {"give", give}, {"take", take}});
  return *c.state->cycle(month).find_swap(c.event.payload.at("swap_id").get<std::string>());
}

SwapProposal PlanningService::accept_swap(const Actor& caller, const std::string& swap_id) {
  const Committed c = commit(caller, EventKind::SwapAccepted, {{"swap_id", swap_id}});
  return *c.state->cycle(field<YearMonth>(c.event.payload, "month")).find_swap(swap_id);
}

SwapProposal PlanningService::reject_swap(const Actor& caller, const std::string& swap_id) {
  const Committed c = commit(caller, EventKind::SwapRejected, {{"swap_id", swap_id}});
  return *c.state->cycle(field<YearMonth>(c.event.payload, "month")).find_swap(swap_id);
}

StandInEvent PlanningService::record_stand_in(const Actor& caller, YearMonth month, const std::string& absent_worker,
                                              const std::string& volunteer, const ShiftSlot& slot) {
  if (!caller.is_planner() && caller.id != volunteer) {
    throw PlanningError(ErrorCode::Forbidden, "only the volunteer or a planner records a stand-in");
  }
  const Committed c = commit(caller, EventKind::StandInRecorded,
                             {{"month", month},
                              {"absent_worker", absent_worker},
                              {"volunteer", volunteer},
                              {"date", slot.date},
                              {"shift", to_string(slot.shift)}});
  return c.state->cycle(month).stand_ins.back();
}

int PlanningService::give_kudos(const Actor& caller, const std::string& worker_id) {
  const Committed c = commit(caller, EventKind::KudosGiven, {{"worker_id", worker_id}});
  return c.state->kudos.at(worker_id);
}

Phase PlanningService::advance_phase(const Actor& caller, YearMonth month) {
  require_planner(caller);
  const Committed c = commit(caller, EventKind::PhaseAdvanced, {{"month", month}});
  return c.state->cycle(month).phase;
}

}  // namespace selfsched
