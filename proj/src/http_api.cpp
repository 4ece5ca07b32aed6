#include "selfsched/http_api.hpp"

#include <algorithm>
#include <sstream>

#include <httplib.h>

#include "selfsched/codec.hpp"
#include "selfsched/export.hpp"

namespace selfsched {

namespace {

using nlohmann::json;

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> out;
  std::string part;
  std::istringstream in(path);
  while (std::getline(in, part, '/')) {
    if (!part.empty()) out.push_back(part);
  }
  return out;
}

ApiResponse json_response(int status, const json& body) {
  ApiResponse r;
  r.status = status;
  r.body = body.dump();
  return r;
}

ApiResponse error_response(int status, std::string_view code, const std::string& message,
                           const json& detail = nullptr) {
  return json_response(status, {{"error", {{"code", code}, {"message", message}, {"detail", detail}}}});
}

json parse_body(const ApiRequest& req) {
  if (req.body.empty()) return json::object();
  try {
    json j = json::parse(req.body);
    if (!j.is_object()) throw PlanningError(ErrorCode::ParseError, "request body must be a JSON object");
    return j;
  } catch (const json::parse_error& e) {
    throw PlanningError(ErrorCode::ParseError, std::string("malformed JSON body: ") + e.what());
  }
}

std::optional<std::string> query_value(const ApiRequest& req, const std::string& key) {
  auto it = req.query.find(key);
  if (it == req.query.end() || it->second.empty()) return std::nullopt;
  return it->second;
}

std::optional<YearMonth> query_month(const ApiRequest& req, const std::string& key) {
  auto v = query_value(req, key);
  if (!v) return std::nullopt;
  return YearMonth::parse(*v);
}

YearMonth required_month(const ApiRequest& req) {
  auto m = query_month(req, "month");
  if (!m) throw PlanningError(ErrorCode::InvalidField, "query parameter 'month' is required");
  return *m;
}

std::optional<long> optional_long(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return field<long>(j, key);
}

json collision_json(const WishCollision& c) {
  return {{"wish_id", c.wish_id}, {"worker_id", c.worker_id}, {"date", c.slot.date}, {"shift", to_string(c.slot.shift)}};
}

/// The published team schedule without the planner's bookkeeping.
json public_schedule(const ScheduleDraft& schedule) {
  json j = schedule;
  j.erase("wish_collisions");
  j.erase("notify");
  return j;
}

json visible_conflicts(const Actor& caller, const PlanningCycle& cycle, const Roster& roster) {
  return conflicts_visible_to(caller, cycle.conflicts, cycle.wishes, roster);
}

json worker_cycle_view(const Actor& caller, const PlanningCycle& cycle, const Roster& roster) {
  json wishes = json::array();
  for (const Wish& w : cycle.wishes) {
    if (w.worker_id == caller.id) wishes.push_back(w);
  }
  json swaps = json::array();
  for (const SwapProposal& s : cycle.swaps) {
    if (s.proposer == caller.id || s.counterpart == caller.id) swaps.push_back(s);
  }
  json stand_ins = json::array();
  for (const StandInEvent& s : cycle.stand_ins) {
    if (s.absent_worker == caller.id || s.volunteer == caller.id) stand_ins.push_back(s);
  }
  return {{"month", cycle.month},
          {"phase", to_string(cycle.phase)},
          {"quota", cycle.quota},
          {"quota_remaining", std::max(0, cycle.quota - cycle.quota_used(caller.id))},
          {"release_date", cycle.release_date},
          {"wishes", wishes},
          {"conflicts", visible_conflicts(caller, cycle, roster)},
          {"swaps", swaps},
          {"stand_ins", stand_ins},
          {"schedule", cycle.schedule ? public_schedule(*cycle.schedule) : json(nullptr)}};
}

std::string busy_band(int wish_count, int spare) {
  if (wish_count == 0) return "none";
  if (wish_count * 2 <= spare) return "low";
  if (wish_count <= spare) return "medium";
  return "high";
}

std::string ics_stamp(std::chrono::system_clock::time_point t) {
  std::string s = iso_timestamp(t);
  s.erase(std::remove_if(s.begin(), s.end(), [](char c) { return c == '-' || c == ':'; }), s.end());
  return s;
}

YearMonth month_of_wish(const SystemState& state, const std::string& wish_id) {
  for (const auto& [month, cycle] : state.cycles) {
    if (cycle.find_wish(wish_id)) return month;
  }
  throw PlanningError(ErrorCode::UnknownWish, "no wish " + wish_id);
}

}  // namespace

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::Unauthenticated: return 401;
    case ErrorCode::Forbidden:
    case ErrorCode::NotOwner: return 403;
    case ErrorCode::UnknownWorker:
    case ErrorCode::UnknownCycle:
    case ErrorCode::UnknownWish:
    case ErrorCode::UnknownSwap:
    case ErrorCode::UnknownConflict:
    case ErrorCode::NotFound: return 404;
    case ErrorCode::CycleExists:
    case ErrorCode::DuplicateWorkerId:
    case ErrorCode::PhaseClosed:
    case ErrorCode::AlreadyWithdrawn:
    case ErrorCode::InvalidTransition:
    case ErrorCode::UnresolvedConflicts:
    case ErrorCode::NoDraft:
    case ErrorCode::StaleSnapshot: return 409;
    case ErrorCode::InvalidDate:
    case ErrorCode::InvalidMonth:
    case ErrorCode::ParseError:
    case ErrorCode::InvalidField:
    case ErrorCode::InvalidConfig: return 400;
    case ErrorCode::CorruptLog:
    case ErrorCode::IoError: return 500;
    default: return 422;
  }
}

ApiRouter::ApiRouter(PlanningService& service, std::vector<UserToken> users) : service_(service) {
  for (UserToken& u : users) tokens_[u.token] = u.actor;
  auto add = [this](std::string method, const std::string& pattern, Handler h) {
    routes_.push_back({std::move(method), split_path(pattern), h});
  };
  add("POST", "/cycles", &ApiRouter::open_cycle);
  add("GET", "/cycles/{month}", &ApiRouter::get_cycle);
  add("POST", "/cycles/{month}/wishes", &ApiRouter::post_wish);
  add("DELETE", "/wishes/{id}", &ApiRouter::delete_wish);
  add("GET", "/cycles/{month}/calendar", &ApiRouter::calendar);
  add("GET", "/me/conflicts", &ApiRouter::my_conflicts);
  add("POST", "/conflicts/{id}/withdrawals", &ApiRouter::conflict_withdrawal);
  add("POST", "/cycles/{month}/detect", &ApiRouter::detect);
  add("POST", "/cycles/{month}/swaps", &ApiRouter::propose_swap);
  add("POST", "/swaps/{id}/accept", &ApiRouter::accept_swap);
  add("POST", "/swaps/{id}/reject", &ApiRouter::reject_swap);
  add("POST", "/cycles/{month}/stand-ins", &ApiRouter::stand_in);
  add("POST", "/cycles/{month}/autofill", &ApiRouter::autofill);
  add("POST", "/cycles/{month}/overrides", &ApiRouter::override_schedule);
  add("POST", "/cycles/{month}/release", &ApiRouter::release);
  add("POST", "/cycles/{month}/advance", &ApiRouter::advance);
  add("GET", "/cycles/{month}/schedule", &ApiRouter::schedule);
  add("GET", "/reports/usage", &ApiRouter::usage);
  add("GET", "/reports/fairness", &ApiRouter::fairness);
  add("GET", "/reports/reminders", &ApiRouter::reminders);
  add("GET", "/me/hours", &ApiRouter::my_hours);
  add("GET", "/me/calendar.ics", &ApiRouter::my_ics);
  add("POST", "/kudos", &ApiRouter::kudos);
  add("GET", "/wish-examples", &ApiRouter::wish_examples);
}

Actor ApiRouter::authenticate(const ApiRequest& request) const {
  const std::string prefix = "Bearer ";
  if (request.authorization.rfind(prefix, 0) != 0) {
    throw PlanningError(ErrorCode::Unauthenticated, "missing bearer token");
  }
  auto it = tokens_.find(request.authorization.substr(prefix.size()));
  if (it == tokens_.end()) throw PlanningError(ErrorCode::Unauthenticated, "unknown token");
  return it->second;
}

ApiResponse ApiRouter::handle(const ApiRequest& request) {
  try {
    const Actor caller = authenticate(request);
    const auto segments = split_path(request.path);
    bool path_matched = false;
    for (const Route& route : routes_) {
      if (route.segments.size() != segments.size()) continue;
      Params params;
      bool ok = true;
      for (std::size_t i = 0; i < segments.size() && ok; ++i) {
        const std::string& pat = route.segments[i];
        if (pat.size() > 1 && pat.front() == '{') {
          params.push_back(segments[i]);
        } else {
          ok = pat == segments[i];
        }
      }
      if (!ok) continue;
      path_matched = true;
      if (route.method != request.method) continue;
      return (this->*route.handler)(caller, params, request);
    }
    if (path_matched) return error_response(405, "NotFound", request.method + " not allowed on " + request.path);
    return error_response(404, "NotFound", "no route for " + request.path);
  } catch (const PlanningError& e) {
    return error_response(http_status(e.code()), to_string(e.code()), e.what(), e.detail());
  } catch (const json::exception& e) {
    return error_response(400, to_string(ErrorCode::InvalidField), e.what());
  } catch (const std::exception& e) {
    return error_response(500, "InternalError", e.what());
  }
}

ApiResponse ApiRouter::open_cycle(const Actor& caller, const Params&, const ApiRequest& req) {
  const json body = parse_body(req);
  const YearMonth month = field<YearMonth>(body, "month");
  std::optional<int> quota;
  if (body.contains("quota") && !body["quota"].is_null()) quota = field<int>(body, "quota");
  service_.open_cycle(caller, month, quota);
  auto state = service_.snapshot();
  return json_response(201, state->cycle(month));
}

ApiResponse ApiRouter::get_cycle(const Actor& caller, const Params& p, const ApiRequest&) {
  const YearMonth month = YearMonth::parse(p[0]);
  auto state = service_.snapshot();
  const PlanningCycle& cycle = state->cycle(month);
  if (caller.is_planner()) return json_response(200, cycle);
  return json_response(200, worker_cycle_view(caller, cycle, state->roster));
}

ApiResponse ApiRouter::post_wish(const Actor& caller, const Params& p, const ApiRequest& req) {
  const YearMonth month = YearMonth::parse(p[0]);
  const json body = parse_body(req);
  const Date date = field<Date>(body, "date");
  const WishScope scope = parse_wish_scope(field<std::string>(body, "scope"));
  const std::string worker_id = field_or<std::string>(body, "worker_id", caller.id);
  if (worker_id != caller.id) {
    return json_response(201, service_.planner_enter_wish(caller, month, worker_id, date, scope));
  }
  const bool priority = field_or<bool>(body, "priority", false);
  return json_response(201, service_.submit_wish(caller, month, date, scope, priority));
}

ApiResponse ApiRouter::delete_wish(const Actor& caller, const Params& p, const ApiRequest&) {
  const YearMonth month = month_of_wish(*service_.snapshot(), p[0]);
  service_.withdraw_wishes(caller, month, {p[0]});
  auto state = service_.snapshot();
  return json_response(200, *state->cycle(month).find_wish(p[0]));
}

ApiResponse ApiRouter::calendar(const Actor& caller, const Params& p, const ApiRequest&) {
  const YearMonth month = YearMonth::parse(p[0]);
  auto state = service_.snapshot();
  const PlanningCycle& cycle = state->cycle(month);
  const Worker* self = state->roster.find(caller.id);
  const auto conflicts = conflicts_visible_to(caller, cycle.conflicts, cycle.wishes, state->roster);

  const int needed = std::max(state->config.min_staff[0], state->config.min_staff[1]);
  const int spare = std::max(0, static_cast<int>(state->roster.size()) - needed);

  json days = json::array();
  for (const CalendarDay& day : month_grid(month, state->config.holidays).days) {
    int count = 0;
    json own = json::array();
    for (const Wish& w : cycle.wishes) {
      if (w.date != day.date || w.status == WishStatus::withdrawn) continue;
      ++count;
      if (w.worker_id == caller.id) {
        own.push_back({{"wish_id", w.id}, {"scope", to_string(w.scope)}, {"status", to_string(w.status)}});
      }
    }
    json conflict_ids = json::array();
    for (const ConflictView& v : conflicts) {
      const bool here = std::any_of(v.deficient_slots.begin(), v.deficient_slots.end(),
                                    [&](const DeficientSlot& d) { return d.slot.date == day.date; });
      if (here) conflict_ids.push_back(v.id);
    }
    json entry = {{"date", day.date},
                  {"is_weekend", day.is_weekend},
                  {"is_holiday", day.is_holiday},
                  {"wish_count", count},
                  {"busy", busy_band(count, spare)},
                  {"own_wishes", own},
                  {"conflict", !conflict_ids.empty()},
                  {"conflict_ids", conflict_ids}};
    if (self) {
      switch (weekend_status(*self, day.date)) {
        case WeekendStatus::work_weekend: entry["weekend"] = "work"; break;
        case WeekendStatus::free_weekend: entry["weekend"] = "free"; break;
        case WeekendStatus::weekday: entry["weekend"] = nullptr; break;
      }
    }
    days.push_back(std::move(entry));
  }
  return json_response(200, {{"month", month},
                             {"phase", to_string(cycle.phase)},
                             {"quota", cycle.quota},
                             {"quota_remaining", std::max(0, cycle.quota - cycle.quota_used(caller.id))},
                             {"release_date", cycle.release_date},
                             {"wish_examples", state->config.wish_examples},
                             {"days", days}});
}

ApiResponse ApiRouter::my_conflicts(const Actor& caller, const Params&, const ApiRequest& req) {
  auto state = service_.snapshot();
  const auto only = query_month(req, "month");
  json out = json::array();
  for (const auto& [month, cycle] : state->cycles) {
    if (only && month != *only) continue;
    for (const ConflictView& v : conflicts_visible_to(caller, cycle.conflicts, cycle.wishes, state->roster)) {
      json j = v;
      j["month"] = month;
      out.push_back(std::move(j));
    }
  }
  return json_response(200, out);
}

ApiResponse ApiRouter::conflict_withdrawal(const Actor& caller, const Params& p, const ApiRequest& req) {
  const json body = parse_body(req);
  const auto wish_ids = field_or<std::vector<std::string>>(body, "wish_ids", {});
  const Event e = service_.withdraw_from_conflict(caller, p[0], wish_ids);
  const YearMonth month = field<YearMonth>(e.payload, "month");
  auto state = service_.snapshot();
  return json_response(200, {{"seq", e.seq},
                             {"withdrawn", e.payload.at("wish_ids")},
                             {"conflicts", visible_conflicts(caller, state->cycle(month), state->roster)}});
}

ApiResponse ApiRouter::detect(const Actor& caller, const Params& p, const ApiRequest&) {
  const YearMonth month = YearMonth::parse(p[0]);
  service_.detect(caller, month);
  auto state = service_.snapshot();
  const PlanningCycle& cycle = state->cycle(month);
  return json_response(200, {{"conflicts", visible_conflicts(caller, cycle, state->roster)},
                             {"uncovered", cycle.uncovered}});
}

ApiResponse ApiRouter::propose_swap(const Actor& caller, const Params& p, const ApiRequest& req) {
  const YearMonth month = YearMonth::parse(p[0]);
  const json body = parse_body(req);
  return json_response(201, service_.propose_swap(caller, month, field<std::string>(body, "counterpart"),
                                                  field<ShiftSlot>(body, "give"), field<ShiftSlot>(body, "take")));
}

ApiResponse ApiRouter::accept_swap(const Actor& caller, const Params& p, const ApiRequest&) {
  return json_response(200, service_.accept_swap(caller, p[0]));
}

ApiResponse ApiRouter::reject_swap(const Actor& caller, const Params& p, const ApiRequest&) {
  return json_response(200, service_.reject_swap(caller, p[0]));
}

ApiResponse ApiRouter::stand_in(const Actor& caller, const Params& p, const ApiRequest& req) {
  const YearMonth month = YearMonth::parse(p[0]);
  const json body = parse_body(req);
  const std::string volunteer = field_or<std::string>(body, "volunteer", caller.id);
  const ShiftSlot slot = parse_slot(field<std::string>(body, "date"), field<std::string>(body, "shift"));
  json out = service_.record_stand_in(caller, month, field<std::string>(body, "absent_worker"), volunteer, slot);
  auto state = service_.snapshot();
  auto it = state->kudos.find(volunteer);
  out["kudos"] = it == state->kudos.end() ? 0 : it->second;
  return json_response(201, out);
}

ApiResponse ApiRouter::autofill(const Actor& caller, const Params& p, const ApiRequest& req) {
  const YearMonth month = YearMonth::parse(p[0]);
  const json body = parse_body(req);
  AutofillOptions options;
  options.pins = field_or<std::vector<Pin>>(body, "pins", {});
  options.node_budget = optional_long(body, "node_budget");
  options.acknowledge_conflicts = field_or<bool>(body, "acknowledge_conflicts", false);
  options.improve = field_or<bool>(body, "improve", true);
  AutofillResult result = service_.autofill(caller, month, options);
  if (const auto* report = std::get_if<InfeasibilityReport>(&result)) {
    const ErrorCode code = report->budget_exhausted ? ErrorCode::BudgetExhausted : ErrorCode::Infeasible;
    return error_response(http_status(code), to_string(code), "no legal schedule found", *report);
  }
  auto state = service_.snapshot();
  return json_response(200, {{"draft", std::get<ScheduleDraft>(result)},
                             {"draft_version", state->cycle(month).draft_version}});
}

ApiResponse ApiRouter::override_schedule(const Actor& caller, const Params& p, const ApiRequest& req) {
  const YearMonth month = YearMonth::parse(p[0]);
  const OverrideChange change = parse_body(req).get<OverrideChange>();
  const OverrideOutcome outcome = service_.apply_override(caller, month, change);
  json collisions = json::array();
  for (const WishCollision& c : outcome.new_collisions) collisions.push_back(collision_json(c));
  auto state = service_.snapshot();
  return json_response(200, {{"draft", outcome.draft},
                             {"new_collisions", collisions},
                             {"draft_version", state->cycle(month).draft_version}});
}

ApiResponse ApiRouter::release(const Actor& caller, const Params& p, const ApiRequest& req) {
  const YearMonth month = YearMonth::parse(p[0]);
  const json body = parse_body(req);
  std::optional<int> expected;
  if (body.contains("expected_version") && !body["expected_version"].is_null()) {
    expected = field<int>(body, "expected_version");
  }
  return json_response(200, service_.release(caller, month, expected));
}

ApiResponse ApiRouter::advance(const Actor& caller, const Params& p, const ApiRequest&) {
  const Phase phase = service_.advance_phase(caller, YearMonth::parse(p[0]));
  return json_response(200, {{"month", p[0]}, {"phase", to_string(phase)}});
}

ApiResponse ApiRouter::schedule(const Actor& caller, const Params& p, const ApiRequest& req) {
  const YearMonth month = YearMonth::parse(p[0]);
  auto state = service_.snapshot();
  const PlanningCycle& cycle = state->cycle(month);
  const ScheduleDraft* sched = cycle.schedule ? &*cycle.schedule : nullptr;
  if (!sched && caller.is_planner() && cycle.draft) sched = &*cycle.draft;
  if (!sched) throw PlanningError(ErrorCode::NoDraft, "no schedule for " + month.str());
  if (query_value(req, "format").value_or("json") == "csv") {
    ApiResponse r;
    r.content_type = "text/csv; charset=utf-8";
    r.body = schedule_matrix_csv(*sched, state->roster);
    return r;
  }
  if (caller.is_planner()) return json_response(200, *sched);
  return json_response(200, public_schedule(*sched));
}

ApiResponse ApiRouter::usage(const Actor& caller, const Params&, const ApiRequest& req) {
  require_planner(caller);
  StatsQuery query;
  query.from = query_month(req, "from");
  query.to = query_month(req, "to");
  if (auto ex = query_value(req, "exclude")) {
    std::istringstream in(*ex);
    std::string part;
    while (std::getline(in, part, ',')) {
      if (!part.empty()) query.exclude.insert(YearMonth::parse(part));
    }
  }
  const auto events = service_.events();
  return json_response(200, to_json_value(stats_report(events, query)));
}

ApiResponse ApiRouter::fairness(const Actor& caller, const Params&, const ApiRequest& req) {
  require_planner(caller);
  const auto from = query_month(req, "from");
  const auto to = query_month(req, "to");
  auto state = service_.snapshot();
  std::vector<ScheduleDraft> schedules;
  for (const auto& [month, cycle] : state->cycles) {
    if ((from && month < *from) || (to && month > *to) || !cycle.schedule) continue;
    schedules.push_back(*cycle.schedule);
  }
  return json_response(200, fairness_report(schedules, state->roster, state->config));
}

ApiResponse ApiRouter::reminders(const Actor& caller, const Params&, const ApiRequest& req) {
  require_planner(caller);
  const YearMonth month = required_month(req);
  auto state = service_.snapshot();
  return json_response(200, {{"month", month}, {"workers", wish_reminders(*state, month)}});
}

ApiResponse ApiRouter::my_hours(const Actor& caller, const Params&, const ApiRequest& req) {
  std::string worker_id = query_value(req, "worker_id").value_or(caller.id);
  if (worker_id != caller.id) require_planner(caller);
  auto state = service_.snapshot();
  const Worker& worker = state->roster.at(worker_id);
  if (auto month = query_month(req, "month")) {
    return json_response(200, hours_ledger(state->cycle(*month), worker, state->config));
  }
  json out = json::array();
  for (const auto& [month, cycle] : state->cycles) {
    if (cycle.schedule) out.push_back(hours_ledger(cycle, worker, state->config));
  }
  return json_response(200, out);
}

ApiResponse ApiRouter::my_ics(const Actor& caller, const Params&, const ApiRequest& req) {
  const YearMonth month = required_month(req);
  auto state = service_.snapshot();
  const PlanningCycle& cycle = state->cycle(month);
  if (!cycle.schedule) throw PlanningError(ErrorCode::NoDraft, month.str() + " is not released yet");
  ApiResponse r;
  r.content_type = "text/calendar; charset=utf-8";
  r.body = worker_icalendar(*cycle.schedule, state->roster.at(caller.id), state->config, ics_stamp(service_.now()));
  return r;
}

ApiResponse ApiRouter::kudos(const Actor& caller, const Params&, const ApiRequest& req) {
  const json body = parse_body(req);
  const std::string worker_id = field<std::string>(body, "worker_id");
  const int total = service_.give_kudos(caller, worker_id);
  return json_response(201, {{"worker_id", worker_id}, {"kudos", total}});
}

ApiResponse ApiRouter::wish_examples(const Actor&, const Params&, const ApiRequest&) {
  return json_response(200, service_.config().wish_examples);
}

HttpServer::HttpServer(ApiRouter& router) : router_(router), server_(std::make_unique<httplib::Server>()) {
  install();
}

HttpServer::~HttpServer() { stop(); }

void HttpServer::install() {
  auto dispatch = [this](const httplib::Request& req, httplib::Response& res) {
    ApiRequest api;
    api.method = req.method;
    api.path = req.path;
    for (const auto& [k, v] : req.params) api.query[k] = v;
    api.authorization = req.get_header_value("Authorization");
    api.body = req.body;
    const ApiResponse out = router_.handle(api);
    res.status = out.status;
    res.set_content(out.body, out.content_type);
  };
  const std::string any = R"(/.*)";
  server_->Get(any, dispatch);
  server_->Post(any, dispatch);
  server_->Delete(any, dispatch);
  server_->Put(any, dispatch);
  server_->Patch(any, dispatch);
}

int HttpServer::start(const std::string& host, int port) {
  int bound = port;
  if (port == 0) {
    bound = server_->bind_to_any_port(host);
    if (bound < 0) throw PlanningError(ErrorCode::IoError, "cannot bind " + host);
  } else if (!server_->bind_to_port(host, port)) {
    throw PlanningError(ErrorCode::IoError, "cannot bind " + host + ":" + std::to_string(port));
  }
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
  return bound;
}

void HttpServer::listen(const std::string& host, int port) {
  if (!server_->bind_to_port(host, port)) {
    throw PlanningError(ErrorCode::IoError, "cannot bind " + host + ":" + std::to_string(port));
  }
  server_->listen_after_bind();
}

void HttpServer::stop() {
  if (server_) server_->stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace selfsched
