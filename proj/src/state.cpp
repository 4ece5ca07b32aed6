#include "selfsched/state.hpp"

#include "selfsched/codec.hpp"
#include "selfsched/errors.hpp"
#include "selfsched/finalizer.hpp"

namespace selfsched {

namespace {

std::optional<int> optional_int(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return field<int>(j, key);
}

Actor actor_of(const Event& e) {
  return {e.actor, parse_role(field_or<std::string>(e.payload, "actor_role", "worker"))};
}

/// Records a computed result in the payload, or checks it against the one
/// already recorded.
void settle(nlohmann::json& payload, const char* key, const nlohmann::json& value) {
  if (!payload.contains(key)) {
    payload[key] = value;
    return;
  }
  if (payload[key] != value) {
    throw PlanningError(ErrorCode::CorruptLog, std::string("recorded ") + key + " " + payload[key].dump() +
                                                   " differs from recomputed " + value.dump());
  }
}

void redetect_open(SystemState& state) {
  for (auto& [month, cycle] : state.cycles) {
    if (cycle.phase == Phase::preparation) redetect(cycle, state.roster, state.rules_for(month));
  }
}

nlohmann::json conflict_ids(const PlanningCycle& c) {
  nlohmann::json ids = nlohmann::json::array();
  for (const Conflict& x : c.conflicts) ids.push_back(x.id);
  return ids;
}

PlanningCycle& cycle_of_swap(SystemState& state, const std::string& swap_id) {
  for (auto& [month, cycle] : state.cycles) {
    if (cycle.find_swap(swap_id)) return cycle;
  }
  throw PlanningError(ErrorCode::UnknownSwap, "no swap " + swap_id);
}

}  // namespace

const PlanningCycle& SystemState::cycle(YearMonth month) const {
  auto it = cycles.find(month);
  if (it == cycles.end()) throw PlanningError(ErrorCode::UnknownCycle, "no cycle for " + month.str());
  return it->second;
}

PlanningCycle& SystemState::cycle(YearMonth month) {
  return const_cast<PlanningCycle&>(std::as_const(*this).cycle(month));
}

RuleSet SystemState::rules_for(YearMonth month) const {
  return RuleSet::from(config, prior_ledger(cycles, month, config));
}

long SystemState::revision_of(YearMonth month) const {
  auto it = revision.find(month);
  return it == revision.end() ? 0 : it->second;
}

std::optional<YearMonth> event_month(const Event& event) {
  if (event.payload.contains("month")) return field<YearMonth>(event.payload, "month");
  return std::nullopt;
}

void apply_event(SystemState& state, Event& event) {
  if (event.seq != state.last_seq + 1) {
    throw PlanningError(ErrorCode::CorruptLog, "event seq " + std::to_string(event.seq) + " follows " +
                                                   std::to_string(state.last_seq));
  }
  nlohmann::json& p = event.payload;
  const Actor actor = actor_of(event);
  const std::optional<YearMonth> month = event_month(event);

  switch (event.kind) {
    case EventKind::RosterImported: {
      state.roster = build_roster(field<std::vector<Worker>>(p, "workers"));
      redetect_open(state);
      for (auto& [m, c] : state.cycles) state.revision[m] = event.seq;
      break;
    }
    case EventKind::CycleOpened: {
      PlanningCycle& c = open_cycle(state.cycles, *month, state.config, optional_int(p, "quota"));
      settle(p, "quota", c.quota);
      settle(p, "release_date", c.release_date);
      break;
    }
    case EventKind::WishSubmitted:
    case EventKind::PlannerWishEntered: {
      PlanningCycle& c = state.cycle(*month);
      const Worker& worker = state.roster.at(field<std::string>(p, "worker_id"));
      const Date date = field<Date>(p, "date");
      const WishScope scope = parse_wish_scope(field<std::string>(p, "scope"));
      const Wish& w = event.kind == EventKind::WishSubmitted
                          ? submit_wish(c, worker, date, scope, field_or<bool>(p, "priority", false), state.config)
                          : planner_enter_wish(c, actor, worker, date, scope, state.config);
      settle(p, "wish_id", w.id);
      redetect(c, state.roster, state.rules_for(*month));
      break;
    }
    case EventKind::WishWithdrawn: {
      PlanningCycle& c = state.cycle(*month);
      const auto ids = field<std::vector<std::string>>(p, "wish_ids");
      if (ids.empty()) throw PlanningError(ErrorCode::InvalidField, "nothing to withdraw");
      for (const std::string& id : ids) withdraw_wish(c, id, actor);
      redetect(c, state.roster, state.rules_for(*month));
      break;
    }
    case EventKind::ConflictsRecomputed: {
      PlanningCycle& c = state.cycle(*month);
      if (c.phase != Phase::preparation) {
        throw PlanningError(ErrorCode::PhaseClosed, "conflicts are only computed during preparation");
      }
      redetect(c, state.roster, state.rules_for(*month));
      settle(p, "conflicts", conflict_ids(c));
      break;
    }
    case EventKind::DraftCreated: {
      PlanningCycle& c = state.cycle(*month);
      const long based_on = field<long>(p, "based_on_revision");
      if (based_on != state.revision_of(*month)) {
        throw PlanningError(ErrorCode::StaleSnapshot,
                            "draft was computed at revision " + std::to_string(based_on) + ", cycle is at " +
                                std::to_string(state.revision_of(*month)));
      }
      install_draft(c, field<ScheduleDraft>(p, "draft"));
      settle(p, "draft_version", c.draft_version);
      break;
    }
    case EventKind::OverrideApplied: {
      PlanningCycle& c = state.cycle(*month);
      const OverrideOutcome out =
          apply_override(c, actor, field<OverrideChange>(p, "change"), state.roster, state.rules_for(*month));
      nlohmann::json collided = nlohmann::json::array();
      for (const WishCollision& wc : out.new_collisions) collided.push_back(wc.wish_id);
      settle(p, "collided_wishes", collided);
      break;
    }
    case EventKind::ScheduleReleased: {
      PlanningCycle& c = state.cycle(*month);
      const ReleaseInfo& info = release(c, actor, optional_int(p, "expected_version"),
                                        state.roster, state.rules_for(*month), field<Date>(p, "released_on"));
      settle(p, "late", info.late);
      break;
    }
    case EventKind::SwapProposed: {
      PlanningCycle& c = state.cycle(*month);
      const SwapProposal& s = propose_swap(c, actor, field<std::string>(p, "counterpart"),
                                           field<ShiftSlot>(p, "give"), field<ShiftSlot>(p, "take"));
      settle(p, "swap_id", s.id);
      break;
    }
    case EventKind::SwapAccepted:
    case EventKind::SwapRejected: {
      const std::string id = field<std::string>(p, "swap_id");
      PlanningCycle& c = cycle_of_swap(state, id);
      settle(p, "month", c.month);
      if (event.kind == EventKind::SwapAccepted) {
        accept_swap(c, id, actor, state.roster, state.rules_for(c.month));
      } else {
        reject_swap(c, id, actor);
      }
      state.revision[c.month] = event.seq;
      break;
    }
    case EventKind::StandInRecorded: {
      PlanningCycle& c = state.cycle(*month);
      const std::string volunteer = field<std::string>(p, "volunteer");
      record_stand_in(c, field<std::string>(p, "absent_worker"), volunteer, p.get<ShiftSlot>(), state.roster,
                      state.rules_for(*month), event.timestamp);
      settle(p, "kudos", state.kudos[volunteer] + 1);
      ++state.kudos[volunteer];
      break;
    }
    case EventKind::KudosGiven: {
      const std::string to = field<std::string>(p, "worker_id");
      state.roster.at(to);
      if (to == event.actor) throw PlanningError(ErrorCode::InvalidField, "kudos go to a colleague");
      settle(p, "kudos", state.kudos[to] + 1);
      ++state.kudos[to];
      break;
    }
    case EventKind::PhaseAdvanced: {
      PlanningCycle& c = state.cycle(*month);
      if (!actor.is_planner()) throw PlanningError(ErrorCode::Forbidden, "phase changes are planner-only");
      advance_phase(c);
      settle(p, "phase", to_string(c.phase));
      break;
    }
  }
  if (month && state.cycles.contains(*month)) state.revision[*month] = event.seq;
  state.last_seq = event.seq;
}

SystemState replay(const SystemConfig& config, std::span<const Event> events) {
  SystemState state;
  state.config = config;
  for (const Event& original : events) {
    Event e = original;
    try {
      apply_event(state, e);
    } catch (const PlanningError& err) {
      throw PlanningError(ErrorCode::CorruptLog,
                          "event " + std::to_string(original.seq) + " (" + std::string(to_string(original.kind)) +
                              ") does not apply: " + err.what(),
                          {{"seq", original.seq}, {"cause", to_string(err.code())}});
    }
    if (e.payload != original.payload) {
      throw PlanningError(ErrorCode::CorruptLog,
                          "event " + std::to_string(original.seq) + " lacks recorded results",
                          {{"seq", original.seq}});
    }
  }
  return state;
}

nlohmann::json state_to_json(const SystemState& state) {
  nlohmann::json cycles = nlohmann::json::array();
  for (const auto& [m, c] : state.cycles) cycles.push_back(c);
  nlohmann::json revisions = nlohmann::json::object();
  for (const auto& [m, r] : state.revision) revisions[m.str()] = r;
  return {{"config", config_to_json(state.config)},
          {"roster", state.roster.workers()},
          {"cycles", cycles},
          {"kudos", state.kudos},
          {"last_seq", state.last_seq},
          {"revision", revisions}};
}

}  // namespace selfsched
