#include "selfsched/workflow.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <set>
#include <utility>

#include "selfsched/errors.hpp"

namespace selfsched {

namespace {

template <class E, std::size_t N>
E parse_enum(std::string_view text, const std::array<E, N>& values, const char* what) {
  for (E v : values) {
    if (to_string(v) == text) return v;
  }
  throw PlanningError(ErrorCode::InvalidField, std::string("unknown ") + what + " '" + std::string(text) + "'");
}

std::string numbered(const std::string& prefix, YearMonth month, std::size_t n) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%03zu", n);
  return prefix + "-" + month.str() + "-" + buf;
}

void require_phase(const PlanningCycle& cycle, Phase phase) {
  if (cycle.phase != phase) {
    throw PlanningError(ErrorCode::PhaseClosed,
                        "cycle " + cycle.month.str() + " is in phase " + std::string(to_string(cycle.phase)),
                        {{"phase", to_string(cycle.phase)}});
  }
}

void check_calendar_rules(const PlanningCycle& cycle, const Worker& worker, Date date, WishScope scope) {
  require_phase(cycle, Phase::preparation);
  if (!cycle.month.contains(date)) {
    throw PlanningError(ErrorCode::DateOutsideCycle, date.iso() + " is not in " + cycle.month.str());
  }
  const WeekendStatus ws = weekend_status(worker, date);
  if (ws == WeekendStatus::free_weekend) {
    throw PlanningError(ErrorCode::FreeWeekend,
                        date.iso() + " falls on a free weekend of " + worker.id + "; wishes are only for work weekends");
  }
  if (ws == WeekendStatus::work_weekend && scope == WishScope::whole_day) {
    throw PlanningError(ErrorCode::WholeDayOnWeekend, "weekend wishes name a morning or an afternoon shift");
  }
  for (const Wish& w : cycle.wishes) {
    if (w.worker_id == worker.id && w.date == date && w.status != WishStatus::withdrawn &&
        scopes_overlap(w.scope, scope)) {
      throw PlanningError(ErrorCode::DuplicateWish, worker.id + " already has wish " + w.id + " on " + date.iso(),
                          {{"wish_id", w.id}});
    }
  }
}

Wish& record_wish(PlanningCycle& cycle, const Worker& worker, Date date, WishScope scope, bool priority,
                  WishOrigin origin) {
  Wish w;
  w.id = numbered("wish", cycle.month, cycle.wishes.size() + 1);
  w.worker_id = worker.id;
  w.date = date;
  w.scope = scope;
  w.priority = priority;
  w.origin = origin;
  cycle.wishes.push_back(std::move(w));
  return cycle.wishes.back();
}

SwapProposal& swap_ref(PlanningCycle& cycle, const std::string& id) {
  for (SwapProposal& s : cycle.swaps) {
    if (s.id == id) return s;
  }
  throw PlanningError(ErrorCode::UnknownSwap, "no swap " + id);
}

ScheduleDraft& running_schedule(PlanningCycle& cycle) {
  require_phase(cycle, Phase::running);
  if (!cycle.schedule) throw PlanningError(ErrorCode::NoDraft, "cycle " + cycle.month.str() + " has no schedule");
  return *cycle.schedule;
}

nlohmann::json violations_json(const std::vector<Violation>& vs) {
  nlohmann::json out = nlohmann::json::array();
  for (const Violation& v : vs) {
    nlohmann::json j{{"kind", to_string(v.kind)}, {"worker_id", v.worker_id}, {"detail", v.detail}};
    if (v.slot) j["slot"] = v.slot->str();
    out.push_back(std::move(j));
  }
  return out;
}

std::string kinds_text(const std::vector<Violation>& vs) {
  std::string out;
  for (const Violation& v : vs) {
    const std::string k(to_string(v.kind));
    if (out.find(k) != std::string::npos) continue;
    if (!out.empty()) out += ", ";
    out += k;
  }
  return out;
}

/// Any swap whose two assignments no longer hold can never be accepted.
void invalidate_stale_swaps(PlanningCycle& cycle) {
  for (SwapProposal& s : cycle.swaps) {
    if (s.state != SwapState::proposed) continue;
    if (!cycle.schedule->is_assigned(s.proposer, s.proposer_slot) ||
        !cycle.schedule->is_assigned(s.counterpart, s.counterpart_slot)) {
      s.state = SwapState::invalidated;
    }
  }
}

}  // namespace

std::string_view to_string(Phase p) {
  switch (p) {
    case Phase::preparation: return "preparation";
    case Phase::running: return "running";
    case Phase::retrospective: return "retrospective";
    case Phase::closed: return "closed";
  }
  return "preparation";
}

std::string_view to_string(SwapState s) {
  switch (s) {
    case SwapState::proposed: return "proposed";
    case SwapState::accepted: return "accepted";
    case SwapState::rejected: return "rejected";
    case SwapState::invalidated: return "invalidated";
  }
  return "proposed";
}

Phase parse_phase(std::string_view text) {
  return parse_enum(text, std::array{Phase::preparation, Phase::running, Phase::retrospective, Phase::closed},
                    "phase");
}

SwapState parse_swap_state(std::string_view text) {
  return parse_enum(
      text, std::array{SwapState::proposed, SwapState::accepted, SwapState::rejected, SwapState::invalidated},
      "swap state");
}

const Wish* PlanningCycle::find_wish(std::string_view id) const {
  auto it = std::find_if(wishes.begin(), wishes.end(), [&](const Wish& w) { return w.id == id; });
  return it == wishes.end() ? nullptr : &*it;
}

Wish* PlanningCycle::find_wish(std::string_view id) {
  return const_cast<Wish*>(std::as_const(*this).find_wish(id));
}

const SwapProposal* PlanningCycle::find_swap(std::string_view id) const {
  auto it = std::find_if(swaps.begin(), swaps.end(), [&](const SwapProposal& s) { return s.id == id; });
  return it == swaps.end() ? nullptr : &*it;
}

PlanningWindow PlanningCycle::window(const SystemConfig& config) const {
  return PlanningWindow::of(month_grid(month, config.holidays));
}

int PlanningCycle::quota_used(const std::string& worker_id) const {
  return static_cast<int>(std::count_if(wishes.begin(), wishes.end(), [&](const Wish& w) {
    return w.worker_id == worker_id && w.origin == WishOrigin::worker && w.is_pending();
  }));
}

PlanningCycle& open_cycle(CycleMap& cycles, YearMonth month, const SystemConfig& config, std::optional<int> quota) {
  if (cycles.contains(month)) {
    throw PlanningError(ErrorCode::CycleExists, "cycle " + month.str() + " is already open");
  }
  const int q = quota.value_or(config.wish_quota);
  if (q < 1) throw PlanningError(ErrorCode::InvalidField, "quota must be >= 1");
  PlanningCycle c;
  c.month = month;
  c.quota = q;
  c.release_date = month.first_day().plus_days(-config.release_lead_days);
  return cycles.emplace(month, std::move(c)).first->second;
}

const Wish& submit_wish(PlanningCycle& cycle, const Worker& worker, Date date, WishScope scope, bool priority,
                        const SystemConfig& config) {
  check_calendar_rules(cycle, worker, date, scope);
  const int used = cycle.quota_used(worker.id);
  if (used >= cycle.quota) {
    throw PlanningError(ErrorCode::QuotaExceeded,
                        worker.id + " has used all " + std::to_string(cycle.quota) + " wishes for " + cycle.month.str(),
                        {{"quota", cycle.quota}, {"used", used}, {"remaining", 0}});
  }
  if (priority) {
    if (!config.priority_enabled) throw PlanningError(ErrorCode::PriorityDisabled, "priority wishes are disabled");
    for (const Wish& w : cycle.wishes) {
      if (w.worker_id == worker.id && w.priority && w.is_pending()) {
        throw PlanningError(ErrorCode::PriorityTaken, worker.id + " already marked " + w.id + " as priority",
                            {{"wish_id", w.id}});
      }
    }
  }
  return record_wish(cycle, worker, date, scope, priority, WishOrigin::worker);
}

const Wish& planner_enter_wish(PlanningCycle& cycle, const Actor& caller, const Worker& worker, Date date,
                               WishScope scope, const SystemConfig&) {
  if (!caller.is_planner()) throw PlanningError(ErrorCode::Forbidden, "only planners enter wishes for others");
  check_calendar_rules(cycle, worker, date, scope);
  return record_wish(cycle, worker, date, scope, false, WishOrigin::planner);
}

const Wish& withdraw_wish(PlanningCycle& cycle, const std::string& wish_id, const Actor& caller) {
  Wish* w = cycle.find_wish(wish_id);
  if (!w) throw PlanningError(ErrorCode::UnknownWish, "no wish " + wish_id);
  if (w->worker_id != caller.id && !caller.is_planner()) {
    throw PlanningError(ErrorCode::NotOwner, wish_id + " belongs to another worker");
  }
  if (w->status == WishStatus::withdrawn) throw PlanningError(ErrorCode::AlreadyWithdrawn, wish_id + " is withdrawn");
  if (!can_transition(w->status, WishStatus::withdrawn)) {
    throw PlanningError(ErrorCode::InvalidTransition,
                        wish_id + " is " + std::string(to_string(w->status)) + " and can no longer be withdrawn");
  }
  require_phase(cycle, Phase::preparation);
  w->status = WishStatus::withdrawn;
  return *w;
}

void apply_detection(PlanningCycle& cycle, DetectionResult result) {
  std::set<std::string> involved;
  for (const Conflict& c : result.conflicts) involved.insert(c.involved_wishes.begin(), c.involved_wishes.end());
  for (Wish& w : cycle.wishes) {
    if (!w.is_pending()) continue;
    w.status = involved.contains(w.id) ? WishStatus::in_conflict : WishStatus::active;
  }
  cycle.conflicts = std::move(result.conflicts);
  cycle.uncovered = std::move(result.uncovered);
}

void redetect(PlanningCycle& cycle, const Roster& roster, const RuleSet& rules) {
  apply_detection(cycle, detect_conflicts(cycle.window(rules.config), roster, cycle.wishes, rules));
}

const SwapProposal& propose_swap(PlanningCycle& cycle, const Actor& proposer, const std::string& counterpart,
                                 const ShiftSlot& give, const ShiftSlot& take) {
  ScheduleDraft& schedule = running_schedule(cycle);
  if (proposer.id == counterpart) throw PlanningError(ErrorCode::SelfSwap, "cannot swap with oneself");
  if (give == take) throw PlanningError(ErrorCode::InvalidField, "a swap exchanges two different slots");
  if (!schedule.is_assigned(proposer.id, give)) {
    throw PlanningError(ErrorCode::NotAssigned, proposer.id + " does not work " + give.str());
  }
  if (!schedule.is_assigned(counterpart, take)) {
    throw PlanningError(ErrorCode::NotAssigned, counterpart + " does not work " + take.str());
  }
  if (schedule.is_assigned(proposer.id, take) || schedule.is_assigned(counterpart, give)) {
    throw PlanningError(ErrorCode::InvalidField, "both parties already work one of the slots");
  }
  SwapProposal s{numbered("swap", cycle.month, cycle.swaps.size() + 1), proposer.id, counterpart, give, take,
                 SwapState::proposed};
  cycle.swaps.push_back(std::move(s));
  return cycle.swaps.back();
}

const SwapProposal& accept_swap(PlanningCycle& cycle, const std::string& swap_id, const Actor& caller,
                                const Roster& roster, const RuleSet& rules) {
  ScheduleDraft& schedule = running_schedule(cycle);
  SwapProposal& s = swap_ref(cycle, swap_id);
  if (caller.id != s.counterpart) throw PlanningError(ErrorCode::Forbidden, "only " + s.counterpart + " can accept");
  if (s.state != SwapState::proposed) {
    throw PlanningError(ErrorCode::InvalidTransition, swap_id + " is " + std::string(to_string(s.state)));
  }
  if (!schedule.is_assigned(s.proposer, s.proposer_slot) || !schedule.is_assigned(s.counterpart, s.counterpart_slot)) {
    throw PlanningError(ErrorCode::NotAssigned, "the assignments of " + swap_id + " changed since the proposal");
  }
  const PlanningWindow window = cycle.window(rules.config);
  ScheduleDraft after = schedule;
  after.unassign(s.proposer_slot, s.proposer);
  after.unassign(s.counterpart_slot, s.counterpart);
  after.assign(s.counterpart_slot, s.proposer, Provenance::swap);
  after.assign(s.proposer_slot, s.counterpart, Provenance::swap);
  const auto fresh = new_violations(validate_schedule(schedule, window, roster, cycle.wishes, rules),
                                    validate_schedule(after, window, roster, cycle.wishes, rules));
  if (!fresh.empty()) {
    throw PlanningError(ErrorCode::ValidationFailed, "swap " + swap_id + " would cause " + kinds_text(fresh),
                        {{"hard_violations", violations_json(fresh)}});
  }
  schedule = std::move(after);
  s.state = SwapState::accepted;
  invalidate_stale_swaps(cycle);
  return s;
}

const SwapProposal& reject_swap(PlanningCycle& cycle, const std::string& swap_id, const Actor& caller) {
  SwapProposal& s = swap_ref(cycle, swap_id);
  if (caller.id != s.counterpart && caller.id != s.proposer) {
    throw PlanningError(ErrorCode::Forbidden, "only the two parties can decline " + swap_id);
  }
  if (s.state != SwapState::proposed) {
    throw PlanningError(ErrorCode::InvalidTransition, swap_id + " is " + std::string(to_string(s.state)));
  }
  s.state = SwapState::rejected;
  return s;
}

const StandInEvent& record_stand_in(PlanningCycle& cycle, const std::string& absent_worker,
                                    const std::string& volunteer, const ShiftSlot& slot, const Roster& roster,
                                    const RuleSet& rules, std::string timestamp) {
  ScheduleDraft& schedule = running_schedule(cycle);
  if (!schedule.is_assigned(absent_worker, slot)) {
    throw PlanningError(ErrorCode::NotAssigned, absent_worker + " does not work " + slot.str());
  }
  if (volunteer == absent_worker || !roster.find(volunteer)) {
    throw PlanningError(ErrorCode::VolunteerUnavailable, "no eligible volunteer " + volunteer);
  }
  if (schedule.is_assigned(volunteer, slot)) {
    throw PlanningError(ErrorCode::VolunteerUnavailable, volunteer + " already works " + slot.str());
  }
  const PlanningWindow window = cycle.window(rules.config);
  ScheduleDraft after = schedule;
  after.unassign(slot, absent_worker);
  after.assign(slot, volunteer, Provenance::stand_in);
  const auto fresh = new_violations(validate_schedule(schedule, window, roster, cycle.wishes, rules),
                                    validate_schedule(after, window, roster, cycle.wishes, rules));
  if (!fresh.empty()) {
    throw PlanningError(ErrorCode::VolunteerUnavailable,
                        volunteer + " cannot take " + slot.str() + ": " + kinds_text(fresh),
                        {{"hard_violations", violations_json(fresh)}});
  }
  schedule = std::move(after);
  invalidate_stale_swaps(cycle);
  cycle.stand_ins.push_back({absent_worker, volunteer, slot, std::move(timestamp)});
  return cycle.stand_ins.back();
}

HoursStatement hours_ledger(const PlanningCycle& cycle, const Worker& worker, const SystemConfig& config) {
  if (!cycle.schedule) throw PlanningError(ErrorCode::NoDraft, "cycle " + cycle.month.str() + " is not released yet");
  HoursStatement h;
  h.worker_id = worker.id;
  h.month = cycle.month;
  h.target_hours = target_hours(worker, cycle.month.days_in_month());
  for (const ShiftSlot& s : cycle.schedule->slots_of(worker.id)) {
    h.assigned_hours += config.times(s.shift).hours();
    ++h.shifts;
  }
  h.delta = h.assigned_hours - h.target_hours;
  return h;
}

void advance_phase(PlanningCycle& cycle) {
  switch (cycle.phase) {
    case Phase::preparation:
      throw PlanningError(ErrorCode::InvalidTransition, "a cycle leaves preparation only by release");
    case Phase::running: cycle.phase = Phase::retrospective; return;
    case Phase::retrospective: cycle.phase = Phase::closed; return;
    case Phase::closed: throw PlanningError(ErrorCode::InvalidTransition, "cycle is already closed");
  }
}

const ScheduleDraft* current_schedule(const PlanningCycle& cycle) {
  if (cycle.schedule) return &*cycle.schedule;
  if (cycle.draft) return &*cycle.draft;
  return nullptr;
}

}  // namespace selfsched
