#include "selfsched/codec.hpp"

namespace selfsched {

namespace {

std::string as_string(const json& j, const char* what) {
  if (!j.is_string()) throw PlanningError(ErrorCode::InvalidField, std::string(what) + " must be a string");
  return j.get<std::string>();
}

}  // namespace

void to_json(json& j, const Date& d) { j = d.iso(); }
void from_json(const json& j, Date& d) { d = Date::parse_iso(as_string(j, "date")); }
void to_json(json& j, const YearMonth& m) { j = m.str(); }
void from_json(const json& j, YearMonth& m) { m = YearMonth::parse(as_string(j, "month")); }

void to_json(json& j, const ShiftSlot& s) { j = json{{"date", s.date}, {"shift", to_string(s.shift)}}; }

void from_json(const json& j, ShiftSlot& s) {
  s = parse_slot(field<std::string>(j, "date"), field<std::string>(j, "shift"));
}

void to_json(json& j, const Worker& w) {
  json absences = json::array();
  for (const auto& [date, reason] : w.absences) absences.push_back({{"date", date}, {"reason", to_string(reason)}});
  j = json{{"worker_id", w.id},
           {"display_name", w.display_name},
           {"qualification", to_string(w.qualification)},
           {"is_leader", w.is_leader},
           {"contract_hours_per_week", w.contract_hours_per_week},
           {"weekend_parity_anchor", w.weekend_parity_anchor},
           {"max_consecutive_days", w.max_consecutive_days},
           {"shift_preference", to_string(w.shift_preference)},
           {"absences", absences}};
}

void from_json(const json& j, Worker& w) {
  w.id = field<std::string>(j, "worker_id");
  w.display_name = field_or<std::string>(j, "display_name", w.id);
  w.qualification = parse_qualification(field<std::string>(j, "qualification"));
  w.is_leader = field_or<bool>(j, "is_leader", false);
  w.contract_hours_per_week = field<double>(j, "contract_hours_per_week");
  w.weekend_parity_anchor = field<Date>(j, "weekend_parity_anchor");
  w.max_consecutive_days = field_or<int>(j, "max_consecutive_days", 5);
  w.shift_preference = parse_shift_preference(field_or<std::string>(j, "shift_preference", "none"));
  w.absences.clear();
  if (j.contains("absences")) {
    for (const json& a : j.at("absences")) {
      w.absences[field<Date>(a, "date")] = parse_absence_reason(field<std::string>(a, "reason"));
    }
  }
}

void to_json(json& j, const Wish& w) {
  j = json{{"wish_id", w.id},          {"worker_id", w.worker_id},
           {"date", w.date},           {"scope", to_string(w.scope)},
           {"status", to_string(w.status)}, {"priority", w.priority},
           {"origin", to_string(w.origin)}};
}

void from_json(const json& j, Wish& w) {
  w.id = field<std::string>(j, "wish_id");
  w.worker_id = field<std::string>(j, "worker_id");
  w.date = field<Date>(j, "date");
  w.scope = parse_wish_scope(field<std::string>(j, "scope"));
  w.status = parse_wish_status(field_or<std::string>(j, "status", "active"));
  w.priority = field_or<bool>(j, "priority", false);
  w.origin = parse_wish_origin(field_or<std::string>(j, "origin", "worker"));
}

void to_json(json& j, const ScheduleDraft& d) {
  json assignments = json::array();
  for (const auto& [slot, workers] : d.assignment()) {
    for (const std::string& w : workers) {
      assignments.push_back({{"date", slot.date},
                             {"shift", to_string(slot.shift)},
                             {"worker_id", w},
                             {"provenance", to_string(d.provenance(slot, w))}});
    }
  }
  json collisions = json::array();
  for (const WishCollision& c : d.wish_collisions()) {
    collisions.push_back({{"wish_id", c.wish_id}, {"worker_id", c.worker_id}, {"date", c.slot.date},
                          {"shift", to_string(c.slot.shift)}});
  }
  j = json{{"month", d.month()},
           {"status", to_string(d.status())},
           {"assignments", assignments},
           {"wish_collisions", collisions},
           {"notify", d.notify()}};
}

void from_json(const json& j, ScheduleDraft& d) {
  d = ScheduleDraft(field<YearMonth>(j, "month"));
  d.set_status(parse_draft_status(field_or<std::string>(j, "status", "draft")));
  for (const json& a : field_or<json>(j, "assignments", json::array())) {
    d.assign(a.get<ShiftSlot>(),
             field<std::string>(a, "worker_id"),
             parse_provenance(field_or<std::string>(a, "provenance", "autofill")));
  }
  for (const json& c : field_or<json>(j, "wish_collisions", json::array())) {
    d.add_wish_collision({field<std::string>(c, "wish_id"), field<std::string>(c, "worker_id"), c.get<ShiftSlot>()});
  }
  for (const std::string& w : field_or<std::vector<std::string>>(j, "notify", {})) d.flag_for_notification(w);
}

void to_json(json& j, const Deficit& d) { j = json{{"staff", d.staff}, {"certified", d.certified}}; }

void to_json(json& j, const DeficientSlot& d) {
  j = json{{"date", d.slot.date},
           {"shift", to_string(d.slot.shift)},
           {"staff_deficit", d.deficit.staff},
           {"certified_deficit", d.deficit.certified}};
}

namespace {

json solutions_json(const std::vector<WithdrawalSet>& sets) {
  json out = json::array();
  for (const WithdrawalSet& s : sets) out.push_back(s.wish_ids);
  return out;
}

}  // namespace

void to_json(json& j, const Conflict& c) {
  j = json{{"conflict_id", c.id},
           {"deficient_slots", c.deficient_slots},
           {"involved_wishes", c.involved_wishes},
           {"solutions", solutions_json(c.solutions)},
           {"truncated", c.truncated},
           {"resolvable", c.resolvable}};
}

void to_json(json& j, const ConflictView& v) {
  json people = json::array();
  for (const ConflictParticipant& p : v.participants) {
    people.push_back({{"wish_id", p.wish_id},
                      {"worker_id", p.worker_id},
                      {"display_name", p.display_name},
                      {"date", p.date},
                      {"scope", to_string(p.scope)},
                      {"priority", p.priority}});
  }
  j = json{{"conflict_id", v.id},
           {"deficient_slots", v.deficient_slots},
           {"participants", people},
           {"solutions", solutions_json(v.solutions)},
           {"truncated", v.truncated},
           {"resolvable", v.resolvable}};
}

void to_json(json& j, const Violation& v) {
  j = json{{"kind", to_string(v.kind)}, {"worker_id", v.worker_id}, {"detail", v.detail}};
  if (v.slot) {
    j["date"] = v.slot->date;
    j["shift"] = to_string(v.slot->shift);
  }
}

void to_json(json& j, const ValidationReport& r) {
  json warnings = json::array();
  for (const WishCollision& c : r.warnings) {
    warnings.push_back({{"wish_id", c.wish_id}, {"worker_id", c.worker_id}, {"date", c.slot.date},
                        {"shift", to_string(c.slot.shift)}});
  }
  j = json{{"legal", r.legal()},
           {"hard_violations", r.hard_violations},
           {"soft_penalty", r.soft_penalty},
           {"preference_mismatches", r.soft.preference_mismatches},
           {"hours_deviation", r.soft.hours_deviation},
           {"weekend_spread", r.soft.weekend_spread},
           {"warnings", warnings}};
}

void to_json(json& j, const InfeasibilityReport& r) {
  j = json{{"slot", r.slot ? json(*r.slot) : json(nullptr)},
           {"binding_constraints", r.binding_constraints},
           {"partial", r.partial},
           {"budget_exhausted", r.budget_exhausted},
           {"nodes", r.nodes}};
}

void to_json(json& j, const SwapProposal& s) {
  j = json{{"swap_id", s.id},       {"proposer", s.proposer},
           {"counterpart", s.counterpart}, {"give", s.proposer_slot},
           {"take", s.counterpart_slot},   {"state", to_string(s.state)}};
}

void to_json(json& j, const StandInEvent& s) {
  j = json{{"absent_worker", s.absent_worker},
           {"volunteer", s.volunteer},
           {"slot", s.slot},
           {"timestamp", s.timestamp}};
}

void to_json(json& j, const ReleaseInfo& r) {
  j = json{{"released_on", r.released_on}, {"late", r.late}, {"advisory", r.advisory}};
}

void to_json(json& j, const HoursStatement& h) {
  j = json{{"worker_id", h.worker_id},         {"month", h.month},
           {"target_hours", h.target_hours},   {"assigned_hours", h.assigned_hours},
           {"delta", h.delta},                 {"shifts", h.shifts}};
}

void to_json(json& j, const FairnessReport& r) {
  json rows = json::array();
  for (const FairnessRow& row : r.rows) {
    rows.push_back({{"worker_id", row.worker_id}, {"free_weekends", row.free_weekends}, {"flagged", row.flagged}});
  }
  json holidays = json::array();
  for (const HolidaySummary& h : r.holidays) {
    holidays.push_back({{"worker_id", h.worker_id},
                        {"pair", h.pair_name},
                        {"season_year", h.season_year},
                        {"worked_first", h.worked_first},
                        {"worked_second", h.worked_second}});
  }
  j = json{{"months", r.months}, {"weekends", r.weekends}, {"workers", rows},     {"min_free", r.min_free},
           {"max_free", r.max_free}, {"spread", r.spread},  {"median", r.median}, {"holidays", holidays}};
}

void to_json(json& j, const Pin& p) {
  j = json{{"date", p.slot.date}, {"shift", to_string(p.slot.shift)}, {"worker_id", p.worker_id}};
}

void from_json(const json& j, Pin& p) {
  p.slot = j.get<ShiftSlot>();
  p.worker_id = field<std::string>(j, "worker_id");
}

void to_json(json& j, const OverrideChange& c) {
  j = json{{"kind", to_string(c.kind)},
           {"date", c.slot.date},
           {"shift", to_string(c.slot.shift)},
           {"worker_id", c.worker_id}};
  if (c.kind == OverrideKind::replace) j["replacement"] = c.replacement;
}

void from_json(const json& j, OverrideChange& c) {
  c.kind = parse_override_kind(field<std::string>(j, "kind"));
  c.slot = j.get<ShiftSlot>();
  c.worker_id = field<std::string>(j, "worker_id");
  c.replacement = c.kind == OverrideKind::replace ? field<std::string>(j, "replacement") : std::string();
}

void to_json(json& j, const PlanningCycle& c) {
  j = json{{"month", c.month},
           {"phase", to_string(c.phase)},
           {"quota", c.quota},
           {"release_date", c.release_date},
           {"wishes", c.wishes},
           {"conflicts", c.conflicts},
           {"uncovered", c.uncovered},
           {"draft_version", c.draft_version},
           {"draft", c.draft ? json(*c.draft) : json(nullptr)},
           {"schedule", c.schedule ? json(*c.schedule) : json(nullptr)},
           {"release", c.release ? json(*c.release) : json(nullptr)},
           {"swaps", c.swaps},
           {"stand_ins", c.stand_ins}};
}

}  // namespace selfsched
