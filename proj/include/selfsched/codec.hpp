#pragma once

#include <nlohmann/json.hpp>

#include "selfsched/conflicts.hpp"
#include "selfsched/constraints.hpp"
#include "selfsched/domain.hpp"
#include "selfsched/errors.hpp"
#include "selfsched/finalizer.hpp"
#include "selfsched/schedule.hpp"
#include "selfsched/wish.hpp"
#include "selfsched/workflow.hpp"

// JSON shapes shared by the event log and the HTTP API. Decoders throw
// PlanningError(InvalidField) on missing or malformed members.
namespace selfsched {

using nlohmann::json;

void to_json(json& j, const Date& d);
void from_json(const json& j, Date& d);
void to_json(json& j, const YearMonth& m);
void from_json(const json& j, YearMonth& m);

void to_json(json& j, const ShiftSlot& s);
void from_json(const json& j, ShiftSlot& s);

void to_json(json& j, const Worker& w);
void from_json(const json& j, Worker& w);

void to_json(json& j, const Wish& w);
void from_json(const json& j, Wish& w);

void to_json(json& j, const ScheduleDraft& d);
void from_json(const json& j, ScheduleDraft& d);

void to_json(json& j, const Deficit& d);
void to_json(json& j, const DeficientSlot& d);
void to_json(json& j, const Conflict& c);
void to_json(json& j, const ConflictView& v);

void to_json(json& j, const Violation& v);
void to_json(json& j, const ValidationReport& r);
void to_json(json& j, const InfeasibilityReport& r);

void to_json(json& j, const SwapProposal& s);
void to_json(json& j, const StandInEvent& s);
void to_json(json& j, const ReleaseInfo& r);
void to_json(json& j, const HoursStatement& h);
void to_json(json& j, const FairnessReport& r);

void to_json(json& j, const Pin& p);
void from_json(const json& j, Pin& p);
void to_json(json& j, const OverrideChange& c);
void from_json(const json& j, OverrideChange& c);

/// Full cycle state, used to compare live and replayed systems.
void to_json(json& j, const PlanningCycle& c);

/// Reads a required member, turning json type errors into InvalidField.
template <class T>
T field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw PlanningError(ErrorCode::InvalidField, std::string("missing field '") + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw PlanningError(ErrorCode::InvalidField, std::string("bad field '") + key + "': " + e.what());
  }
}

template <class T>
T field_or(const json& j, const char* key, T fallback) {
  if (!j.is_object() || !j.contains(key) || j.at(key).is_null()) return fallback;
  return field<T>(j, key);
}

}  // namespace selfsched
