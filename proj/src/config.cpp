#include "selfsched/config.hpp"

#include <cstdio>

#include "selfsched/errors.hpp"

namespace selfsched {

using nlohmann::json;

MonthDay MonthDay::parse(std::string_view text) {
  if (text.size() != 5 || text[2] != '-') {
    throw PlanningError(ErrorCode::InvalidConfig, "expected MM-DD, got '" + std::string(text) + "'");
  }
  // 2000 is a leap year, so Feb 29 is accepted here.
  const Date probe = Date::parse_iso("2000-" + std::string(text));
  return {probe.month(), probe.day()};
}

std::string MonthDay::str() const {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%02u-%02u", month, day);
  return buf;
}

std::vector<HolidayPair> SystemConfig::default_holiday_pairs() {
  return {HolidayPair{"christmas_new_year", {{12, 24}, {12, 25}}, {{12, 31}, {1, 1}}}};
}

std::vector<std::string> SystemConfig::default_wish_examples() {
  return {"concert", "Christmas market", "birthday", "wedding", "time for myself"};
}

void SystemConfig::validate() const {
  auto fail = [](const std::string& msg) { throw PlanningError(ErrorCode::InvalidConfig, msg); };
  if (wish_quota < 1) fail("wish_quota must be >= 1");
  if (!(rest_hours_min > 0.0)) fail("rest_hours_min must be > 0");
  if (release_lead_days < 0) fail("release_lead_days must be >= 0");
  for (ShiftKind s : kShiftKinds) {
    const auto i = index_of(s);
    if (min_staff[i] < 0 || min_certified[i] < 0) fail("staffing minimums must be >= 0");
    if (min_certified[i] > min_staff[i]) {
      fail("min_certified exceeds min_staff for " + std::string(to_string(s)));
    }
    if (!(shift_times[i].start < shift_times[i].end)) {
      fail("shift " + std::string(to_string(s)) + " must start before it ends");
    }
  }
  if (!(shift_times[0].start < shift_times[1].start)) fail("morning must precede afternoon");
  if (solution_cap < 1) fail("solution_cap must be >= 1");
  if (node_budget < 1) fail("node_budget must be >= 1");
  if (fairness_spread_threshold < 0) fail("fairness_spread_threshold must be >= 0");
  for (const HolidayPair& p : holiday_pairs) {
    if (p.first.empty() || p.second.empty()) fail("holiday pair '" + p.name + "' needs both sets");
  }
}

namespace {

std::array<int, 2> read_shift_map(const json& j, std::array<int, 2> fallback) {
  if (j.is_null()) return fallback;
  return {j.value("morning", fallback[0]), j.value("afternoon", fallback[1])};
}

json shift_map(std::array<int, 2> v) { return {{"morning", v[0]}, {"afternoon", v[1]}}; }

std::vector<MonthDay> read_month_days(const json& j) {
  std::vector<MonthDay> out;
  for (const auto& s : j) out.push_back(MonthDay::parse(s.get<std::string>()));
  return out;
}

json month_days(const std::vector<MonthDay>& v) {
  json out = json::array();
  for (const auto& md : v) out.push_back(md.str());
  return out;
}

}  // namespace

SystemConfig config_from_json(const json& j) {
  SystemConfig c;
  try {
    c.wish_quota = j.value("wish_quota", c.wish_quota);
    c.priority_enabled = j.value("priority_enabled", c.priority_enabled);
    if (j.contains("shift_times")) {
      for (ShiftKind s : kShiftKinds) {
        const auto key = std::string(to_string(s));
        if (!j["shift_times"].contains(key)) continue;
        const auto& t = j["shift_times"][key];
        c.shift_times[index_of(s)] = {ClockTime::parse(t.at("start").get<std::string>()),
                                      ClockTime::parse(t.at("end").get<std::string>())};
      }
    }
    c.min_staff = read_shift_map(j.value("min_staff", json()), c.min_staff);
    c.min_certified = read_shift_map(j.value("min_certified", json()), c.min_certified);
    c.rest_hours_min = j.value("rest_hours_min", c.rest_hours_min);
    c.release_lead_days = j.value("release_lead_days", c.release_lead_days);
    if (j.contains("holiday_pairs")) {
      c.holiday_pairs.clear();
      for (const auto& p : j["holiday_pairs"]) {
        c.holiday_pairs.push_back({p.value("name", std::string("holiday")),
                                   read_month_days(p.at("first")),
                                   read_month_days(p.at("second"))});
      }
    }
    c.reciprocity_enabled = j.value("reciprocity_enabled", c.reciprocity_enabled);
    c.apprenticeship_counts_as_certified =
        j.value("apprenticeship_counts_as_certified", c.apprenticeship_counts_as_certified);
    if (j.contains("holidays")) {
      for (const auto& d : j["holidays"]) c.holidays.push_back(Date::parse_iso(d.get<std::string>()));
    }
    c.solution_cap = j.value("solution_cap", c.solution_cap);
    c.node_budget = j.value("node_budget", c.node_budget);
    if (j.contains("weights")) {
      const auto& w = j["weights"];
      c.weights.preference = w.value("preference", c.weights.preference);
      c.weights.hours = w.value("hours", c.weights.hours);
      c.weights.weekend_spread = w.value("weekend_spread", c.weights.weekend_spread);
    }
    c.fairness_spread_threshold = j.value("fairness_spread_threshold", c.fairness_spread_threshold);
    if (j.contains("wish_examples")) {
      c.wish_examples = j["wish_examples"].get<std::vector<std::string>>();
    }
  } catch (const json::exception& e) {
    throw PlanningError(ErrorCode::InvalidConfig, e.what());
  } catch (const PlanningError& e) {
    throw PlanningError(ErrorCode::InvalidConfig, e.what());
  }
  c.validate();
  return c;
}

json config_to_json(const SystemConfig& c) {
  json times = json::object();
  for (ShiftKind s : kShiftKinds) {
    times[std::string(to_string(s))] = {{"start", c.times(s).start.str()},
                                        {"end", c.times(s).end.str()}};
  }
  json pairs = json::array();
  for (const auto& p : c.holiday_pairs) {
    pairs.push_back({{"name", p.name}, {"first", month_days(p.first)}, {"second", month_days(p.second)}});
  }
  json holidays = json::array();
  for (Date d : c.holidays) holidays.push_back(d.iso());
  return {
      {"wish_quota", c.wish_quota},
      {"priority_enabled", c.priority_enabled},
      {"shift_times", times},
      {"min_staff", shift_map(c.min_staff)},
      {"min_certified", shift_map(c.min_certified)},
      {"rest_hours_min", c.rest_hours_min},
      {"release_lead_days", c.release_lead_days},
      {"holiday_pairs", pairs},
      {"reciprocity_enabled", c.reciprocity_enabled},
      {"apprenticeship_counts_as_certified", c.apprenticeship_counts_as_certified},
      {"holidays", holidays},
      {"solution_cap", c.solution_cap},
      {"node_budget", c.node_budget},
      {"weights",
       {{"preference", c.weights.preference},
        {"hours", c.weights.hours},
        {"weekend_spread", c.weights.weekend_spread}}},
      {"fairness_spread_threshold", c.fairness_spread_threshold},
      {"wish_examples", c.wish_examples},
  };
}

long slot_start_minute(const ShiftSlot& slot, const SystemConfig& config) {
  return static_cast<long>(slot.date.days_since_epoch()) * 1440 + config.times(slot.shift).start.minutes;
}

long slot_end_minute(const ShiftSlot& slot, const SystemConfig& config) {
  return static_cast<long>(slot.date.days_since_epoch()) * 1440 + config.times(slot.shift).end.minutes;
}

}  // namespace selfsched
