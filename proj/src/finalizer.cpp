#include "selfsched/finalizer.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <set>
#include <stdexcept>
#include <tuple>

#include "selfsched/errors.hpp"

namespace selfsched {

namespace {

enum class Block { none, already, absent, free_weekend, wish, rest, consecutive, reciprocity };

std::string_view block_text(Block b) {
  switch (b) {
    case Block::none: return "available";
    case Block::already: return "already assigned";
    case Block::absent: return "absent";
    case Block::free_weekend: return "free weekend";
    case Block::wish: return "wish";
    case Block::rest: return "rest";
    case Block::consecutive: return "consecutive_days";
    case Block::reciprocity: return "reciprocity";
  }
  return "available";
}

constexpr double kSoftWishPenalty = 10.0;
constexpr double kEps = 1e-9;

nlohmann::json violations_json(const std::vector<Violation>& vs) {
  nlohmann::json out = nlohmann::json::array();
  for (const Violation& v : vs) {
    nlohmann::json j{{"kind", to_string(v.kind)}, {"worker_id", v.worker_id}, {"detail", v.detail}};
    if (v.slot) j["slot"] = v.slot->str();
    out.push_back(std::move(j));
  }
  return out;
}

/// Backtracking over slots. Each step takes the unsatisfied slot with the
/// least slack and tries every way of adding exactly the missing number of
/// workers, cheapest candidates first. Every rule but coverage only gets
/// harder with more assignments, so staffing each slot at its minimum loses
/// no solutions.
class Autofiller {
 public:
  Autofiller(const PlanningWindow& window, YearMonth month, const Roster& roster, std::span<const Wish> wishes,
             const RuleSet& rules, const AutofillOptions& options)
      : window_(window), month_(month), roster_(roster), wishes_(wishes), rules_(rules), options_(options) {
    budget_ = options.node_budget.value_or(rules.config.node_budget);
    for (const Worker& w : roster.workers()) {
      workers_.push_back(&w);
      certified_.push_back(rules.counts_as_certified(w) ? 1 : 0);
      target_.push_back(target_hours(w, window.size()));
    }
    std::map<Date, int> weekend_of;
    for (std::size_t d = 0; d < window.days.size(); ++d) {
      const Date date = window.days[d].date;
      day_hits_.push_back(rules.config.reciprocity_enabled ? holiday_hits(date, rules.config.holiday_pairs)
                                                            : std::vector<HolidayHit>{});
      int wk = -1;
      if (date.is_weekend()) {
        const Date sat = date.is_saturday() ? date : date.plus_days(-1);
        wk = weekend_of.emplace(sat, static_cast<int>(weekend_of.size())).first->second;
      }
      for (ShiftKind k : kShiftKinds) {
        const ShiftSlot slot{date, k};
        slots_.push_back({slot, static_cast<int>(d), slot_start_minute(slot, rules.config),
                          slot_end_minute(slot, rules.config), rules.config.staff_required(k),
                          rules.config.certified_required(k), wk, rules.config.times(k).hours()});
      }
    }
    weekends_ = static_cast<int>(weekend_of.size());
    const std::size_t n = workers_.size(), m = slots_.size(), days = window.days.size();
    static_block_.assign(n * m, Block::none);
    soft_wish_.assign(n * m, 0);
    on_.assign(n * m, 0);
    day_count_.assign(n * days, 0);
    weekend_count_.assign(n * static_cast<std::size_t>(std::max(weekends_, 1)), 0);
    hours_.assign(n, 0.0);
    members_.assign(m, {});
    slot_certified_.assign(m, 0);
    for (std::size_t w = 0; w < n; ++w) {
      for (std::size_t s = 0; s < m; ++s) {
        const Worker& worker = *workers_[w];
        const ShiftSlot& slot = slots_[s].slot;
        Block& b = static_block_[w * m + s];
        if (worker.absent_on(slot.date)) b = Block::absent;
        else if (weekend_status(worker, slot.date) == WeekendStatus::free_weekend) b = Block::free_weekend;
      }
    }
    for (const Wish& wish : wishes) {
      const Worker* holder = roster.find(wish.worker_id);
      if (!holder) continue;
      const std::size_t w = index_of_worker(holder->id);
      for (std::size_t s = 0; s < m; ++s) {
        if (!wish.covers(slots_[s].slot)) continue;
        if (wish.is_binding()) {
          if (static_block_[w * m + s] == Block::none) static_block_[w * m + s] = Block::wish;
        } else if (wish.status == WishStatus::in_conflict) {
          soft_wish_[w * m + s] = 1;
        }
      }
    }
  }

  AutofillResult run() {
    if (auto report = apply_pins()) return *report;
    if (auto report = static_check()) return *report;
    if (!solve()) {
      InfeasibilityReport r;
      r.budget_exhausted = exhausted_;
      r.nodes = nodes_;
      r.partial = best_partial_ ? *best_partial_ : snapshot();
      if (fail_slot_ >= 0) r.slot = slots_[static_cast<std::size_t>(fail_slot_)].slot;
      r.binding_constraints = fail_reasons_;
      if (exhausted_) r.binding_constraints.insert(r.binding_constraints.begin(),
                                                   "node budget of " + std::to_string(budget_) + " exhausted");
      return r;
    }
    if (options_.improve) improve();
    ScheduleDraft draft = snapshot();
    const ValidationReport report = validate_schedule(draft, window_, roster_, wishes_, rules_);
    if (!report.legal()) {
      throw std::logic_error("autofill produced an illegal draft: " +
                             std::string(to_string(report.hard_violations.front().kind)));
    }
    return draft;
  }

 private:
  struct SlotInfo {
    ShiftSlot slot;
    int day = 0;
    long start = 0;
    long end = 0;
    int staff = 0;
    int cert = 0;
    int weekend = -1;
    double hours = 0.0;
  };

  std::size_t m() const { return slots_.size(); }
  std::size_t days() const { return window_.days.size(); }

  std::size_t index_of_worker(const std::string& id) const {
    for (std::size_t i = 0; i < workers_.size(); ++i) {
      if (workers_[i]->id == id) return i;
    }
    throw PlanningError(ErrorCode::UnknownWorker, "unknown worker " + id);
  }

  int find_slot(const ShiftSlot& slot) const {
    for (std::size_t s = 0; s < m(); ++s) {
      if (slots_[s].slot == slot) return static_cast<int>(s);
    }
    return -1;
  }

  bool on(std::size_t w, std::size_t s) const { return on_[w * m() + s] != 0; }
  int day_count(std::size_t w, int d) const { return day_count_[w * days() + static_cast<std::size_t>(d)]; }

  int holiday_count(std::size_t w, const HolidayHit& h, bool in_first) const {
    auto it = holiday_counts_.find({w, h.pair_index, h.season_year, in_first});
    return it == holiday_counts_.end() ? 0 : it->second;
  }

  Block can_add(std::size_t w, std::size_t s) const {
    if (on(w, s)) return Block::already;
    const Block sb = static_block_[w * m() + s];
    if (sb != Block::none) return sb;
    const SlotInfo& info = slots_[s];
    const long rest = rules_.rest_minutes();
    for (std::size_t p = s; p-- > 0;) {
      if (!on(w, p)) continue;
      if (info.start - slots_[p].end < rest) return Block::rest;
      break;
    }
    for (std::size_t q = s + 1; q < m(); ++q) {
      if (!on(w, q)) continue;
      if (slots_[q].start - info.end < rest) return Block::rest;
      break;
    }
    if (day_count(w, info.day) == 0) {
      int run = 1;
      for (int d = info.day - 1; d >= 0 && day_count(w, d) > 0; --d) ++run;
      for (int d = info.day + 1; d < static_cast<int>(days()) && day_count(w, d) > 0; ++d) ++run;
      if (run > workers_[w]->max_consecutive_days) return Block::consecutive;
    }
    for (const HolidayHit& h : day_hits_[static_cast<std::size_t>(info.day)]) {
      const HolidayFlags prior = rules_.ledger.flags(workers_[w]->id, h.pair_index, h.season_year);
      const bool other_prior = h.in_first ? prior.worked_second : prior.worked_first;
      if (other_prior || holiday_count(w, h, !h.in_first) > 0) return Block::reciprocity;
    }
    return Block::none;
  }

  void add(std::size_t w, std::size_t s) {
    const SlotInfo& info = slots_[s];
    on_[w * m() + s] = 1;
    ++day_count_[w * days() + static_cast<std::size_t>(info.day)];
    if (info.weekend >= 0) ++weekend_count_[w * static_cast<std::size_t>(weekends_) + static_cast<std::size_t>(info.weekend)];
    hours_[w] += info.hours;
    members_[s].push_back(static_cast<int>(w));
    slot_certified_[s] += certified_[w];
    for (const HolidayHit& h : day_hits_[static_cast<std::size_t>(info.day)]) {
      ++holiday_counts_[{w, h.pair_index, h.season_year, h.in_first}];
    }
  }

  void remove(std::size_t w, std::size_t s) {
    const SlotInfo& info = slots_[s];
    on_[w * m() + s] = 0;
    --day_count_[w * days() + static_cast<std::size_t>(info.day)];
    if (info.weekend >= 0) --weekend_count_[w * static_cast<std::size_t>(weekends_) + static_cast<std::size_t>(info.weekend)];
    hours_[w] -= info.hours;
    auto& mem = members_[s];
    mem.erase(std::find(mem.begin(), mem.end(), static_cast<int>(w)));
    slot_certified_[s] -= certified_[w];
    for (const HolidayHit& h : day_hits_[static_cast<std::size_t>(info.day)]) {
      --holiday_counts_[{w, h.pair_index, h.season_year, h.in_first}];
    }
  }

  int free_weekends(std::size_t w) const {
    int free = 0;
    for (int k = 0; k < weekends_; ++k) {
      free += weekend_count_[w * static_cast<std::size_t>(weekends_) + static_cast<std::size_t>(k)] == 0 ? 1 : 0;
    }
    return free;
  }

  int spread_with(std::size_t changed, int changed_free) const {
    if (workers_.empty()) return 0;
    int lo = INT_MAX, hi = INT_MIN;
    for (std::size_t w = 0; w < workers_.size(); ++w) {
      const int f = w == changed ? changed_free : free_weekends(w);
      lo = std::min(lo, f);
      hi = std::max(hi, f);
    }
    return hi - lo;
  }

  /// Change of the soft objective if `w` is added to `s`.
  double marginal_cost(std::size_t w, std::size_t s) const {
    const SlotInfo& info = slots_[s];
    const SoftWeights& wt = rules_.config.weights;
    double cost = 0.0;
    const ShiftPreference pref = workers_[w]->shift_preference;
    if ((pref == ShiftPreference::morning && info.slot.shift == ShiftKind::afternoon) ||
        (pref == ShiftPreference::afternoon && info.slot.shift == ShiftKind::morning)) {
      cost += wt.preference;
    }
    cost += wt.hours * (std::abs(hours_[w] + info.hours - target_[w]) - std::abs(hours_[w] - target_[w]));
    if (info.weekend >= 0 &&
        weekend_count_[w * static_cast<std::size_t>(weekends_) + static_cast<std::size_t>(info.weekend)] == 0) {
      const int before = spread_with(w, free_weekends(w));
      const int after = spread_with(w, free_weekends(w) - 1);
      cost += wt.weekend_spread * (after - before);
    }
    if (soft_wish_[w * m() + s]) cost += kSoftWishPenalty;
    return cost;
  }

  std::string describe(std::size_t s) const {
    const SlotInfo& info = slots_[s];
    const int have = static_cast<int>(members_[s].size());
    std::string txt = info.slot.str() + " needs " + std::to_string(info.staff) + " staff (" +
                      std::to_string(info.cert) + " certified), has " + std::to_string(have) + " (" +
                      std::to_string(slot_certified_[s]) + " certified)";
    return txt;
  }

  std::vector<std::string> reasons_for(std::size_t s) const {
    std::vector<std::string> out{describe(s)};
    for (std::size_t w = 0; w < workers_.size(); ++w) {
      const Block b = can_add(w, s);
      if (b == Block::none || b == Block::already) continue;
      out.push_back(workers_[w]->id + ": " + std::string(block_text(b)));
    }
    return out;
  }

  std::optional<InfeasibilityReport> apply_pins() {
    for (const Pin& pin : options_.pins) {
      const int s = find_slot(pin.slot);
      if (s < 0) throw PlanningError(ErrorCode::SlotOutsideCycle, pin.slot.str() + " is outside the window");
      const std::size_t w = index_of_worker(pin.worker_id);
      const Block b = can_add(w, static_cast<std::size_t>(s));
      if (b == Block::already) continue;
      if (b != Block::none) {
        InfeasibilityReport r;
        r.slot = pin.slot;
        r.binding_constraints = {"pinned " + pin.worker_id + " on " + pin.slot.str() + " blocked by " +
                                 std::string(block_text(b))};
        r.partial = snapshot();
        return r;
      }
      add(w, static_cast<std::size_t>(s));
    }
    return std::nullopt;
  }

  std::optional<InfeasibilityReport> static_check() {
    for (std::size_t s = 0; s < m(); ++s) {
      int staff = 0, cert = 0;
      for (std::size_t w = 0; w < workers_.size(); ++w) {
        if (on(w, s) || static_block_[w * m() + s] == Block::none) {
          ++staff;
          cert += certified_[w];
        }
      }
      if (staff < slots_[s].staff || cert < slots_[s].cert) {
        InfeasibilityReport r;
        r.slot = slots_[s].slot;
        r.binding_constraints = reasons_for(s);
        r.partial = snapshot();
        return r;
      }
    }
    return std::nullopt;
  }

  void note_progress(int satisfied) {
    if (satisfied > best_progress_) {
      best_progress_ = satisfied;
      best_partial_ = snapshot();
    }
  }

  void note_failure(std::size_t s, int satisfied) {
    if (satisfied >= fail_progress_) {
      fail_progress_ = satisfied;
      fail_slot_ = static_cast<int>(s);
      fail_reasons_ = reasons_for(s);
    }
  }

  bool solve() {
    if (++nodes_ > budget_) {
      exhausted_ = true;
      return false;
    }
    int best = -1, best_slack = INT_MAX, best_k = 0, best_c = 0, satisfied = 0;
    for (std::size_t s = 0; s < m(); ++s) {
      const int need_staff = std::max(0, slots_[s].staff - static_cast<int>(members_[s].size()));
      const int need_cert = std::max(0, slots_[s].cert - slot_certified_[s]);
      if (need_staff == 0 && need_cert == 0) {
        ++satisfied;
        continue;
      }
      int cands = 0, cert_cands = 0;
      for (std::size_t w = 0; w < workers_.size(); ++w) {
        if (can_add(w, s) != Block::none) continue;
        ++cands;
        cert_cands += certified_[w];
      }
      const int k = std::max(need_staff, need_cert);
      const int slack = std::min(cands - k, cert_cands - need_cert);
      if (slack < 0) {
        note_failure(s, satisfied);
        return false;
      }
      if (slack < best_slack) {
        best_slack = slack;
        best = static_cast<int>(s);
        best_k = k;
        best_c = need_cert;
      }
    }
    if (best < 0) return true;
    note_progress(satisfied);

    const std::size_t s = static_cast<std::size_t>(best);
    std::vector<std::pair<double, std::size_t>> ranked;
    for (std::size_t w = 0; w < workers_.size(); ++w) {
      if (can_add(w, s) == Block::none) ranked.push_back({marginal_cost(w, s), w});
    }
    std::stable_sort(ranked.begin(), ranked.end(), [&](const auto& a, const auto& b) {
      if (std::abs(a.first - b.first) > kEps) return a.first < b.first;
      return workers_[a.second]->id < workers_[b.second]->id;
    });
    std::vector<std::size_t> order;
    for (const auto& r : ranked) order.push_back(r.second);
    std::vector<int> cert_suffix(order.size() + 1, 0);
    for (std::size_t i = order.size(); i-- > 0;) cert_suffix[i] = cert_suffix[i + 1] + certified_[order[i]];
    return pick(s, order, cert_suffix, 0, best_k, best_c);
  }

  bool pick(std::size_t s, const std::vector<std::size_t>& order, const std::vector<int>& cert_suffix,
            std::size_t from, int left, int cert_left) {
    if (left == 0) return cert_left <= 0 && solve();
    for (std::size_t j = from; j + static_cast<std::size_t>(left) <= order.size(); ++j) {
      if (cert_suffix[j] < cert_left) break;
      const std::size_t w = order[j];
      add(w, s);
      const bool ok = pick(s, order, cert_suffix, j + 1, left - 1, cert_left - certified_[w]);
      if (ok) return true;
      remove(w, s);
      if (exhausted_) return false;
    }
    return false;
  }

  /// Best-improvement hill climb: keep adding the single assignment that
  /// lowers the objective most.
  void improve() {
    while (true) {
      double best = -kEps;
      std::size_t bw = 0, bs = 0;
      bool found = false;
      for (std::size_t s = 0; s < m(); ++s) {
        for (std::size_t w = 0; w < workers_.size(); ++w) {
          if (can_add(w, s) != Block::none) continue;
          const double c = marginal_cost(w, s);
          if (c < best - kEps) {
            best = c;
            bw = w;
            bs = s;
            found = true;
          }
        }
      }
      if (!found) return;
      add(bw, bs);
    }
  }

  ScheduleDraft snapshot() const {
    ScheduleDraft d(month_);
    for (std::size_t s = 0; s < m(); ++s) {
      for (int w : members_[s]) d.assign(slots_[s].slot, workers_[static_cast<std::size_t>(w)]->id, Provenance::autofill);
    }
    return d;
  }

  const PlanningWindow& window_;
  YearMonth month_;
  const Roster& roster_;
  std::span<const Wish> wishes_;
  const RuleSet& rules_;
  const AutofillOptions& options_;

  std::vector<const Worker*> workers_;
  std::vector<int> certified_;
  std::vector<double> target_;
  std::vector<SlotInfo> slots_;
  std::vector<std::vector<HolidayHit>> day_hits_;
  int weekends_ = 0;

  std::vector<Block> static_block_;
  std::vector<char> soft_wish_;
  std::vector<char> on_;
  std::vector<int> day_count_;
  std::vector<int> weekend_count_;
  std::vector<double> hours_;
  std::vector<std::vector<int>> members_;
  std::vector<int> slot_certified_;
  std::map<std::tuple<std::size_t, std::size_t, int, bool>, int> holiday_counts_;

  long budget_ = 0;
  long nodes_ = 0;
  bool exhausted_ = false;
  int best_progress_ = -1;
  std::optional<ScheduleDraft> best_partial_;
  int fail_progress_ = -1;
  int fail_slot_ = -1;
  std::vector<std::string> fail_reasons_;
};

void require_phase(const PlanningCycle& cycle, Phase phase) {
  if (cycle.phase != phase) {
    throw PlanningError(ErrorCode::PhaseClosed,
                        "cycle " + cycle.month.str() + " is in phase " + std::string(to_string(cycle.phase)),
                        {{"phase", to_string(cycle.phase)}});
  }
}

double median_of(std::vector<int> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

}  // namespace

AutofillResult autofill_window(const PlanningWindow& window, YearMonth month, const Roster& roster,
                               std::span<const Wish> wishes, const RuleSet& rules, const AutofillOptions& options) {
  if (window.days.empty()) throw PlanningError(ErrorCode::EmptyWindow, "autofill needs at least one day");
  return Autofiller(window, month, roster, wishes, rules, options).run();
}

AutofillResult autofill(const PlanningCycle& cycle, const Roster& roster, const RuleSet& rules,
                        const AutofillOptions& options) {
  require_phase(cycle, Phase::preparation);
  if (!cycle.conflicts.empty() && !options.acknowledge_conflicts) {
    nlohmann::json ids = nlohmann::json::array();
    for (const Conflict& c : cycle.conflicts) ids.push_back(c.id);
    throw PlanningError(ErrorCode::UnresolvedConflicts,
                        std::to_string(cycle.conflicts.size()) + " conflict(s) are still open",
                        {{"conflicts", ids}});
  }
  return autofill_window(cycle.window(rules.config), cycle.month, roster, cycle.wishes, rules, options);
}

double soft_objective(const ValidationReport& report, const RuleSet& rules) {
  return report.soft_penalty + rules.config.weights.weekend_spread * report.soft.weekend_spread;
}

std::string_view to_string(OverrideKind k) {
  switch (k) {
    case OverrideKind::assign: return "assign";
    case OverrideKind::unassign: return "unassign";
    case OverrideKind::replace: return "replace";
  }
  return "assign";
}

OverrideKind parse_override_kind(std::string_view text) {
  for (OverrideKind k : {OverrideKind::assign, OverrideKind::unassign, OverrideKind::replace}) {
    if (to_string(k) == text) return k;
  }
  throw PlanningError(ErrorCode::InvalidField, "unknown override kind '" + std::string(text) + "'");
}

OverrideOutcome apply_override(const ScheduleDraft& draft, const Actor& caller, const OverrideChange& change,
                               const PlanningWindow& window, const Roster& roster, std::span<const Wish> wishes,
                               const RuleSet& rules) {
  if (!caller.is_planner()) throw PlanningError(ErrorCode::Forbidden, "overrides are planner-only");
  if (!window.contains(change.slot)) {
    throw PlanningError(ErrorCode::SlotOutsideCycle, change.slot.str() + " is outside the schedule");
  }
  OverrideOutcome out{draft, {}};
  ScheduleDraft& after = out.draft;
  auto put = [&](const std::string& worker_id) {
    roster.at(worker_id);
    if (after.is_assigned(worker_id, change.slot)) {
      throw PlanningError(ErrorCode::InvalidField, worker_id + " already works " + change.slot.str());
    }
    after.assign(change.slot, worker_id, Provenance::override);
    for (const Wish& w : wishes) {
      if (w.worker_id != worker_id || !w.is_binding() || !w.covers(change.slot)) continue;
      WishCollision c{w.id, worker_id, change.slot};
      after.add_wish_collision(c);
      after.flag_for_notification(worker_id);
      out.new_collisions.push_back(std::move(c));
    }
  };
  auto take = [&](const std::string& worker_id) {
    if (!after.is_assigned(worker_id, change.slot)) {
      throw PlanningError(ErrorCode::NotAssigned, worker_id + " does not work " + change.slot.str());
    }
    after.unassign(change.slot, worker_id);
  };
  switch (change.kind) {
    case OverrideKind::assign: put(change.worker_id); break;
    case OverrideKind::unassign: take(change.worker_id); break;
    case OverrideKind::replace:
      take(change.worker_id);
      put(change.replacement);
      break;
  }
  const auto fresh = new_violations(validate_schedule(draft, window, roster, wishes, rules),
                                    validate_schedule(after, window, roster, wishes, rules));
  if (!fresh.empty()) {
    throw PlanningError(ErrorCode::ValidationFailed,
                        "override introduces " + std::string(to_string(fresh.front().kind)) + " on " +
                            (fresh.front().slot ? fresh.front().slot->str() : fresh.front().worker_id),
                        {{"hard_violations", violations_json(fresh)}});
  }
  return out;
}

OverrideOutcome apply_override(PlanningCycle& cycle, const Actor& caller, const OverrideChange& change,
                               const Roster& roster, const RuleSet& rules) {
  if (!caller.is_planner()) throw PlanningError(ErrorCode::Forbidden, "overrides are planner-only");
  ScheduleDraft* target = nullptr;
  if (cycle.phase == Phase::preparation) {
    if (!cycle.draft) throw PlanningError(ErrorCode::NoDraft, "cycle " + cycle.month.str() + " has no draft");
    target = &*cycle.draft;
  } else if (cycle.phase == Phase::running && cycle.schedule) {
    target = &*cycle.schedule;
  } else {
    require_phase(cycle, Phase::running);
    throw PlanningError(ErrorCode::NoDraft, "cycle " + cycle.month.str() + " has no schedule");
  }
  OverrideOutcome out = apply_override(*target, caller, change, cycle.window(rules.config), roster, cycle.wishes,
                                       rules);
  *target = out.draft;
  ++cycle.draft_version;
  return out;
}

void install_draft(PlanningCycle& cycle, ScheduleDraft draft) {
  require_phase(cycle, Phase::preparation);
  draft.set_status(DraftStatus::draft);
  cycle.draft = std::move(draft);
  ++cycle.draft_version;
}

const ReleaseInfo& release(PlanningCycle& cycle, const Actor& caller, std::optional<int> expected_version,
                           const Roster& roster, const RuleSet& rules, Date today) {
  if (!caller.is_planner()) throw PlanningError(ErrorCode::Forbidden, "release is planner-only");
  require_phase(cycle, Phase::preparation);
  if (!cycle.draft) throw PlanningError(ErrorCode::NoDraft, "cycle " + cycle.month.str() + " has no draft");
  if (expected_version && *expected_version != cycle.draft_version) {
    throw PlanningError(ErrorCode::StaleSnapshot,
                        "draft is at version " + std::to_string(cycle.draft_version) + ", release named " +
                            std::to_string(*expected_version),
                        {{"current_version", cycle.draft_version}});
  }
  const ValidationReport report = validate_schedule(*cycle.draft, cycle.window(rules.config), roster, cycle.wishes,
                                                    rules);
  if (!report.legal()) {
    throw PlanningError(ErrorCode::HardViolationsPresent,
                        std::to_string(report.hard_violations.size()) + " hard violation(s) block the release",
                        {{"hard_violations", violations_json(report.hard_violations)}});
  }
  ScheduleDraft finalized = *cycle.draft;
  finalized.set_status(DraftStatus::finalized);
  for (Wish& w : cycle.wishes) {
    if (!w.is_pending()) continue;
    bool honored = true;
    for (ShiftKind k : kShiftKinds) {
      const ShiftSlot slot{w.date, k};
      if (w.covers(slot) && finalized.is_assigned(w.worker_id, slot)) honored = false;
    }
    if (honored) w.status = WishStatus::granted;
  }
  cycle.draft->set_status(DraftStatus::finalized);
  cycle.schedule = std::move(finalized);
  cycle.phase = Phase::running;
  ReleaseInfo info;
  info.released_on = today;
  info.late = today > cycle.release_date;
  if (info.late) {
    info.advisory = "released " + std::to_string(today - cycle.release_date) + " day(s) after the planned date " +
                    cycle.release_date.iso();
  }
  cycle.release = std::move(info);
  return *cycle.release;
}

FairnessReport fairness_report(std::span<const ScheduleDraft> schedules, const Roster& roster,
                               const SystemConfig& config) {
  std::vector<const ScheduleDraft*> finals;
  for (const ScheduleDraft& d : schedules) {
    if (d.status() == DraftStatus::finalized) finals.push_back(&d);
  }
  if (finals.empty()) throw PlanningError(ErrorCode::EmptyWindow, "no finalized schedule in the window");

  FairnessReport report;
  std::set<YearMonth> months;
  for (const ScheduleDraft* d : finals) months.insert(d->month());
  report.months.assign(months.begin(), months.end());

  std::map<Date, std::vector<Date>> weekends;
  for (YearMonth ym : months) {
    for (Date d = ym.first_day(); d <= ym.last_day(); d = d.plus_days(1)) {
      if (!d.is_weekend()) continue;
      weekends[d.is_saturday() ? d : d.plus_days(-1)].push_back(d);
    }
  }
  report.weekends = static_cast<int>(weekends.size());
  auto works = [&](const std::string& id, Date day) {
    for (const ScheduleDraft* d : finals) {
      if (!d->month().contains(day)) continue;
      for (ShiftKind k : kShiftKinds) {
        if (d->is_assigned(id, {day, k})) return true;
      }
    }
    return false;
  };
  std::vector<int> counts;
  for (const Worker& w : roster.workers()) {
    int free = 0;
    for (const auto& [sat, days] : weekends) {
      if (std::none_of(days.begin(), days.end(), [&](Date d) { return works(w.id, d); })) ++free;
    }
    report.rows.push_back({w.id, free, false});
    counts.push_back(free);
  }
  if (!counts.empty()) {
    report.min_free = *std::min_element(counts.begin(), counts.end());
    report.max_free = *std::max_element(counts.begin(), counts.end());
    report.spread = report.max_free - report.min_free;
    report.median = median_of(counts);
    for (FairnessRow& row : report.rows) {
      row.flagged = std::abs(row.free_weekends - report.median) > config.fairness_spread_threshold + kEps;
    }
  }
  HolidayLedger ledger;
  for (const ScheduleDraft* d : finals) ledger.merge(HolidayLedger::from_schedule(*d, config.holiday_pairs));
  for (const auto& [key, flags] : ledger.entries()) {
    report.holidays.push_back({key.worker_id, config.holiday_pairs[key.pair_index].name, key.season_year,
                               flags.worked_first, flags.worked_second});
  }
  return report;
}

HolidayLedger prior_ledger(const CycleMap& cycles, YearMonth month, const SystemConfig& config) {
  HolidayLedger ledger;
  for (const auto& [ym, cycle] : cycles) {
    if (ym >= month || !cycle.schedule) continue;
    ledger.merge(HolidayLedger::from_schedule(*cycle.schedule, config.holiday_pairs));
  }
  return ledger;
}

}  // namespace selfsched
