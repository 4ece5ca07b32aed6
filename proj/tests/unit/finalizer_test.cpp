#include <gtest/gtest.h>

#include "selfsched/finalizer.hpp"
#include "instances.hpp"
#include "test_helpers.hpp"

namespace selfsched {
namespace {

using testing::error_of;
using testing::make_wish;
using testing::make_worker;

Date mar(unsigned d) { return Date::from_ymd(2019, 3, d); }
constexpr ShiftKind M = ShiftKind::morning;
constexpr ShiftKind A = ShiftKind::afternoon;

const Actor kLead{"lead", Role::planner};

/// Two morning people, two afternoon people, one nurse each, hours set so a
/// Monday-to-Friday week of single shifts meets every contract exactly.
struct Week {
  Week() {
    SystemConfig c;
    c.min_staff = {2, 2};
    c.min_certified = {1, 1};
    rules = RuleSet::from(c);
    roster = build_roster({
        make_worker("m1", Qualification::certified_nurse, mar(2), 56.0, 5, ShiftPreference::morning),
        make_worker("m2", Qualification::aide, mar(2), 56.0, 5, ShiftPreference::morning),
        make_worker("p1", Qualification::certified_nurse, mar(2), 56.0, 5, ShiftPreference::afternoon),
        make_worker("p2", Qualification::aide, mar(2), 56.0, 5, ShiftPreference::afternoon),
    });
  }

  ScheduleDraft fill(const std::vector<Wish>& wishes = {}, AutofillOptions options = {}) const {
    AutofillResult r = autofill_window(window, {2019, 3}, roster, wishes, rules, options);
    if (auto* report = std::get_if<InfeasibilityReport>(&r)) {
      ADD_FAILURE() << "infeasible at " << (report->slot ? report->slot->str() : "?");
      return ScheduleDraft({2019, 3});
    }
    return std::get<ScheduleDraft>(r);
  }

  PlanningWindow window = PlanningWindow::range(mar(4), 5);
  RuleSet rules;
  Roster roster;
};

TEST(Autofill, FindsTheZeroPenaltySchedule) {
  Week w;
  const ScheduleDraft d = w.fill();
  const ValidationReport r = validate_schedule(d, w.window, w.roster, {}, w.rules);
  EXPECT_TRUE(r.legal());
  EXPECT_DOUBLE_EQ(r.soft_penalty, 0.0);
  for (const CalendarDay& day : w.window.days) {
    EXPECT_EQ(d.workers_on({day.date, M}), (std::set<std::string>{"m1", "m2"}));
    EXPECT_EQ(d.workers_on({day.date, A}), (std::set<std::string>{"p1", "p2"}));
  }
  EXPECT_EQ(d.provenance({mar(4), M}, "m1"), Provenance::autofill);
}

TEST(Autofill, IsDeterministic) {
  Week w;
  EXPECT_EQ(w.fill(), w.fill());
}

TEST(Autofill, HonorsPinsAndWishes) {
  Week w;
  SystemConfig c = w.rules.config;
  c.min_staff = {1, 1};
  w.rules = RuleSet::from(c);
  AutofillOptions options;
  options.pins = {Pin{{mar(5), A}, "m2"}};
  const std::vector<Wish> wishes{make_wish("x1", "p2", mar(6), WishScope::whole_day)};
  const ScheduleDraft d = w.fill(wishes, options);
  EXPECT_TRUE(d.is_assigned("m2", {mar(5), A}));
  EXPECT_FALSE(d.is_assigned("p2", {mar(6), M}));
  EXPECT_FALSE(d.is_assigned("p2", {mar(6), A}));
  EXPECT_TRUE(validate_schedule(d, w.window, w.roster, wishes, w.rules).legal());
}

TEST(Autofill, ReportsTheBlockingSlot) {
  Week w;
  // With m1 and p1 both away on Wednesday no certified nurse is left.
  const std::vector<Wish> wishes{make_wish("x1", "m1", mar(6), WishScope::whole_day),
                                 make_wish("x2", "p1", mar(6), WishScope::whole_day)};
  const AutofillResult r = autofill_window(w.window, {2019, 3}, w.roster, wishes, w.rules);
  ASSERT_TRUE(std::holds_alternative<InfeasibilityReport>(r));
  const InfeasibilityReport& report = std::get<InfeasibilityReport>(r);
  ASSERT_TRUE(report.slot.has_value());
  EXPECT_EQ(report.slot->date, mar(6));
  EXPECT_FALSE(report.binding_constraints.empty());
  EXPECT_FALSE(report.budget_exhausted);
}

TEST(Autofill, StopsAtTheNodeBudget) {
  Week w;
  AutofillOptions options;
  options.node_budget = 1;
  const AutofillResult r = autofill_window(w.window, {2019, 3}, w.roster, {}, w.rules, options);
  ASSERT_TRUE(std::holds_alternative<InfeasibilityReport>(r));
  EXPECT_TRUE(std::get<InfeasibilityReport>(r).budget_exhausted);
}

TEST(Autofill, CycleNeedsResolvedConflicts) {
  Week w;
  PlanningCycle cycle;
  cycle.month = {2019, 3};
  cycle.conflicts.push_back(Conflict{"cf-1", {}, {"x"}, {}, false, true});
  EXPECT_EQ(error_of([&] { autofill(cycle, w.roster, w.rules); }), "UnresolvedConflicts");
  cycle.phase = Phase::running;
  EXPECT_EQ(error_of([&] { autofill(cycle, w.roster, w.rules); }), "PhaseClosed");
}

/// The hand-made optimum of Week plus a reserve aide who works nothing.
struct ReserveWeek : Week {
  ReserveWeek() {
    std::vector<Worker> all = roster.workers();
    all.push_back(make_worker("r1", Qualification::aide, mar(2), 56.0));
    roster = build_roster(std::move(all));
    base = ScheduleDraft({2019, 3});
    for (const CalendarDay& day : window.days) {
      for (const char* id : {"m1", "m2"}) base.assign({day.date, M}, id, Provenance::autofill);
      for (const char* id : {"p1", "p2"}) base.assign({day.date, A}, id, Provenance::autofill);
    }
  }
  ScheduleDraft base;
};

TEST(Override, CollisionIsRecordedAndFlagged) {
  ReserveWeek w;
  const std::vector<Wish> wishes{make_wish("x1", "r1", mar(7), WishScope::afternoon)};
  const ScheduleDraft& base = w.base;

  const OverrideChange add{OverrideKind::assign, {mar(7), A}, "r1", {}};
  const OverrideOutcome out = apply_override(base, kLead, add, w.window, w.roster, wishes, w.rules);
  ASSERT_EQ(out.new_collisions.size(), 1u);
  EXPECT_EQ(out.new_collisions[0].wish_id, "x1");
  EXPECT_TRUE(out.draft.wish_overridden("x1"));
  EXPECT_TRUE(out.draft.notify().contains("r1"));
  EXPECT_EQ(out.draft.provenance({mar(7), A}, "r1"), Provenance::override);
  const ValidationReport r = validate_schedule(out.draft, w.window, w.roster, wishes, w.rules);
  EXPECT_FALSE(r.has(ViolationKind::wish_violation));
  EXPECT_EQ(r.warnings.size(), 1u);
}

TEST(Override, RejectsNewHardViolations) {
  ReserveWeek w;
  const ScheduleDraft& base = w.base;
  const OverrideChange drop{OverrideKind::unassign, {mar(4), M}, "m1", {}};
  EXPECT_EQ(error_of([&] { apply_override(base, kLead, drop, w.window, w.roster, {}, w.rules); }),
            "ValidationFailed");
  const OverrideChange swap_nurse{OverrideKind::replace, {mar(4), M}, "m1", "p1"};
  // p1 already works the afternoon, so this is a rest violation.
  EXPECT_EQ(error_of([&] { apply_override(base, kLead, swap_nurse, w.window, w.roster, {}, w.rules); }),
            "ValidationFailed");
  const OverrideChange ghost{OverrideKind::unassign, {mar(4), M}, "p2", {}};
  EXPECT_EQ(error_of([&] { apply_override(base, kLead, ghost, w.window, w.roster, {}, w.rules); }), "NotAssigned");
  const OverrideChange stranger{OverrideKind::assign, {mar(4), M}, "zz", {}};
  EXPECT_EQ(error_of([&] { apply_override(base, kLead, stranger, w.window, w.roster, {}, w.rules); }),
            "UnknownWorker");
  const OverrideChange extra{OverrideKind::assign, {mar(8), M}, "r1", {}};
  EXPECT_EQ(error_of([&] { apply_override(base, Actor{"m1", Role::worker}, extra, w.window, w.roster, {}, w.rules); }),
            "Forbidden");
  EXPECT_EQ(error_of([&] { apply_override(base, kLead, extra, w.window, w.roster, {}, w.rules); }), "none");
}

class Release : public ::testing::Test {
 protected:
  Release() {
    config.min_staff = {0, 0};
    config.min_certified = {0, 0};
    rules = RuleSet::from(config);
    roster = build_roster({make_worker("ann", Qualification::aide, mar(2))});
    cycle = open_cycle(cycles, {2019, 3}, config);
  }

  SystemConfig config;
  RuleSet rules;
  Roster roster;
  CycleMap cycles;
  PlanningCycle cycle;
};

TEST_F(Release, NeedsADraftAndAPlanner) {
  EXPECT_EQ(error_of([&] { release(cycle, kLead, std::nullopt, roster, rules, mar(1)); }), "NoDraft");
  install_draft(cycle, ScheduleDraft({2019, 3}));
  EXPECT_EQ(error_of([&] { release(cycle, Actor{"ann", Role::worker}, std::nullopt, roster, rules, mar(1)); }),
            "Forbidden");
}

TEST_F(Release, OnTimeReleaseGrantsHonoredWishes) {
  cycle.wishes.push_back(make_wish("x1", "ann", mar(5), WishScope::morning));
  cycle.wishes.push_back(make_wish("x2", "ann", mar(6), WishScope::morning, WishStatus::withdrawn));
  install_draft(cycle, ScheduleDraft({2019, 3}));
  const ReleaseInfo info = release(cycle, kLead, cycle.draft_version, roster, rules, Date::from_ymd(2019, 2, 15));
  EXPECT_FALSE(info.late);
  EXPECT_TRUE(info.advisory.empty());
  EXPECT_EQ(cycle.phase, Phase::running);
  ASSERT_TRUE(cycle.schedule.has_value());
  EXPECT_EQ(cycle.schedule->status(), DraftStatus::finalized);
  EXPECT_EQ(cycle.find_wish("x1")->status, WishStatus::granted);
  EXPECT_EQ(cycle.find_wish("x2")->status, WishStatus::withdrawn);
  EXPECT_EQ(error_of([&] { release(cycle, kLead, std::nullopt, roster, rules, mar(1)); }), "PhaseClosed");
}

TEST_F(Release, LateReleaseCarriesAnAdvisory) {
  install_draft(cycle, ScheduleDraft({2019, 3}));
  const ReleaseInfo info = release(cycle, kLead, std::nullopt, roster, rules, Date::from_ymd(2019, 2, 20));
  EXPECT_TRUE(info.late);
  EXPECT_NE(info.advisory.find("2019-02-15"), std::string::npos);
}

TEST_F(Release, StaleVersionAndViolationsBlock) {
  install_draft(cycle, ScheduleDraft({2019, 3}));
  const int seen = cycle.draft_version;
  install_draft(cycle, ScheduleDraft({2019, 3}));
  EXPECT_EQ(error_of([&] { release(cycle, kLead, seen, roster, rules, mar(1)); }), "StaleSnapshot");

  ScheduleDraft bad({2019, 3});
  bad.assign({mar(9), M}, "ann", Provenance::override);  // ann's free weekend
  install_draft(cycle, bad);
  EXPECT_EQ(error_of([&] { release(cycle, kLead, std::nullopt, roster, rules, mar(1)); }),
            "HardViolationsPresent");
  EXPECT_EQ(cycle.phase, Phase::preparation);
}

TEST(Fairness, AlternatingWeekendsOverAprilAndMayHaveNoSpread) {
  const Roster roster = build_roster({make_worker("a", Qualification::aide, mar(2)),
                                      make_worker("b", Qualification::aide, mar(9)),
                                      make_worker("c", Qualification::aide, mar(2)),
                                      make_worker("d", Qualification::aide, mar(9))});
  std::vector<ScheduleDraft> months;
  for (YearMonth m : {YearMonth{2019, 4}, YearMonth{2019, 5}}) {
    ScheduleDraft s(m);
    for (Date d = m.first_day(); d <= m.last_day(); d = d.plus_days(1)) {
      for (const Worker& w : roster.workers()) {
        if (weekend_status(w, d) != WeekendStatus::free_weekend) s.assign({d, M}, w.id, Provenance::autofill);
      }
    }
    s.set_status(DraftStatus::finalized);
    months.push_back(s);
  }
  const FairnessReport r = fairness_report(months, roster, SystemConfig{});
  EXPECT_EQ(r.weekends, 8);
  EXPECT_EQ(r.spread, 0);
  EXPECT_EQ(r.min_free, 4);
  EXPECT_EQ(r.max_free, 4);
  for (const FairnessRow& row : r.rows) EXPECT_FALSE(row.flagged) << row.worker_id;

  // Working every weekend stands out.
  for (ScheduleDraft& s : months) {
    for (Date d = s.month().first_day(); d <= s.month().last_day(); d = d.plus_days(1)) {
      if (d.is_weekend()) s.assign({d, A}, "a", Provenance::override);
    }
  }
  const FairnessReport skewed = fairness_report(months, roster, SystemConfig{});
  EXPECT_EQ(skewed.spread, 4);
  EXPECT_TRUE(skewed.rows[0].flagged);
  EXPECT_FALSE(skewed.rows[1].flagged);
}

TEST(Fairness, NeedsAFinalizedSchedule) {
  const Roster roster = build_roster({make_worker("a", Qualification::aide, mar(2))});
  const std::vector<ScheduleDraft> drafts{ScheduleDraft({2019, 4})};
  EXPECT_EQ(error_of([&] { fairness_report(drafts, roster, SystemConfig{}); }), "EmptyWindow");
}

TEST(PriorLedger, CollectsHolidayWorkFromReleasedMonths) {
  SystemConfig config;
  CycleMap cycles;
  PlanningCycle& dec = open_cycle(cycles, {2019, 12}, config);
  ScheduleDraft s({2019, 12});
  s.assign({Date::from_ymd(2019, 12, 24), M}, "ann", Provenance::autofill);
  dec.schedule = s;
  dec.phase = Phase::running;
  const HolidayLedger ledger = prior_ledger(cycles, {2020, 1}, config);
  EXPECT_TRUE(ledger.flags("ann", 0, 2019).worked_first);
  EXPECT_FALSE(ledger.flags("ann", 0, 2019).worked_second);
  EXPECT_TRUE(prior_ledger(cycles, {2019, 12}, config).empty());
}

}  // namespace
}  // namespace selfsched
