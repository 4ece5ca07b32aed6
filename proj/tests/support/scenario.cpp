#include "scenario.hpp"

#include "instances.hpp"
#include "selfsched/errors.hpp"

namespace selfsched::testing {

namespace {

int uniform(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

template <class F>
void attempt(F&& f) {
  try {
    f();
  } catch (const PlanningError&) {
  }
}

}  // namespace

Clock stepping_clock(std::chrono::system_clock::time_point start) {
  auto now = std::make_shared<std::chrono::system_clock::time_point>(start);
  return [now] {
    *now += std::chrono::minutes(1);
    return *now;
  };
}

std::chrono::system_clock::time_point at(int year, unsigned month, unsigned day, int hour) {
  return std::chrono::sys_days(std::chrono::year_month_day(std::chrono::year(year), std::chrono::month(month),
                                                           std::chrono::day(day))) +
         std::chrono::hours(hour);
}

std::string Scenario::token_of(const std::string& id) const {
  for (const UserToken& u : users) {
    if (u.actor.id == id) return u.token;
  }
  return {};
}

Scenario random_wish_scenario(std::mt19937_64& rng) {
  Scenario s;
  const int n = uniform(rng, 4, 8);
  s.config.min_staff = {uniform(rng, 1, n / 2), uniform(rng, 1, n / 2)};
  s.config.min_certified = {uniform(rng, 0, 1), uniform(rng, 0, 1)};
  s.config.node_budget = 20000;
  s.config.priority_enabled = uniform(rng, 0, 3) == 0;
  s.service = std::make_unique<PlanningService>(s.config, EventLog(), stepping_clock(at(2019, 2, 1)));

  std::vector<Worker> workers;
  for (int i = 0; i < n; ++i) {
    const std::string id = "w" + std::to_string(i + 1);
    const Qualification q = uniform(rng, 0, 1) == 0 ? Qualification::certified_nurse : Qualification::aide;
    workers.push_back(make_worker(id, q, Date::from_ymd(2019, 3, uniform(rng, 0, 1) == 0 ? 2 : 9)));
    s.worker_ids.push_back(id);
    s.users.push_back({"tok-" + id, Actor{id, Role::worker}});
  }
  s.users.push_back({"tok-lead", s.planner});
  s.service->import_roster(s.planner, workers);
  s.service->open_cycle(s.planner, s.month);

  const int attempts = uniform(rng, 5, 40);
  // Crowding wishes onto a few days makes conflicts likely.
  const int hot = uniform(rng, 1, 4);
  for (int k = 0; k < attempts; ++k) {
    const Actor who{s.worker_ids[static_cast<std::size_t>(uniform(rng, 0, n - 1))], Role::worker};
    const Date date = Date::from_ymd(2019, 3, static_cast<unsigned>(uniform(rng, 0, 2) == 0 ? uniform(rng, 1, 31)
                                                                                           : 10 + uniform(rng, 0, hot)));
    const auto scope = static_cast<WishScope>(uniform(rng, 0, 2));
    const int action = uniform(rng, 0, 9);
    attempt([&] {
      if (action == 0) {
        s.service->planner_enter_wish(s.planner, s.month, who.id, date, scope);
      } else if (action == 1) {
        const auto state = s.service->snapshot();
        const auto& wishes = state->cycle(s.month).wishes;
        if (wishes.empty()) return;
        const Wish& w = wishes[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(wishes.size()) - 1))];
        s.service->withdraw_wishes(Actor{w.worker_id, Role::worker}, s.month, {w.id});
      } else {
        s.service->submit_wish(who, s.month, date, scope, s.config.priority_enabled && action == 2);
      }
    });
  }
  return s;
}

void run_full_cycle(Scenario& s, std::mt19937_64& rng) {
  auto& svc = *s.service;
  const int n = static_cast<int>(s.worker_ids.size());
  auto pick = [&] { return s.worker_ids[static_cast<std::size_t>(uniform(rng, 0, n - 1))]; };

  svc.detect(s.planner, s.month);
  AutofillOptions options;
  options.acknowledge_conflicts = true;
  options.improve = uniform(rng, 0, 1) == 0;
  bool drafted = false;
  attempt([&] { drafted = std::holds_alternative<ScheduleDraft>(svc.autofill(s.planner, s.month, options)); });
  if (!drafted) return;

  const Date day = Date::from_ymd(2019, 3, static_cast<unsigned>(uniform(rng, 1, 31)));
  attempt([&] {
    svc.apply_override(s.planner, s.month, OverrideChange{OverrideKind::assign, {day, ShiftKind::morning}, pick(), {}});
  });
  attempt([&] { svc.release(s.planner, s.month); });

  const auto state = svc.snapshot();
  const ScheduleDraft* sched = current_schedule(state->cycle(s.month));
  if (!sched || !state->cycle(s.month).schedule) return;

  for (int k = 0; k < 6; ++k) {
    const std::string a = pick(), b = pick();
    const auto sa = sched->slots_of(a), sb = sched->slots_of(b);
    if (a == b || sa.empty() || sb.empty()) continue;
    const ShiftSlot give = sa[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(sa.size()) - 1))];
    const ShiftSlot take = sb[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(sb.size()) - 1))];
    attempt([&] {
      const SwapProposal p = svc.propose_swap(Actor{a, Role::worker}, s.month, b, give, take);
      if (uniform(rng, 0, 1) == 0) {
        svc.accept_swap(Actor{b, Role::worker}, p.id);
      } else {
        svc.reject_swap(Actor{b, Role::worker}, p.id);
      }
    });
  }
  for (int k = 0; k < 4; ++k) {
    const std::string absent = pick(), volunteer = pick();
    const auto slots = svc.snapshot()->cycle(s.month).schedule->slots_of(absent);
    if (slots.empty()) continue;
    attempt([&] {
      svc.record_stand_in(Actor{volunteer, Role::worker}, s.month, absent, volunteer,
                          slots[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(slots.size()) - 1))]);
    });
  }
  attempt([&] { svc.give_kudos(Actor{pick(), Role::worker}, pick()); });
  attempt([&] { svc.advance_phase(s.planner, s.month); });
}

}  // namespace selfsched::testing
