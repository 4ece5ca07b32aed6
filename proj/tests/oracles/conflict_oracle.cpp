#include "conflict_oracle.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <tuple>

namespace selfsched::oracle {

namespace {

bool on_free_weekend(const Worker& w, Date d) {
  const auto wd = d.weekday();
  if (wd != std::chrono::Saturday && wd != std::chrono::Sunday) return false;
  const Date sat = wd == std::chrono::Saturday ? d : d.plus_days(-1);
  int diff = sat - w.weekend_parity_anchor;
  // Normalise to a non-negative multiple of 14 before testing parity.
  while (diff < 0) diff += 14 * 1000;
  return (diff / 7) % 2 == 1;
}

bool wish_covers(const Wish& w, const ShiftSlot& s) {
  if (w.date != s.date) return false;
  if (w.scope == WishScope::whole_day) return true;
  return (w.scope == WishScope::morning) == (s.shift == ShiftKind::morning);
}

struct Model {
  const testing::Instance& in;
  std::vector<const Wish*> pending;

  bool certified(const Worker& w) const {
    if (w.qualification == Qualification::certified_nurse) return true;
    return in.rules.config.apprenticeship_counts_as_certified &&
           w.qualification == Qualification::one_year_apprenticeship;
  }

  OracleSlot deficit(const ShiftSlot& s, unsigned withdrawn) const {
    int staff = 0, cert = 0;
    for (const Worker& w : in.roster.workers()) {
      if (w.absences.count(s.date) || on_free_weekend(w, s.date)) continue;
      bool wished = false;
      for (std::size_t i = 0; i < pending.size(); ++i) {
        if (withdrawn & (1u << i)) continue;
        if (pending[i]->worker_id == w.id && wish_covers(*pending[i], s)) wished = true;
      }
      if (wished) continue;
      ++staff;
      if (certified(w)) ++cert;
    }
    const int idx = s.shift == ShiftKind::morning ? 0 : 1;
    return {s, std::max(0, in.rules.config.min_staff[idx] - staff),
            std::max(0, in.rules.config.min_certified[idx] - cert)};
  }
};

using Key = std::tuple<std::string, Date, int, std::string>;

Key key_of(const Wish& w) {
  const int rank = w.scope == WishScope::morning ? 0 : w.scope == WishScope::afternoon ? 1 : 2;
  return {w.worker_id, w.date, rank, w.id};
}

int find(std::vector<int>& p, int x) {
  while (p[x] != x) x = p[x] = p[p[x]];
  return x;
}

}  // namespace

OracleDetection brute_force_conflicts(const testing::Instance& instance) {
  Model m{instance, {}};
  for (const Wish& w : instance.wishes) {
    if (w.status == WishStatus::active || w.status == WishStatus::in_conflict) m.pending.push_back(&w);
  }
  const std::size_t p = m.pending.size();

  std::vector<OracleSlot> deficient;
  for (const CalendarDay& day : instance.window.days) {
    for (ShiftKind k : {ShiftKind::morning, ShiftKind::afternoon}) {
      OracleSlot d = m.deficit({day.date, k}, 0);
      if (d.staff > 0 || d.certified > 0) deficient.push_back(d);
    }
  }

  std::vector<std::vector<std::size_t>> helpers(deficient.size());
  for (std::size_t s = 0; s < deficient.size(); ++s) {
    for (std::size_t i = 0; i < p; ++i) {
      if (!(m.deficit(deficient[s].slot, 1u << i) == deficient[s])) helpers[s].push_back(i);
    }
  }

  std::vector<int> parent(deficient.size());
  std::iota(parent.begin(), parent.end(), 0);
  for (std::size_t a = 0; a < deficient.size(); ++a) {
    for (std::size_t b = a + 1; b < deficient.size(); ++b) {
      for (std::size_t i : helpers[a]) {
        if (std::find(helpers[b].begin(), helpers[b].end(), i) != helpers[b].end()) {
          parent[find(parent, static_cast<int>(b))] = find(parent, static_cast<int>(a));
        }
      }
    }
  }

  OracleDetection out;
  std::map<int, std::vector<std::size_t>> groups;
  for (std::size_t s = 0; s < deficient.size(); ++s) {
    if (helpers[s].empty()) {
      out.uncovered.push_back(deficient[s]);
    } else {
      groups[find(parent, static_cast<int>(s))].push_back(s);
    }
  }
  std::vector<std::vector<std::size_t>> ordered;
  for (auto& [root, members] : groups) ordered.push_back(members);
  std::sort(ordered.begin(), ordered.end(),
            [&](const auto& a, const auto& b) { return deficient[a.front()].slot < deficient[b.front()].slot; });

  for (const auto& members : ordered) {
    OracleConflict c;
    std::vector<bool> involved(p, false);
    for (std::size_t s : members) {
      c.slots.push_back(deficient[s]);
      for (std::size_t i : helpers[s]) involved[i] = true;
    }
    for (std::size_t i = 0; i < p; ++i) {
      if (involved[i]) c.involved.push_back(m.pending[i]->id);
    }
    std::sort(c.involved.begin(), c.involved.end());

    std::vector<unsigned> feasible;
    for (unsigned mask = 0; mask < (1u << p); ++mask) {
      const bool clears = std::all_of(c.slots.begin(), c.slots.end(), [&](const OracleSlot& s) {
        const OracleSlot d = m.deficit(s.slot, mask);
        return d.staff == 0 && d.certified == 0;
      });
      if (clears) feasible.push_back(mask);
    }
    std::vector<std::vector<Key>> sets;
    for (unsigned mask : feasible) {
      const bool minimal = std::none_of(feasible.begin(), feasible.end(), [&](unsigned other) {
        return other != mask && (other & mask) == other;
      });
      if (!minimal) continue;
      std::vector<Key> keys;
      for (std::size_t i = 0; i < p; ++i) {
        if (mask & (1u << i)) keys.push_back(key_of(*m.pending[i]));
      }
      std::sort(keys.begin(), keys.end());
      sets.push_back(std::move(keys));
    }
    std::sort(sets.begin(), sets.end(), [](const auto& a, const auto& b) {
      if (a.size() != b.size()) return a.size() < b.size();
      return a < b;
    });
    for (const auto& keys : sets) {
      std::vector<std::string> ids;
      for (const Key& k : keys) ids.push_back(std::get<3>(k));
      c.solutions.push_back(std::move(ids));
    }
    out.conflicts.push_back(std::move(c));
  }
  return out;
}

}  // namespace selfsched::oracle
