#include "autofill_oracle.hpp"

#include <cmath>
#include <set>
#include <stdexcept>
#include <unordered_set>

namespace selfsched::oracle {

namespace {

constexpr int kM = 1;
constexpr int kA = 2;

bool free_weekend(const Worker& w, Date d) {
  const auto wd = d.weekday();
  if (wd != std::chrono::Saturday && wd != std::chrono::Sunday) return false;
  const Date sat = wd == std::chrono::Saturday ? d : d.plus_days(-1);
  int diff = sat - w.weekend_parity_anchor;
  while (diff < 0) diff += 14 * 1000;
  return (diff / 7) % 2 == 1;
}

bool covers(const Wish& w, Date d, int shift_bit) {
  if (w.date != d) return false;
  if (w.scope == WishScope::whole_day) return true;
  return (w.scope == WishScope::morning) == (shift_bit == kM);
}

struct WorkerState {
  int prev = 0;
  int run = 0;
  int flags = 0;  // 1: worked first holiday set, 2: worked second set
};

class Search {
 public:
  explicit Search(const testing::Instance& in) : in_(in), cfg_(in.rules.config) {
    workers_ = &in.roster.workers();
    days_ = in.window.size();
    const int n = static_cast<int>(workers_->size());
    allowed_.assign(days_, std::vector<int>(n, 0));
    required_.assign(days_, std::vector<int>(n, 0));
    holiday_.assign(days_, 0);

    const long rest = std::lround(cfg_.rest_hours_min * 60.0);
    const int m_start = cfg_.shift_times[0].start.minutes, m_end = cfg_.shift_times[0].end.minutes;
    const int a_start = cfg_.shift_times[1].start.minutes, a_end = cfg_.shift_times[1].end.minutes;
    same_day_ok_ = a_start - m_end >= rest;
    // Previous day's last shift end to today's first shift start.
    for (int last = 1; last <= 2; ++last) {
      for (int first = 1; first <= 2; ++first) {
        const int end = last == 1 ? m_end : a_end;
        const int start = first == 1 ? m_start : a_start;
        cross_ok_[last][first] = 24 * 60 + start - end >= rest;
      }
    }

    std::set<int> seasons;
    for (int d = 0; d < days_; ++d) {
      const Date date = in.window.days[d].date;
      if (cfg_.reciprocity_enabled && !cfg_.holiday_pairs.empty()) {
        const HolidayPair& pair = cfg_.holiday_pairs.front();
        auto in_set = [&](const std::vector<MonthDay>& set) {
          for (const MonthDay& md : set) {
            if (md.month == date.month() && md.day == date.day()) return true;
          }
          return false;
        };
        if (in_set(pair.first)) holiday_[d] = 1;
        if (in_set(pair.second)) holiday_[d] = 2;
        if (holiday_[d]) {
          seasons.insert(date.month() >= pair.first.front().month ? date.year() : date.year() - 1);
        }
      }
      for (int i = 0; i < n; ++i) {
        const Worker& w = (*workers_)[i];
        int mask = 0b1111;
        if (w.absences.count(date) || free_weekend(w, date)) mask = 0b0001;
        for (const Wish& wish : in.wishes) {
          if (wish.worker_id != w.id) continue;
          if (wish.status != WishStatus::active && wish.status != WishStatus::granted) continue;
          for (int o = 1; o <= 3; ++o) {
            if (((o & kM) && covers(wish, date, kM)) || ((o & kA) && covers(wish, date, kA))) mask &= ~(1 << o);
          }
        }
        if (!same_day_ok_) mask &= ~(1 << 3);
        allowed_[d][i] = mask;
      }
    }
    if (seasons.size() > 1) throw std::logic_error("oracle handles one holiday season per window");

    initial_.assign(n, WorkerState{});
    if (!seasons.empty()) {
      for (int i = 0; i < n; ++i) {
        const HolidayFlags f = in.rules.ledger.flags((*workers_)[i].id, 0, *seasons.begin());
        initial_[i].flags = (f.worked_first ? 1 : 0) | (f.worked_second ? 2 : 0);
      }
    }

    for (const Pin& pin : in.pins) {
      int day = -1;
      for (int d = 0; d < days_; ++d) {
        if (in.window.days[d].date == pin.slot.date) day = d;
      }
      int idx = -1;
      for (int i = 0; i < n; ++i) {
        if ((*workers_)[i].id == pin.worker_id) idx = i;
      }
      if (day < 0 || idx < 0) {
        impossible_ = true;
        continue;
      }
      required_[day][idx] |= pin.slot.shift == ShiftKind::morning ? kM : kA;
    }
    choice_.assign(days_, std::vector<int>(n, 0));
  }

  FeasibilityResult run() {
    FeasibilityResult r;
    if (!impossible_ && dfs(0, initial_)) {
      r.feasible = true;
      ScheduleDraft draft(YearMonth::of_date(in_.window.first()));
      for (int d = 0; d < days_; ++d) {
        for (std::size_t i = 0; i < workers_->size(); ++i) {
          const int o = choice_[d][i];
          const Date date = in_.window.days[d].date;
          if (o & kM) draft.assign({date, ShiftKind::morning}, (*workers_)[i].id, Provenance::autofill);
          if (o & kA) draft.assign({date, ShiftKind::afternoon}, (*workers_)[i].id, Provenance::autofill);
        }
      }
      r.witness = std::move(draft);
    }
    r.states = visited_;
    return r;
  }

 private:
  bool certified(const Worker& w) const {
    return w.qualification == Qualification::certified_nurse ||
           (cfg_.apprenticeship_counts_as_certified && w.qualification == Qualification::one_year_apprenticeship);
  }

  std::uint64_t encode(int day, const std::vector<WorkerState>& s) const {
    std::uint64_t k = static_cast<std::uint64_t>(day);
    for (const WorkerState& w : s) k = (k << 7) | (w.prev << 5) | (w.run << 2) | w.flags;
    return k;
  }

  /// Successor of one worker's state under option o, or nothing if illegal.
  std::optional<WorkerState> step(int day, int i, const WorkerState& s, int o) const {
    if (!(allowed_[day][i] & (1 << o))) return std::nullopt;
    if ((o & required_[day][i]) != required_[day][i]) return std::nullopt;
    WorkerState next = s;
    next.prev = o;
    if (o == 0) {
      next.run = 0;
      return next;
    }
    if (s.prev != 0) {
      const int last = (s.prev & kA) ? 2 : 1;
      const int first = (o & kM) ? 1 : 2;
      if (!cross_ok_[last][first]) return std::nullopt;
    }
    next.run = s.run + 1;
    if (next.run > (*workers_)[i].max_consecutive_days) return std::nullopt;
    if (holiday_[day] == 1) {
      if (s.flags & 2) return std::nullopt;
      next.flags |= 1;
    } else if (holiday_[day] == 2) {
      if (s.flags & 1) return std::nullopt;
      next.flags |= 2;
    }
    return next;
  }

  bool dfs(int day, const std::vector<WorkerState>& state) {
    if (day == days_) return true;
    const std::uint64_t key = encode(day, state);
    if (failed_.count(key)) return false;
    ++visited_;

    const int n = static_cast<int>(state.size());
    std::vector<std::vector<std::pair<int, WorkerState>>> moves(n);
    for (int i = 0; i < n; ++i) {
      for (int o = 0; o < 4; ++o) {
        if (auto next = step(day, i, state[i], o)) moves[i].push_back({o, *next});
      }
      if (moves[i].empty()) {
        failed_.insert(key);
        return false;
      }
    }

    std::vector<std::size_t> pick(n, 0);
    std::vector<WorkerState> next(n);
    while (true) {
      int staff[3] = {0, 0, 0}, cert[3] = {0, 0, 0};
      for (int i = 0; i < n; ++i) {
        const int o = moves[i][pick[i]].first;
        for (int bit : {kM, kA}) {
          if (o & bit) {
            ++staff[bit];
            if (certified((*workers_)[i])) ++cert[bit];
          }
        }
      }
      const bool covered = staff[kM] >= cfg_.min_staff[0] && staff[kA] >= cfg_.min_staff[1] &&
                           cert[kM] >= cfg_.min_certified[0] && cert[kA] >= cfg_.min_certified[1];
      if (covered) {
        for (int i = 0; i < n; ++i) {
          next[i] = moves[i][pick[i]].second;
          choice_[day][i] = moves[i][pick[i]].first;
        }
        if (dfs(day + 1, next)) return true;
      }
      int i = 0;
      while (i < n && ++pick[i] == moves[i].size()) pick[i++] = 0;
      if (i == n) break;
    }
    failed_.insert(key);
    return false;
  }

  const testing::Instance& in_;
  const SystemConfig& cfg_;
  const std::vector<Worker>* workers_ = nullptr;
  int days_ = 0;
  std::vector<std::vector<int>> allowed_;
  std::vector<std::vector<int>> required_;
  std::vector<int> holiday_;
  std::vector<WorkerState> initial_;
  bool same_day_ok_ = false;
  bool cross_ok_[3][3] = {};
  bool impossible_ = false;
  std::vector<std::vector<int>> choice_;
  std::unordered_set<std::uint64_t> failed_;
  long visited_ = 0;
};

}  // namespace

FeasibilityResult exhaustive_feasibility(const testing::Instance& instance) {
  if (instance.rules.config.rest_hours_min >= 24.0) throw std::logic_error("oracle assumes rest below a day");
  return Search(instance).run();
}

}  // namespace selfsched::oracle
