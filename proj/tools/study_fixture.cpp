#include "study_fixture.hpp"

#include <array>
#include <fstream>
#include <map>
#include <memory>
#include <set>
#include <sstream>

#include "selfsched/codec.hpp"
#include "selfsched/service.hpp"

namespace selfsched::study {

namespace {

constexpr int kMonths = 11;  // 2019-03 .. 2020-01
constexpr int kSubmitters = 11;

// Wishes per submitting worker (rows w01..w11) and month (columns).
constexpr std::array<std::array<int, kMonths>, kSubmitters> kCounts = {{
    {2, 1, 2, 0, 2, 1, 0, 1, 10, 5, 2},
    {1, 1, 1, 1, 1, 1, 0, 1, 4, 4, 0},
    {1, 0, 1, 1, 1, 1, 0, 0, 4, 4, 0},
    {0, 1, 1, 0, 2, 1, 0, 1, 3, 3, 0},
    {1, 1, 1, 1, 1, 0, 1, 0, 3, 2, 1},
    {0, 0, 1, 0, 0, 1, 0, 1, 2, 2, 1},
    {0, 1, 0, 1, 0, 0, 0, 0, 2, 2, 1},
    {0, 0, 0, 0, 1, 1, 1, 0, 2, 1, 1},
    {1, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0},
    {0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 0},
    {0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0},
}};

// Morning and afternoon wishes per month; the rest are whole-day.
constexpr std::array<int, kMonths> kMorning = {1, 0, 1, 0, 1, 1, 0, 1, 13, 1, 0};
constexpr std::array<int, kMonths> kAfternoon = {2, 1, 2, 1, 2, 2, 1, 2, 4, 4, 3};

// Month quota before the increase to five.
constexpr std::array<int, kMonths> kQuota = {3, 3, 5, 5, 5, 5, 5, 5, 5, 5, 5};

// w01 asked the lead to enter half of her November wishes.
constexpr int kPlannerEnteredFrom = 5;

struct HolidayWish {
  int worker;
  int round;
  unsigned day;
};

// December whole-day wishes on the three holiday dates.
constexpr std::array<HolidayWish, 11> kHolidayWishes = {{
    {0, 0, 24}, {0, 1, 25}, {0, 2, 31},
    {1, 0, 24}, {1, 1, 25},
    {2, 0, 25}, {2, 1, 31},
    {3, 0, 24},
    {4, 0, 31},
    {5, 0, 24},
    {6, 0, 25},
}};

const char* const kNames[16] = {"Anna",  "Bernd", "Carla", "Deniz", "Elif",  "Frank", "Greta", "Hanna",
                                "Ilse",  "Jonas", "Karin", "Lena",  "Mehmet", "Nora", "Olga",  "Paul"};

std::string worker_id(int i) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "w%02d", i + 1);
  return buf;
}

std::vector<Worker> roster() {
  std::vector<Worker> out;
  const std::set<int> certified = {0, 2, 4, 8, 11, 13};
  for (int i = 0; i < 16; ++i) {
    Worker w;
    w.id = worker_id(i);
    w.display_name = kNames[i];
    w.qualification = certified.contains(i) ? Qualification::certified_nurse
                      : i % 5 == 1          ? Qualification::apprentice
                                            : Qualification::aide;
    w.is_leader = i == 0;
    w.contract_hours_per_week = i % 4 == 3 ? 30.0 : 38.5;
    w.weekend_parity_anchor = Date::from_ymd(2019, 3, i % 2 == 0 ? 2 : 9);
    w.max_consecutive_days = 6;
    w.shift_preference = i % 3 == 0 ? ShiftPreference::morning
                         : i % 3 == 1 ? ShiftPreference::afternoon
                                      : ShiftPreference::none;
    out.push_back(std::move(w));
  }
  return out;
}

YearMonth month_at(int m) {
  YearMonth ym{2019, 3};
  for (int i = 0; i < m; ++i) ym = ym.next();
  return ym;
}

class ScriptClock {
 public:
  explicit ScriptClock(std::chrono::system_clock::time_point t) : now_(std::make_shared<std::chrono::system_clock::time_point>(t)) {}
  Clock clock() const {
    auto now = now_;
    return [now] { return *now; };
  }
  void set(Date d, int hour) {
    *now_ = std::chrono::sys_days(d.ymd()) + std::chrono::hours(hour);
  }
  void tick(int minutes) { *now_ += std::chrono::minutes(minutes); }

 private:
  std::shared_ptr<std::chrono::system_clock::time_point> now_;
};

}  // namespace

SystemConfig fixture_config() {
  SystemConfig c;
  c.wish_quota = 5;
  c.priority_enabled = false;
  for (const char* d : {"2019-04-19", "2019-04-22", "2019-05-01", "2019-05-30", "2019-06-10", "2019-06-20",
                        "2019-10-03", "2019-11-01", "2019-12-24", "2019-12-25", "2019-12-26", "2019-12-31",
                        "2020-01-01", "2020-01-06"}) {
    c.holidays.push_back(Date::parse_iso(d));
  }
  return c;
}

std::string build_event_log() {
  const SystemConfig config = fixture_config();
  ScriptClock clock(std::chrono::system_clock::time_point{});
  clock.set(Date::from_ymd(2019, 1, 21), 9);
  PlanningService service(config, EventLog(), clock.clock());

  const Actor lead{"lead", Role::planner};
  service.import_roster(lead, roster());
  const std::set<Date> holidays(config.holidays.begin(), config.holidays.end());

  for (int m = 0; m < kMonths; ++m) {
    const YearMonth month = month_at(m);
    clock.set(month.first_day().plus_days(-35), 8);
    service.open_cycle(lead, month, kQuota[m] == config.wish_quota ? std::nullopt : std::optional<int>(kQuota[m]));

    std::vector<Date> weekdays;
    for (Date d = month.first_day(); d <= month.last_day(); d = d.plus_days(1)) {
      if (!d.is_weekend() && !holidays.contains(d)) weekdays.push_back(d);
    }

    // Interleave by round so each worker's first wish comes before anyone's second.
    struct Item {
      int worker;
      int round;
    };
    std::vector<Item> items;
    for (int r = 0; r < 10; ++r) {
      for (int w = 0; w < kSubmitters; ++w) {
        if (kCounts[w][m] > r) items.push_back({w, r});
      }
    }

    std::map<std::pair<int, int>, Date> fixed;
    if (month == YearMonth{2019, 12}) {
      for (const HolidayWish& h : kHolidayWishes) fixed[{h.worker, h.round}] = Date::from_ymd(2019, 12, h.day);
    }
    const int free_items = static_cast<int>(items.size() - fixed.size());
    std::vector<WishScope> pool(free_items - kMorning[m] - kAfternoon[m], WishScope::whole_day);
    pool.insert(pool.end(), kAfternoon[m], WishScope::afternoon);
    pool.insert(pool.end(), kMorning[m], WishScope::morning);

    std::map<int, std::set<Date>> used;
    std::size_t next_scope = 0;
    clock.set(month.first_day().plus_days(-30), 7);
    for (const Item& item : items) {
      WishScope scope = WishScope::whole_day;
      Date date;
      if (auto it = fixed.find({item.worker, item.round}); it != fixed.end()) {
        date = it->second;
      } else {
        scope = pool.at(next_scope++);
        const std::size_t n = weekdays.size();
        std::size_t k = (item.worker * 5 + item.round * 3 + m) % n;
        while (used[item.worker].contains(weekdays[k])) k = (k + 1) % n;
        date = weekdays[k];
      }
      used[item.worker].insert(date);
      clock.tick(47);
      const Actor self{worker_id(item.worker), Role::worker};
      if (month == YearMonth{2019, 11} && item.worker == 0 && item.round >= kPlannerEnteredFrom) {
        service.planner_enter_wish(lead, month, self.id, date, scope);
      } else {
        service.submit_wish(self, month, date, scope);
      }
    }

    // One change of mind in July; the submission still counts.
    if (month == YearMonth{2019, 7}) {
      clock.tick(180);
      const auto state = service.snapshot();
      for (const Wish& w : state->cycle(month).wishes) {
        if (w.worker_id == "w04") {
          service.withdraw_wishes(Actor{"w04", Role::worker}, month, {w.id});
          break;
        }
      }
    }
    clock.tick(240);
    service.detect(lead, month);
  }

  std::ostringstream out;
  write_events(out, service.events());
  return out.str();
}

void write_fixture(const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::ofstream events(dir / "events.jsonl", std::ios::binary);
  events << build_event_log();
  std::ofstream cfg(dir / "config.json", std::ios::binary);
  cfg << config_to_json(fixture_config()).dump(2) << "\n";
  if (!events || !cfg) throw PlanningError(ErrorCode::IoError, "cannot write fixture into " + dir.string());
}

}  // namespace selfsched::study
