// Admin command line for the self-scheduling service.

#include <chrono>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "selfsched/codec.hpp"
#include "selfsched/export.hpp"
#include "selfsched/http_api.hpp"
#include "selfsched/roster_io.hpp"
#include "selfsched/service.hpp"
#include "selfsched/stats.hpp"

namespace fs = std::filesystem;
using namespace selfsched;
using nlohmann::json;

namespace {

struct Globals {
  std::string config = "selfsched.json";
  std::string log_path = "events.jsonl";
  std::string as;
  std::string now;
};

ServiceSettings settings_or_default(const Globals& g) {
  if (fs::exists(g.config)) return load_settings(g.config);
  return ServiceSettings{};
}

Actor resolve_actor(const Globals& g, const ServiceSettings& s) {
  if (g.as.empty()) {
    for (const UserToken& u : s.users) {
      if (u.actor.is_planner()) return u.actor;
    }
    throw PlanningError(ErrorCode::Unauthenticated, "no --as given and no planner configured");
  }
  for (const UserToken& u : s.users) {
    if (u.actor.id == g.as) return u.actor;
  }
  return Actor{g.as, Role::worker};
}

std::unique_ptr<PlanningService> open_service(const Globals& g, const ServiceSettings& s) {
  Clock clock;
  if (!g.now.empty()) {
    const auto fixed = parse_timestamp(g.now);
    clock = [fixed] { return fixed; };
  }
  return std::make_unique<PlanningService>(s.system, EventLog(g.log_path), clock);
}

void write_out(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw PlanningError(ErrorCode::IoError, "cannot write " + path);
  out << text;
}

Pin parse_pin(const std::string& text) {
  // date:shift:worker_id
  const auto a = text.find(':');
  const auto b = text.find(':', a == std::string::npos ? a : a + 1);
  if (a == std::string::npos || b == std::string::npos) {
    throw PlanningError(ErrorCode::InvalidField, "pin must be DATE:SHIFT:WORKER, got " + text);
  }
  return Pin{parse_slot(text.substr(0, a), text.substr(a + 1, b - a - 1)), text.substr(b + 1)};
}

HttpServer* g_server = nullptr;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"selfsched: self-scheduling for shift teams"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config, "service config file")->capture_default_str();
  app.add_option("--log-path", g.log_path, "event log (JSON lines)")->capture_default_str();
  app.add_option("--as", g.as, "acting user id");
  app.add_option("--now", g.now, "pin the clock (YYYY-MM-DD or ISO timestamp)");

  auto* init = app.add_subcommand("init", "write a default config and an empty log");
  std::string planner_id = "planner";
  std::string planner_token;
  bool force = false;
  init->add_option("--planner", planner_id, "planner user id")->capture_default_str();
  init->add_option("--token", planner_token, "planner bearer token");
  init->add_flag("--force", force, "overwrite an existing config");

  auto* import = app.add_subcommand("import-roster", "replace the roster from CSV");
  std::string roster_file, absences_file;
  import->add_option("roster", roster_file, "roster CSV")->required()->check(CLI::ExistingFile);
  import->add_option("--absences", absences_file, "absences CSV")->check(CLI::ExistingFile);

  auto* open = app.add_subcommand("open-cycle", "open a planning month");
  std::string month;
  int quota = -1;
  open->add_option("month", month, "YYYY-MM")->required();
  open->add_option("--quota", quota, "wish quota for this month");

  auto* detect = app.add_subcommand("detect", "recompute conflicts and print them");
  detect->add_option("month", month, "YYYY-MM")->required();

  auto* fill = app.add_subcommand("autofill", "compute a draft schedule");
  std::vector<std::string> pins;
  long budget = 0;
  bool acknowledge = false;
  fill->add_option("month", month, "YYYY-MM")->required();
  fill->add_option("--pin", pins, "fixed assignment DATE:SHIFT:WORKER");
  fill->add_option("--budget", budget, "search node budget");
  fill->add_flag("--acknowledge-conflicts", acknowledge, "run with open conflicts");

  auto* rel = app.add_subcommand("release", "publish the current draft");
  int expected_version = -1;
  rel->add_option("month", month, "YYYY-MM")->required();
  rel->add_option("--expected-version", expected_version, "draft version the planner reviewed");

  auto* exp = app.add_subcommand("export", "export a schedule");
  std::string format = "csv", worker_id, out_path;
  exp->add_option("month", month, "YYYY-MM")->required();
  exp->add_option("--format", format, "csv, ics or json")->check(CLI::IsMember({"csv", "ics", "json"}))->capture_default_str();
  exp->add_option("--worker", worker_id, "worker for ics export");
  exp->add_option("-o,--out", out_path, "output file (default stdout)");

  auto* stats = app.add_subcommand("stats", "wish usage statistics from the log");
  std::string from, to, reminders_month;
  std::vector<std::string> exclude;
  stats->add_option("--from", from, "first month");
  stats->add_option("--to", to, "last month");
  stats->add_option("--exclude", exclude, "months to leave out");
  stats->add_option("--reminders", reminders_month, "list workers without wishes in this month");

  auto* serve = app.add_subcommand("serve", "run the HTTP API");
  std::string host;
  int port = -1;
  serve->add_option("--host", host, "listen address");
  serve->add_option("--port", port, "listen port");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*init) {
      if (fs::exists(g.config) && !force) {
        throw PlanningError(ErrorCode::IoError, g.config + " exists (use --force)");
      }
      if (planner_token.empty()) planner_token = "change-me-" + planner_id;
      json cfg = config_to_json(SystemConfig{});
      cfg["users"] = json::array({{{"id", planner_id}, {"role", "planner"}, {"token", planner_token}}});
      cfg["host"] = "127.0.0.1";
      cfg["port"] = 8080;
      write_out(cfg.dump(2) + "\n", g.config);
      if (!fs::exists(g.log_path)) write_out("", g.log_path);
      std::cout << "wrote " << g.config << " and " << g.log_path << "\n";
      return 0;
    }

    const ServiceSettings settings = settings_or_default(g);
    auto service = open_service(g, settings);

    if (*serve) {
      ApiRouter router(*service, settings.users);
      HttpServer server(router);
      g_server = &server;
      std::signal(SIGINT, [](int) {
        if (g_server) g_server->stop();
      });
      const std::string h = host.empty() ? settings.host : host;
      const int p = port < 0 ? settings.port : port;
      std::cout << "listening on " << h << ":" << p << std::endl;
      server.listen(h, p);
      g_server = nullptr;
      return 0;
    }

    if (*stats) {
      StatsQuery q;
      if (!from.empty()) q.from = YearMonth::parse(from);
      if (!to.empty()) q.to = YearMonth::parse(to);
      for (const auto& m : exclude) q.exclude.insert(YearMonth::parse(m));
      const auto events = service->events();
      json out = to_json_value(stats_report(events, q));
      if (!reminders_month.empty()) {
        out["reminders"] = wish_reminders(*service->snapshot(), YearMonth::parse(reminders_month));
      }
      std::cout << out.dump(2) << "\n";
      return 0;
    }

    const Actor actor = resolve_actor(g, settings);

    if (*import) {
      std::ifstream in(roster_file);
      std::vector<Worker> workers = parse_roster_csv(in);
      if (!absences_file.empty()) {
        std::ifstream ain(absences_file);
        const auto absences = parse_absences_csv(ain);
        workers = with_absences(build_roster(std::move(workers)), absences).workers();
      }
      const Event e = service->import_roster(actor, std::move(workers));
      std::cout << "seq " << e.seq << ": imported " << service->snapshot()->roster.size() << " workers\n";
    } else if (*open) {
      std::optional<int> q;
      if (quota >= 0) q = quota;
      const Event e = service->open_cycle(actor, YearMonth::parse(month), q);
      std::cout << "seq " << e.seq << ": opened " << month << "\n";
    } else if (*detect) {
      const auto conflicts = service->detect(actor, YearMonth::parse(month));
      std::cout << json(conflicts).dump(2) << "\n";
    } else if (*fill) {
      AutofillOptions options;
      for (const auto& p : pins) options.pins.push_back(parse_pin(p));
      if (budget > 0) options.node_budget = budget;
      options.acknowledge_conflicts = acknowledge;
      const AutofillResult result = service->autofill(actor, YearMonth::parse(month), options);
      if (const auto* report = std::get_if<InfeasibilityReport>(&result)) {
        std::cerr << json(*report).dump(2) << "\n";
        return 2;
      }
      std::cout << schedule_matrix_csv(std::get<ScheduleDraft>(result), service->snapshot()->roster);
    } else if (*rel) {
      std::optional<int> v;
      if (expected_version >= 0) v = expected_version;
      std::cout << json(service->release(actor, YearMonth::parse(month), v)).dump(2) << "\n";
    } else if (*exp) {
      auto state = service->snapshot();
      const PlanningCycle& cycle = state->cycle(YearMonth::parse(month));
      const ScheduleDraft* sched = cycle.schedule ? &*cycle.schedule : (cycle.draft ? &*cycle.draft : nullptr);
      if (!sched) throw PlanningError(ErrorCode::NoDraft, "no schedule for " + month);
      if (format == "csv") {
        write_out(schedule_matrix_csv(*sched, state->roster), out_path);
      } else if (format == "json") {
        write_out(json(*sched).dump(2) + "\n", out_path);
      } else {
        const std::string who = worker_id.empty() ? actor.id : worker_id;
        std::string stamp = iso_timestamp(service->now());
        std::erase_if(stamp, [](char c) { return c == '-' || c == ':'; });
        write_out(worker_icalendar(*sched, state->roster.at(who), state->config, stamp), out_path);
      }
    }
    return 0;
  } catch (const PlanningError& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (!e.detail().is_null()) std::cerr << e.detail().dump(2) << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
