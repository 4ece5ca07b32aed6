#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "selfsched/errors.hpp"
#include "selfsched/service.hpp"

namespace httplib {
class Server;
}

namespace selfsched {

struct ApiRequest {
  std::string method;
  std::string path;
  std::map<std::string, std::string> query;
  /// Raw Authorization header value ("Bearer <token>").
  std::string authorization;
  std::string body;
};

struct ApiResponse {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;

  nlohmann::json json() const { return nlohmann::json::parse(body); }
};

int http_status(ErrorCode code);

/// Transport-free request handling: authentication, routing, JSON in and
/// out. Error bodies look like {"error": {"code", "message", "detail"}}.
class ApiRouter {
 public:
  ApiRouter(PlanningService& service, std::vector<UserToken> users);

  ApiResponse handle(const ApiRequest& request);

 private:
  using Params = std::vector<std::string>;
  using Handler = ApiResponse (ApiRouter::*)(const Actor&, const Params&, const ApiRequest&);

  struct Route {
    std::string method;
    std::vector<std::string> segments;
    Handler handler;
  };

  Actor authenticate(const ApiRequest& request) const;

  ApiResponse open_cycle(const Actor&, const Params&, const ApiRequest&);
  ApiResponse get_cycle(const Actor&, const Params&, const ApiRequest&);
  ApiResponse post_wish(const Actor&, const Params&, const ApiRequest&);
  ApiResponse delete_wish(const Actor&, const Params&, const ApiRequest&);
  ApiResponse calendar(const Actor&, const Params&, const ApiRequest&);
  ApiResponse my_conflicts(const Actor&, const Params&, const ApiRequest&);
  ApiResponse conflict_withdrawal(const Actor&, const Params&, const ApiRequest&);
  ApiResponse detect(const Actor&, const Params&, const ApiRequest&);
  ApiResponse propose_swap(const Actor&, const Params&, const ApiRequest&);
  ApiResponse accept_swap(const Actor&, const Params&, const ApiRequest&);
  ApiResponse reject_swap(const Actor&, const Params&, const ApiRequest&);
  ApiResponse stand_in(const Actor&, const Params&, const ApiRequest&);
  ApiResponse autofill(const Actor&, const Params&, const ApiRequest&);
  ApiResponse override_schedule(const Actor&, const Params&, const ApiRequest&);
  ApiResponse release(const Actor&, const Params&, const ApiRequest&);
  ApiResponse advance(const Actor&, const Params&, const ApiRequest&);
  ApiResponse schedule(const Actor&, const Params&, const ApiRequest&);
  ApiResponse usage(const Actor&, const Params&, const ApiRequest&);
  ApiResponse fairness(const Actor&, const Params&, const ApiRequest&);
  ApiResponse reminders(const Actor&, const Params&, const ApiRequest&);
  ApiResponse my_hours(const Actor&, const Params&, const ApiRequest&);
  ApiResponse my_ics(const Actor&, const Params&, const ApiRequest&);
  ApiResponse kudos(const Actor&, const Params&, const ApiRequest&);
  ApiResponse wish_examples(const Actor&, const Params&, const ApiRequest&);

  PlanningService& service_;
  std::map<std::string, Actor> tokens_;
  std::vector<Route> routes_;
};

/// httplib front end. start() binds and serves on a background thread.
class HttpServer {
 public:
  explicit HttpServer(ApiRouter& router);
  ~HttpServer();

  /// Returns the bound port (useful with port 0). Throws IoError.
  int start(const std::string& host, int port);
  /// Blocks in the calling thread until stop().
  void listen(const std::string& host, int port);
  void stop();

 private:
  void install();

  ApiRouter& router_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
};

}  // namespace selfsched
