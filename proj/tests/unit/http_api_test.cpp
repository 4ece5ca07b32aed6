#include <gtest/gtest.h>

#include <httplib.h>

#include "selfsched/http_api.hpp"
#include "instances.hpp"
#include "scenario.hpp"

namespace selfsched {
namespace {

using nlohmann::json;
using testing::make_worker;

Date mar(unsigned d) { return Date::from_ymd(2019, 3, d); }

class Api : public ::testing::Test {
 protected:
  Api() { reset({3, 1}); }

  void reset(std::array<int, 2> staff) {
    config.min_staff = staff;
    config.min_certified = {0, 0};
    service = std::make_unique<PlanningService>(config, EventLog(), testing::stepping_clock(testing::at(2019, 2, 1)));
    service->import_roster(lead, {make_worker("ann", Qualification::certified_nurse, mar(2)),
                                  make_worker("bob", Qualification::aide, mar(9)),
                                  make_worker("cid", Qualification::aide, mar(2)),
                                  make_worker("dee", Qualification::aide, mar(9))});
    users = {{"tok-lead", lead},
             {"tok-ann", Actor{"ann", Role::worker}},
             {"tok-bob", Actor{"bob", Role::worker}},
             {"tok-cid", Actor{"cid", Role::worker}}};
    router = std::make_unique<ApiRouter>(*service, users);
  }

  ApiResponse call(const std::string& method, const std::string& path, const std::string& token,
                   const json& body = nullptr, std::map<std::string, std::string> query = {}) {
    ApiRequest r;
    r.method = method;
    r.path = path;
    r.query = std::move(query);
    if (!token.empty()) r.authorization = "Bearer " + token;
    if (!body.is_null()) r.body = body.dump();
    return router->handle(r);
  }

  void open_march() { ASSERT_EQ(call("POST", "/cycles", "tok-lead", {{"month", "2019-03"}}).status, 201); }

  std::string wish(const std::string& token, const std::string& date, const std::string& scope) {
    const ApiResponse r = call("POST", "/cycles/2019-03/wishes", token, {{"date", date}, {"scope", scope}});
    EXPECT_EQ(r.status, 201) << r.body;
    return r.json().value("wish_id", "");
  }

  SystemConfig config;
  Actor lead{"lead", Role::planner};
  std::unique_ptr<PlanningService> service;
  std::vector<UserToken> users;
  std::unique_ptr<ApiRouter> router;
};

TEST_F(Api, RequiresAValidBearerToken) {
  EXPECT_EQ(call("GET", "/wish-examples", "").status, 401);
  const ApiResponse bad = call("GET", "/wish-examples", "nope");
  EXPECT_EQ(bad.status, 401);
  EXPECT_EQ(bad.json()["error"]["code"], "Unauthenticated");
  EXPECT_EQ(call("GET", "/wish-examples", "tok-ann").status, 200);
}

TEST_F(Api, RoutingErrors) {
  EXPECT_EQ(call("GET", "/nowhere", "tok-lead").status, 404);
  EXPECT_EQ(call("GET", "/cycles/2019-04", "tok-lead").status, 404);
  EXPECT_EQ(call("PUT", "/cycles", "tok-lead").status, 405);
  EXPECT_EQ(call("GET", "/cycles/2019-13", "tok-lead").status, 400);
  ApiRequest raw;
  raw.method = "POST";
  raw.path = "/cycles";
  raw.authorization = "Bearer tok-lead";
  raw.body = "{not json";
  EXPECT_EQ(router->handle(raw).status, 400);
}

TEST_F(Api, PlannerOnlyEndpoints) {
  const ApiResponse r = call("POST", "/cycles", "tok-ann", {{"month", "2019-03"}});
  EXPECT_EQ(r.status, 403);
  EXPECT_EQ(r.json()["error"]["code"], "Forbidden");
  open_march();
  EXPECT_EQ(call("POST", "/cycles", "tok-lead", {{"month", "2019-03"}}).status, 409);
  EXPECT_EQ(call("POST", "/cycles/2019-03/release", "tok-ann").status, 403);
  EXPECT_EQ(call("POST", "/cycles/2019-03/autofill", "tok-bob").status, 403);
  EXPECT_EQ(call("GET", "/reports/usage", "tok-ann").status, 403);
}

TEST_F(Api, QuotaExceededCarriesStructuredDetail) {
  open_march();
  for (unsigned d : {4u, 5u, 6u, 7u, 8u}) wish("tok-cid", Date::from_ymd(2019, 3, d).iso(), "whole_day");
  const ApiResponse r =
      call("POST", "/cycles/2019-03/wishes", "tok-cid", {{"date", "2019-03-11"}, {"scope", "morning"}});
  EXPECT_EQ(r.status, 422);
  const json e = r.json()["error"];
  EXPECT_EQ(e["code"], "QuotaExceeded");
  EXPECT_EQ(e["detail"]["quota"], 5);
  EXPECT_EQ(e["detail"]["remaining"], 0);
  EXPECT_FALSE(e["message"].get<std::string>().empty());

  const ApiResponse bad_date =
      call("POST", "/cycles/2019-03/wishes", "tok-ann", {{"date", "2019-02-30"}, {"scope", "morning"}});
  EXPECT_EQ(bad_date.status, 400);
  const ApiResponse weekend =
      call("POST", "/cycles/2019-03/wishes", "tok-ann", {{"date", "2019-03-02"}, {"scope", "whole_day"}});
  EXPECT_EQ(weekend.status, 422);
  EXPECT_EQ(weekend.json()["error"]["code"], "WholeDayOnWeekend");
}

TEST_F(Api, WithdrawByDelete) {
  open_march();
  const std::string id = wish("tok-ann", "2019-03-05", "morning");
  EXPECT_EQ(call("DELETE", "/wishes/" + id, "tok-bob").status, 403);
  const ApiResponse r = call("DELETE", "/wishes/" + id, "tok-ann");
  EXPECT_EQ(r.status, 200);
  EXPECT_EQ(r.json()["status"], "withdrawn");
  EXPECT_EQ(call("DELETE", "/wishes/" + id, "tok-ann").status, 409);
  EXPECT_EQ(call("DELETE", "/wishes/wish-404", "tok-ann").status, 404);
}

TEST_F(Api, CalendarShowsCountsOwnWishesAndOwnConflictsOnly) {
  open_march();
  const std::string a = wish("tok-ann", "2019-03-05", "whole_day");
  wish("tok-bob", "2019-03-05", "whole_day");
  wish("tok-cid", "2019-03-06", "morning");
  ASSERT_EQ(call("POST", "/cycles/2019-03/detect", "tok-lead").status, 200);

  const json ann = call("GET", "/cycles/2019-03/calendar", "tok-ann").json();
  EXPECT_EQ(ann["quota"], 5);
  EXPECT_EQ(ann["quota_remaining"], 4);
  EXPECT_EQ(ann["release_date"], "2019-02-15");
  EXPECT_FALSE(ann["wish_examples"].empty());
  ASSERT_EQ(ann["days"].size(), 31u);
  const json tue = ann["days"][4];
  EXPECT_EQ(tue["date"], "2019-03-05");
  EXPECT_EQ(tue["wish_count"], 2);
  ASSERT_EQ(tue["own_wishes"].size(), 1u);
  EXPECT_EQ(tue["own_wishes"][0]["wish_id"], a);
  EXPECT_TRUE(tue["conflict"].get<bool>());
  EXPECT_EQ(ann["days"][1]["weekend"], "work");
  EXPECT_EQ(ann["days"][8]["weekend"], "free");

  const json cid = call("GET", "/cycles/2019-03/calendar", "tok-cid").json();
  EXPECT_EQ(cid["days"][4]["wish_count"], 2);
  EXPECT_TRUE(cid["days"][4]["own_wishes"].empty());
  EXPECT_FALSE(cid["days"][4]["conflict"].get<bool>());
  EXPECT_TRUE(cid["days"][4]["conflict_ids"].empty());

  EXPECT_EQ(call("GET", "/me/conflicts", "tok-ann").json().size(), 1u);
  EXPECT_TRUE(call("GET", "/me/conflicts", "tok-cid").json().empty());
  const json all = call("GET", "/me/conflicts", "tok-lead").json();
  EXPECT_EQ(all.size(), 1u);

  // An uninvolved worker cannot act on the conflict either.
  const std::string cf = all[0]["conflict_id"];
  EXPECT_EQ(call("POST", "/conflicts/" + cf + "/withdrawals", "tok-cid", json::object()).status, 404);
  EXPECT_EQ(call("POST", "/conflicts/" + cf + "/withdrawals", "tok-ann", json::object()).status, 200);
  EXPECT_TRUE(call("GET", "/me/conflicts", "tok-bob").json().empty());
}

TEST_F(Api, ScheduleLifecycle) {
  reset({1, 1});
  open_march();
  EXPECT_EQ(call("GET", "/cycles/2019-03/schedule", "tok-ann").status, 409);
  const ApiResponse fill = call("POST", "/cycles/2019-03/autofill", "tok-lead", json::object());
  ASSERT_EQ(fill.status, 200) << fill.body;
  const int version = fill.json()["draft_version"];
  EXPECT_EQ(call("GET", "/cycles/2019-03/schedule", "tok-ann").status, 409);
  const ApiResponse stale = call("POST", "/cycles/2019-03/release", "tok-lead", {{"expected_version", version + 1}});
  EXPECT_EQ(stale.status, 409);
  EXPECT_EQ(stale.json()["error"]["code"], "StaleSnapshot");
  const ApiResponse rel = call("POST", "/cycles/2019-03/release", "tok-lead", {{"expected_version", version}});
  ASSERT_EQ(rel.status, 200) << rel.body;
  EXPECT_EQ(rel.json()["late"], false);

  const ApiResponse csv = call("GET", "/cycles/2019-03/schedule", "tok-ann", nullptr, {{"format", "csv"}});
  EXPECT_EQ(csv.status, 200);
  EXPECT_EQ(csv.content_type.rfind("text/csv", 0), 0u);
  EXPECT_EQ(csv.body.rfind("worker_id,2019-03-01", 0), 0u);

  const json pub = call("GET", "/cycles/2019-03/schedule", "tok-ann").json();
  EXPECT_FALSE(pub.contains("notify"));
  EXPECT_FALSE(pub.contains("wish_collisions"));

  const ApiResponse ics = call("GET", "/me/calendar.ics", "tok-ann", nullptr, {{"month", "2019-03"}});
  EXPECT_EQ(ics.status, 200);
  EXPECT_EQ(ics.content_type.rfind("text/calendar", 0), 0u);
  EXPECT_NE(ics.body.find("BEGIN:VEVENT"), std::string::npos);

  const json hours = call("GET", "/me/hours", "tok-ann", nullptr, {{"month", "2019-03"}}).json();
  EXPECT_EQ(hours["worker_id"], "ann");

  EXPECT_EQ(call("GET", "/reports/fairness", "tok-lead").status, 200);
  EXPECT_EQ(call("POST", "/kudos", "tok-ann", {{"worker_id", "bob"}}).status, 201);
}

TEST_F(Api, StatusMapping) {
  EXPECT_EQ(http_status(ErrorCode::Unauthenticated), 401);
  EXPECT_EQ(http_status(ErrorCode::NotOwner), 403);
  EXPECT_EQ(http_status(ErrorCode::UnknownConflict), 404);
  EXPECT_EQ(http_status(ErrorCode::PhaseClosed), 409);
  EXPECT_EQ(http_status(ErrorCode::InvalidDate), 400);
  EXPECT_EQ(http_status(ErrorCode::CorruptLog), 500);
  EXPECT_EQ(http_status(ErrorCode::FreeWeekend), 422);
}

TEST_F(Api, ServesOverASocket) {
  HttpServer server(*router);
  const int port = server.start("127.0.0.1", 0);
  ASSERT_GT(port, 0);
  httplib::Client client("127.0.0.1", port);
  client.set_connection_timeout(5);
  const httplib::Headers lead_auth{{"Authorization", "Bearer tok-lead"}};
  const httplib::Headers ann_auth{{"Authorization", "Bearer tok-ann"}};

  auto noauth = client.Get("/wish-examples");
  ASSERT_TRUE(noauth);
  EXPECT_EQ(noauth->status, 401);

  auto opened = client.Post("/cycles", lead_auth, R"({"month":"2019-03"})", "application/json");
  ASSERT_TRUE(opened);
  EXPECT_EQ(opened->status, 201);

  auto posted = client.Post("/cycles/2019-03/wishes", ann_auth, R"({"date":"2019-03-05","scope":"morning"})",
                            "application/json");
  ASSERT_TRUE(posted);
  EXPECT_EQ(posted->status, 201);
  const std::string id = json::parse(posted->body)["wish_id"];

  auto calendar = client.Get("/cycles/2019-03/calendar", ann_auth);
  ASSERT_TRUE(calendar);
  EXPECT_EQ(calendar->status, 200);
  EXPECT_EQ(json::parse(calendar->body)["quota_remaining"], 4);

  auto removed = client.Delete("/wishes/" + id, ann_auth);
  ASSERT_TRUE(removed);
  EXPECT_EQ(removed->status, 200);

  auto usage = client.Get("/reports/usage?from=2019-03&to=2019-03", lead_auth);
  ASSERT_TRUE(usage);
  EXPECT_EQ(usage->status, 200);
  EXPECT_EQ(json::parse(usage->body)["total"], 1);
  server.stop();
}

}  // namespace
}  // namespace selfsched
