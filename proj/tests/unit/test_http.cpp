#include <gtest/gtest.h>
#include <httplib.h>

#include <filesystem>
#include <json.hpp>
#include <future>
#include <thread>

#include "asgmig/http_service.hpp"
#include "properties.hpp"

namespace asgmig {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

class Api : public ::testing::Test {
 protected:
  void SetUp() override {
    Manifest m = load_manifest(fs::path(testing::source_dir()) / "scenarios/showname/session.manifest");
    session = std::make_unique<Session>(m);
    // A procedural target next to the class target, for rule listings.
    session->load_model("legacy", Dialect::MiniProc, ModelRole::Target,
                        "Attribute VB_Name = \"Helpers\"\n", "Helpers");
    session->install(parse_install("CopyAsStaticMethod at global", 0));
    service = std::make_unique<HttpService>(*session, out.string());
  }
  void TearDown() override { fs::remove_all(out); }

  ApiResponse get(const std::string& path, std::map<std::string, std::string> query = {}) {
    return service->handle({"GET", path, std::move(query), ""});
  }
  ApiResponse post(const std::string& path, const json& body) {
    return service->handle({"POST", path, {}, body.dump()});
  }
  static json body(const ApiResponse& r) { return json::parse(r.body); }

  json produce_show(const std::string& mode = "auto") {
    return {{"source", "src:Main.showName"},
            {"target", "oo:MyPackage.MyDestination"},
            {"mode", mode}};
  }

  fs::path out = fs::temp_directory_path() / "asgmig_http_test";
  std::unique_ptr<Session> session;
  std::unique_ptr<HttpService> service;
};

TEST_F(Api, ListsModels) {
  auto r = get("/api/models");
  ASSERT_EQ(r.status, 200);
  json models = body(r);
  ASSERT_EQ(models.size(), 3u);
  EXPECT_EQ(models[0]["alias"], "src");
  EXPECT_EQ(models[0]["role"], "source");
  EXPECT_EQ(models[1]["alias"], "oo");
  EXPECT_EQ(models[1]["dialect"], "MiniOO");
  EXPECT_EQ(models[1]["stubs"], 0);
}

TEST_F(Api, TreeIsPureAndCarriesBadges) {
  auto a = get("/api/models/oo/tree");
  auto b = get("/api/models/oo/tree");
  ASSERT_EQ(a.status, 200);
  EXPECT_EQ(a.body, b.body);
  ASSERT_EQ(post("/api/produce", produce_show()).status, 200);
  auto c = get("/api/models/oo/tree");
  EXPECT_NE(c.body, a.body);
  EXPECT_EQ(c.body, get("/api/models/oo/tree").body);

  // Oracle: count stub badges by walking the JSON against the library list.
  json tree = body(c);
  std::set<int> stub_ids;
  for (const auto& entry : tree["library"])
    if (entry["kind"] == "StubDeclaration") stub_ids.insert(entry["id"].get<int>());
  EXPECT_EQ(stub_ids.size(), 2u);
  std::size_t flagged = 0, pointing = 0;
  std::function<void(const json&)> walk = [&](const json& n) {
    if (n["badges"]["stub_reference"].get<bool>()) ++flagged;
    if (n.contains("referee") && !n["referee"].is_null() &&
        stub_ids.count(n["referee"].get<int>()))
      ++pointing;
    for (const auto& child : n["children"]) walk(child);
  };
  walk(tree["root"]);
  EXPECT_EQ(flagged, 2u);
  EXPECT_EQ(flagged, pointing);
  EXPECT_EQ(tree["root"]["badges"]["unresolved"], 2);
}

TEST_F(Api, NodeSource) {
  post("/api/produce", produce_show());
  json tree = body(get("/api/models/oo/tree"));
  int method = tree["root"]["children"][0]["children"][0]["children"][1]["id"];
  auto r = get("/api/models/oo/nodes/" + std::to_string(method) + "/source");
  ASSERT_EQ(r.status, 200);
  EXPECT_NE(body(r)["text"].get<std::string>().find("showName()"), std::string::npos);
  EXPECT_EQ(get("/api/models/oo/nodes/9999/source").status, 404);
  EXPECT_EQ(get("/api/models/oo/nodes/abc/source").status, 400);
}

TEST_F(Api, RuleListsDependOnTheTargetContext) {
  auto names = [](const json& list) {
    std::vector<std::string> out;
    for (const auto& e : list) out.push_back(e["rule"]);
    return out;
  };
  json to_class = body(get("/api/rules", {{"source", "src:Main.showName"},
                                          {"target", "oo:MyPackage.MyDestination"}}));
  json to_module = body(get("/api/rules", {{"source", "src:Main.showName"},
                                           {"target", "legacy:Helpers"}}));
  EXPECT_EQ(names(to_class["productive"]),
            (std::vector<std::string>{"CopyAsStaticMethod", "CopyAsStaticMethod", "AnyCopy"}));
  EXPECT_EQ(names(to_module["productive"]), (std::vector<std::string>{"AnyCopy"}));
  EXPECT_NE(names(to_class["adaptive"]), names(to_module["adaptive"]));
  EXPECT_EQ(get("/api/rules", {{"source", "src:Main.showName"}}).status, 400);
}

TEST_F(Api, ProduceReturnsTheDirectiveResult) {
  auto r = post("/api/produce", produce_show());
  ASSERT_EQ(r.status, 200);
  json res = body(r)["result"];
  EXPECT_EQ(body(r)["status"], "applied");
  EXPECT_EQ(res["stubs_created"].size(), 2u);
  EXPECT_EQ(res["mappings"].size(), 1u);
  EXPECT_EQ(res["mappings"][0]["origin"], "ProduceAuto");
  EXPECT_EQ(res["produced"]["name"], "showName");

  json ctx = body(get("/api/context", {{"path", "oo:MyPackage.MyDestination"}}));
  EXPECT_EQ(ctx["mappings"].size(), 1u);
  EXPECT_EQ(ctx["unresolved"].size(), 2u);

  json history = body(get("/api/history"));
  ASSERT_EQ(history.size(), 1u);
  json log = body(get("/api/log"));
  EXPECT_FALSE(log["lines"].empty());
  json tail = body(get("/api/log", {{"since", std::to_string(log["next"].get<int>())}}));
  EXPECT_TRUE(tail["lines"].empty());
}

TEST_F(Api, ErrorsAreStructured) {
  auto bad = post("/api/produce", {{"source", "src:Main.showName"}, {"target", "src:Main"}});
  EXPECT_EQ(bad.status, 400);
  EXPECT_EQ(body(bad)["error"]["code"], "PreconditionFailed");
  EXPECT_EQ(post("/api/produce", {{"source", "src:Nope"}, {"target", "oo:"}}).status, 404);
  EXPECT_EQ(service->handle({"POST", "/api/produce", {}, "not json"}).status, 400);
  EXPECT_EQ(get("/api/nothing").status, 404);
  EXPECT_EQ(post("/api/rollback", json::object()).status, 409);  // empty history
  auto exp = post("/api/export", {{"alias", "oo"}});
  EXPECT_EQ(exp.status, 200);  // empty skeleton is exportable
  post("/api/produce", produce_show());
  auto blocked = post("/api/export", {{"alias", "oo"}});
  EXPECT_EQ(body(blocked)["error"]["code"], "NotExportable");
}

TEST_F(Api, RollbackAndStaleRollback) {
  post("/api/produce", produce_show());
  post("/api/map", {{"source", "src:MsgBox"}, {"target", "oo:MyPackage.MyDestination.log"}});
  auto stale = post("/api/rollback", {{"transaction", 1}});
  EXPECT_EQ(stale.status, 409);
  EXPECT_EQ(body(stale)["error"]["code"], "NotTopOfStack");
  EXPECT_EQ(body(post("/api/rollback", json::object()))["transaction"], 2);
  EXPECT_EQ(body(post("/api/rollback", {{"transaction", 1}}))["status"], "rolled_back");
}

TEST_F(Api, PendingChoiceProtocol) {
  const std::string before = testing::exact_state(*session);
  auto first = post("/api/produce", produce_show("choice"));
  ASSERT_EQ(first.status, 202);
  json pending = body(first);
  EXPECT_EQ(pending["status"], "pending");
  EXPECT_EQ(pending["prompt"]["kind"], "rule");
  EXPECT_EQ(pending["prompt"]["options"].size(), 3u);
  EXPECT_EQ(testing::exact_state(*session), before);  // not applied yet
  EXPECT_TRUE(body(get("/api/history")).empty());

  std::string token = pending["token"];
  auto done = post("/api/choices/" + token, {{"answer", 0}});
  ASSERT_EQ(done.status, 200);
  EXPECT_EQ(body(done)["result"]["prompts"], 1);
  EXPECT_EQ(body(done)["result"]["produced"]["kind"], "Method");

  auto stale = post("/api/choices/" + token, {{"answer", 0}});
  EXPECT_EQ(stale.status, 409);
  EXPECT_EQ(body(stale)["error"]["code"], "StaleToken");
  EXPECT_EQ(post("/api/choices/c999", {{"answer", 0}}).status, 409);
}

TEST_F(Api, TokenGoesStaleAfterAnotherDirective) {
  std::string token = body(post("/api/produce", produce_show("choice")))["token"];
  ASSERT_EQ(post("/api/map", {{"source", "src:MsgBox"},
                              {"target", "oo:MyPackage.MyDestination.log"}})
                .status,
            200);
  EXPECT_EQ(post("/api/choices/" + token, {{"answer", 0}}).status, 409);
}

TEST_F(Api, CancelLeavesStateUnchanged) {
  const std::string before = testing::exact_state(*session);
  std::string token = body(post("/api/produce", produce_show("choice")))["token"];
  auto r = post("/api/choices/" + token, {{"cancel", true}});
  EXPECT_EQ(body(r)["status"], "abandoned");
  EXPECT_EQ(testing::exact_state(*session), before);
  EXPECT_EQ(post("/api/choices/" + token, {{"answer", 0}}).status, 409);
}

TEST_F(Api, DebugModePromptsAtEveryLookup) {
  auto r = post("/api/produce", produce_show("debug"));
  std::size_t prompts = 0;
  while (r.status == 202) {
    ++prompts;
    std::string token = body(r)["token"];
    r = post("/api/choices/" + token, {{"answer", 0}});
  }
  ASSERT_EQ(r.status, 200) << r.body;
  EXPECT_EQ(prompts, 6u);
  EXPECT_EQ(body(r)["result"]["prompts"], 6);
}

TEST_F(Api, ServesOverASocket) {
  std::promise<int> ready;
  auto port_future = ready.get_future();
  std::thread server([&] { service->serve("127.0.0.1", 0, [&](int p) { ready.set_value(p); }); });
  int port = port_future.get();
  httplib::Client client("127.0.0.1", port);
  auto listed = client.Get("/api/models");
  ASSERT_TRUE(listed);
  EXPECT_EQ(listed->status, 200);
  EXPECT_EQ(json::parse(listed->body).size(), 3u);
  auto produced = client.Post("/api/produce", produce_show().dump(), "application/json");
  ASSERT_TRUE(produced);
  EXPECT_EQ(produced->status, 200);
  auto rules = client.Get("/api/rules?source=src:Main.showName&target=legacy:Helpers");
  ASSERT_TRUE(rules);
  EXPECT_EQ(json::parse(rules->body)["productive"].size(), 1u);
  service->stop();
  server.join();
}

}  // namespace
}  // namespace asgmig
