#include <gtest/gtest.h>

#include <filesystem>
#include <random>

#include "asgmig/context.hpp"
#include "asgmig/dialect.hpp"
#include "asgmig/errors.hpp"
#include "asgmig/graph_ops.hpp"
#include "asgmig/parse.hpp"
#include "asgmig/print.hpp"
#include "asgmig/session.hpp"
#include "asgmig/snapshot.hpp"
#include "properties.hpp"
#include "random_models.hpp"

namespace asgmig {
namespace {

namespace fs = std::filesystem;
using testing::exact_state;
using testing::structural_state;

constexpr const char* kShowNameSource =
    "Attribute VB_Name = \"Main\"\n"
    "Dim name as String\n"
    "\n"
    "Public Sub showName()\n"
    "    Call MsgBox(\"Ms \" & name)\n"
    "End Sub\n";

constexpr const char* kDestinationClass =
    "package MyPackage;\n"
    "class MyDestination {\n"
    "  public static void log(String) {}\n"
    "}\n";

std::unique_ptr<Session> showname_session() {
  auto s = std::make_unique<Session>(
      load_manifest(testing::source_dir() + "/scenarios/showname/session.manifest"));
  return s;
}

struct Counting final : Chooser {
  std::size_t choose(const ChoicePrompt& p) override {
    prompts.push_back(p);
    return 0;
  }
  std::vector<ChoicePrompt> prompts;
};

// Census oracle: reference -> stub edges counted by a full scan.
std::size_t refs_to_stubs(const Workspace& ws, ModelId id) {
  const Model& m = ws.model(id);
  std::size_t n = 0;
  m.for_each_node([&](const AsgNode& node) {
    if (node.referee && m.node(*node.referee).kind == NodeKind::StubDeclaration) ++n;
  });
  return n;
}

bool no_dangling_referees(const Workspace& ws, ModelId id) {
  const Model& m = ws.model(id);
  bool ok = true;
  m.for_each_node([&](const AsgNode& node) {
    if (node.referee && !m.contains(*node.referee)) ok = false;
  });
  return ok;
}

class ShowName : public ::testing::Test {
 protected:
  void SetUp() override {
    session = showname_session();
    oo = session->model_id("oo");
  }
  NodeRef at(std::string_view p) { return session->resolve(p); }
  Engine& engine() { return session->engine(); }
  Workspace& ws() { return session->workspace(); }
  ContextId cls() { return session->resolve_context("oo:MyPackage.MyDestination"); }
  DirectiveResult produce_show() {
    return engine().produce(at("src:Main.showName"), at("oo:MyPackage.MyDestination"));
  }
  DirectiveResult map_msgbox() {
    return engine().map(at("src:MsgBox"), at("oo:MyPackage.MyDestination.log"), cls());
  }

  std::unique_ptr<Session> session;
  ModelId oo;
};

TEST_F(ShowName, ProduceLeavesTwoStubsAndOneMapping) {
  auto r = produce_show();
  ASSERT_TRUE(r.produced);
  EXPECT_EQ(r.stubs_created.size(), 2u);
  EXPECT_EQ(stubs(ws().model(oo)).size(), 2u);
  ASSERT_EQ(r.mappings.size(), 1u);
  const Mapping* m = engine().mappings().find(r.mappings[0]);
  EXPECT_EQ(m->origin, MappingOrigin::ProduceAuto);
  EXPECT_EQ(m->source, at("src:Main.showName"));
  EXPECT_EQ(m->target, *r.produced);
  EXPECT_EQ(m->scope, cls());
  EXPECT_EQ(r.unresolved.size(), 2u);
  EXPECT_FALSE(r.log.empty());

  auto rows = engine().unresolved_report(cls());
  ASSERT_EQ(rows.size(), 2u);
  std::set<std::string> foreign;
  for (const auto& row : rows) {
    foreign.insert(row.foreign_path);
    ASSERT_TRUE(row.stub);
    EXPECT_EQ(ws().node(row.reference).referee, row.stub->node);
  }
  EXPECT_EQ(foreign, (std::set<std::string>{"src:MsgBox", "src:Main.name"}));

  // Produced body before mapping: call still a function invocation, & replaced.
  std::string body = print_unchecked(ws(), oo);
  EXPECT_NE(body.find("\"Ms \" + name"), std::string::npos);
}

TEST_F(ShowName, MapAdaptsAndSweeps) {
  produce_show();
  auto r = map_msgbox();
  EXPECT_EQ(r.adapted.size(), 1u);
  EXPECT_EQ(r.stubs_removed.size(), 1u);
  EXPECT_EQ(stubs(ws().model(oo)).size(), 1u);
  auto rows = engine().unresolved_report(cls());
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].foreign_path, "src:Main.name");
}

TEST_F(ShowName, EmptyReport) {
  Session empty(Manifest{});
  empty.load_model("t", Dialect::MiniOO, ModelRole::Target, "");
  EXPECT_TRUE(empty.engine().unresolved_report(empty.resolve_context("t:")).empty());
}

TEST_F(ShowName, PriorAttributeMappingBindsImmediately) {
  engine().produce(at("src:Main.name"), at("oo:MyPackage.MyDestination"));
  auto r = produce_show();
  EXPECT_EQ(r.stubs_created.size(), 1u);
  EXPECT_EQ(refs_to_stubs(ws(), oo), 2u);  // MsgBox call and the String type of name
}

TEST_F(ShowName, Preconditions) {
  auto code_of = [&](auto&& fn) {
    try {
      fn();
    } catch (const MigrationError& e) {
      return e.code();
    }
    return ErrorCode::ScriptError;
  };
  EXPECT_EQ(code_of([&] { engine().produce(at("src:Main.showName"), at("src:Main")); }),
            ErrorCode::PreconditionFailed);
  EXPECT_EQ(code_of([&] {
              engine().produce({oo, NodeId{9999}}, at("oo:MyPackage.MyDestination"));
            }),
            ErrorCode::UnknownNode);
  NodeRef show = at("src:Main.showName");
  NodeRef log = at("oo:MyPackage.MyDestination.log");
  const NodeId return_type = ws().node(log).children.front();  // a reference node
  auto before = exact_state(*session);
  EXPECT_EQ(code_of([&] { engine().produce(show, {oo, return_type}); }),
            ErrorCode::PreconditionFailed);
  EXPECT_EQ(exact_state(*session), before);
}

TEST_F(ShowName, MapWithoutUsesRegistersOnly) {
  auto r = map_msgbox();
  EXPECT_EQ(r.mappings.size(), 1u);
  EXPECT_TRUE(r.adapted.empty());
  EXPECT_TRUE(r.stubs_removed.empty());
}

TEST_F(ShowName, TwoCallSitesAdaptedTogether) {
  Session s(Manifest{});
  s.load_model("src", Dialect::MiniProc, ModelRole::Source,
               "Sub A()\n  Call MsgBox(1)\n  Call MsgBox(2)\nEnd Sub\n");
  s.load_model("oo", Dialect::MiniOO, ModelRole::Target, kDestinationClass);
  for (const char* line : {"AnyCopy at global", "CopyAsStaticMethod at oo:",
                           "RenameAdaptToStaticReceiver at oo:"})
    s.install(parse_install(line, 0));
  s.engine().produce(s.resolve("src:Main.A"), s.resolve("oo:MyPackage.MyDestination"));
  ModelId t = s.model_id("oo");
  EXPECT_EQ(refs_to_stubs(s.workspace(), t), 2u);
  auto r = s.engine().map(s.resolve("src:MsgBox"), s.resolve("oo:MyPackage.MyDestination.log"));
  EXPECT_EQ(r.adapted.size(), 2u);
  EXPECT_EQ(refs_to_stubs(s.workspace(), t), 0u);
  EXPECT_TRUE(stubs(s.workspace().model(t)).empty());
}

TEST_F(ShowName, RollbackRestoresSnapshots) {
  const std::string initial = exact_state(*session);
  auto p = produce_show();
  const std::string after_produce = exact_state(*session);
  auto m = map_msgbox();
  EXPECT_THROW(engine().rollback(p.transaction), MigrationError);
  try {
    engine().rollback(p.transaction);
  } catch (const MigrationError& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotTopOfStack);
  }
  engine().rollback(m.transaction);
  EXPECT_EQ(exact_state(*session), after_produce);
  EXPECT_EQ(engine().rollback_last(), p.transaction);
  EXPECT_EQ(exact_state(*session), initial);
  EXPECT_TRUE(engine().history().empty());
  EXPECT_THROW(engine().rollback_last(), MigrationError);
}

TEST_F(ShowName, RollbackLeavesRuleInstallationsAlone) {
  std::size_t installs = engine().rules().installations().size();
  produce_show();
  engine().rollback_last();
  EXPECT_EQ(engine().rules().installations().size(), installs);
}

TEST_F(ShowName, FullMigrationExportsAndReloads) {
  produce_show();
  map_msgbox();
  engine().produce(at("src:Main.name"), at("oo:MyPackage.MyDestination"));
  EXPECT_FALSE(validate(ws(), oo).empty());  // String still bridged
  engine().map(at("src:String"), at("oo:String"));
  EXPECT_TRUE(validate(ws(), oo).empty());
  fs::path dir = fs::temp_directory_path() / "asgmig_engine_export";
  fs::remove_all(dir);
  fs::path file = engine().export_model(oo, dir);
  EXPECT_EQ(file.filename(), "oo.moo");
  std::string text = read_file(file);
  EXPECT_NE(text.find("static void showName()"), std::string::npos);
  EXPECT_NE(text.find("MyDestination.log(\"Ms \" + name)"), std::string::npos);
  Workspace reload;
  ModelId again = parse_target(reload, "oo", Dialect::MiniOO, text).model;
  EXPECT_EQ(snapshot(reload, again), snapshot(ws(), oo));
  fs::remove_all(dir);
}

TEST_F(ShowName, ExportWithStubFails) {
  produce_show();
  try {
    engine().export_model(oo, fs::temp_directory_path());
    FAIL();
  } catch (const MigrationError& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotExportable);
  }
}

TEST_F(ShowName, EmptySkeletonRoundTrips) {
  fs::path dir = fs::temp_directory_path() / "asgmig_engine_skeleton";
  fs::path file = engine().export_model(oo, dir);
  Workspace reload;
  ModelId again = parse_target(reload, "oo", Dialect::MiniOO, read_file(file)).model;
  EXPECT_EQ(snapshot(reload, again), snapshot(ws(), oo));
  fs::remove_all(dir);
}

TEST_F(ShowName, RepeatedMapAdaptsNothing) {
  produce_show();
  auto first = map_msgbox();
  EXPECT_EQ(first.adapted.size(), 1u);
  auto second = map_msgbox();
  EXPECT_TRUE(second.adapted.empty());
  EXPECT_TRUE(second.stubs_removed.empty());
}

TEST_F(ShowName, ChoiceModePromptsOnceDebugSixTimes) {
  Counting choice;
  engine().set_chooser(&choice);
  auto r = engine().produce(at("src:Main.showName"), at("oo:MyPackage.MyDestination"),
                            LookupMode::MultipleChoice);
  EXPECT_EQ(choice.prompts.size(), 1u);
  EXPECT_EQ(r.prompts, 1u);
  ASSERT_FALSE(choice.prompts.empty());
  EXPECT_EQ(choice.prompts[0].options.size(), 2u);  // CopyAsStaticMethod, AnyCopy
  engine().rollback_last();

  // Oracle: one rule application per node of the produced subtree.
  Counting debug;
  engine().set_chooser(&debug);
  auto d = engine().produce(at("src:Main.showName"), at("oo:MyPackage.MyDestination"),
                            LookupMode::Debug);
  std::size_t nodes = preorder(ws().model(oo), d.produced->node).size();
  EXPECT_EQ(debug.prompts.size(), 6u);
  // The void return type is created by the rule, not migrated.
  EXPECT_EQ(nodes - 1, debug.prompts.size());
}

TEST_F(ShowName, ChoiceModeWithoutChooser) {
  const std::string before = exact_state(*session);
  try {
    engine().produce(at("src:Main.showName"), at("oo:MyPackage.MyDestination"),
                     LookupMode::MultipleChoice);
    FAIL();
  } catch (const MigrationError& e) {
    EXPECT_EQ(e.code(), ErrorCode::ChooserRequired);
  }
  EXPECT_EQ(exact_state(*session), before);
}

TEST_F(ShowName, FailureNamesRuleAndIsLogged) {
  Session s(Manifest{});
  s.load_model("src", Dialect::MiniProc, ModelRole::Source, "Sub log()\nEnd Sub\n");
  s.load_model("oo", Dialect::MiniOO, ModelRole::Target, kDestinationClass);
  s.install(parse_install("AnyCopy at global", 0));
  s.install(parse_install("CopyAsStaticMethod at oo:", 0));
  const std::string before = exact_state(s);
  try {
    s.engine().produce(s.resolve("src:Main.log"), s.resolve("oo:MyPackage.MyDestination"));
    FAIL();
  } catch (const MigrationError& e) {
    EXPECT_EQ(e.code(), ErrorCode::RuleApplicationFailed);
    EXPECT_NE(std::string(e.what()).find("CopyAsStaticMethod"), std::string::npos);
  }
  EXPECT_EQ(exact_state(s), before);
  ASSERT_FALSE(s.engine().log().empty());
  EXPECT_EQ(s.engine().log().back().rfind("FAILED", 0), 0u);
}

TEST_F(ShowName, RetroProEquivalence) {
  auto other = showname_session();
  produce_show();
  map_msgbox();
  other->engine().map(other->resolve("src:MsgBox"),
                      other->resolve("oo:MyPackage.MyDestination.log"),
                      other->resolve_context("oo:MyPackage.MyDestination"));
  other->engine().produce(other->resolve("src:Main.showName"),
                          other->resolve("oo:MyPackage.MyDestination"));
  EXPECT_EQ(structural_state(*session), structural_state(*other));
}

TEST(EngineProperties, ProduceNeverLacksARule) {
  std::mt19937 rng(99);
  for (int i = 0; i < 40; ++i) {
    auto src = testing::random_source(rng);
    Dialect d = i % 2 ? Dialect::MiniOO : Dialect::MiniScript;
    auto tgt = testing::random_target(rng, d);
    Session s(Manifest{});
    ModelId sid = s.load_model("src", Dialect::MiniProc, ModelRole::Source, src.text);
    s.load_model("t", d, ModelRole::Target, tgt.text);
    s.install(parse_install("AnyCopy at global", 0));
    const Model& m = s.workspace().model(sid);
    std::vector<NodeId> ids;
    for (NodeId id : preorder(m, m.root()))
      if (id != m.root()) ids.push_back(id);
    NodeId pick = ids[rng() % ids.size()];
    std::string container = "t:" + tgt.classes[rng() % tgt.classes.size()];
    EXPECT_NO_THROW(s.engine().produce({sid, pick}, s.resolve(container)))
        << to_string(m.node(pick).kind);
  }
}

TEST(EngineProperties, SweepNeverOrphansReferences) {
  std::mt19937 rng(1234);
  for (int c = 0; c < 60; ++c) {
    auto src = testing::random_source(rng);
    auto tgt = testing::random_target(rng, Dialect::MiniOO);
    Session s(Manifest{});
    s.load_model("src", Dialect::MiniProc, ModelRole::Source, src.text);
    ModelId t = s.load_model("target", Dialect::MiniOO, ModelRole::Target, tgt.text);
    testing::install_corpus_rules(s);
    for (const auto& p : src.procedures) {
      try {
        s.engine().produce(s.resolve("src:" + p), s.resolve("target:" + tgt.classes[0]));
      } catch (const MigrationError&) {
      }
      ASSERT_TRUE(no_dangling_referees(s.workspace(), t));
    }
    for (const auto& r : src.routines) {
      auto res = s.engine().map(s.resolve("src:" + r), s.resolve("target:Logger.log"));
      ASSERT_TRUE(no_dangling_referees(s.workspace(), t));
      // Every surviving stub is still referenced.
      for (NodeId stub : stubs(s.workspace().model(t)))
        EXPECT_FALSE(incoming_references(s.workspace().model(t), stub).empty());
      auto again = s.engine().map(s.resolve("src:" + r), s.resolve("target:Logger.log"));
      EXPECT_TRUE(again.adapted.empty());
    }
  }
}

TEST(EngineProperties, TransactionalitySmall) {
  auto outcome = testing::check_transactionality(150, 42);
  EXPECT_TRUE(outcome.ok) << outcome.first_failure;
  EXPECT_GT(outcome.failures, 0u);
  EXPECT_GT(outcome.injected, 0u);
  EXPECT_GT(outcome.rollbacks, 0u);
}

TEST(EngineProperties, RetroProSmall) {
  auto outcome = testing::check_retro_pro(30, 7);
  EXPECT_TRUE(outcome.ok) << outcome.first_failure;
}

}  // namespace
}  // namespace asgmig
