#include <gtest/gtest.h>

#include "asgmig/builtin_rules.hpp"
#include "asgmig/dialect.hpp"
#include "asgmig/errors.hpp"
#include "asgmig/graph_ops.hpp"
#include "asgmig/print.hpp"
#include "asgmig/session.hpp"
#include "asgmig/snapshot.hpp"

namespace asgmig {
namespace {

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

struct Rig {
  Session session{Manifest{}};
  Rig(std::string_view source, std::string_view target, Dialect dialect = Dialect::MiniOO) {
    session.load_model("src", Dialect::MiniProc, ModelRole::Source, source);
    session.load_model("oo", dialect, ModelRole::Target, target);
    install("AnyCopy at global");
  }
  void install(std::string_view line) { session.install(parse_install(line, 0)); }
  NodeRef at(std::string_view path) const { return session.resolve(path); }
  Engine& engine() { return session.engine(); }
  Workspace& ws() { return session.workspace(); }
  const Model& target() { return ws().model(session.model_id("oo")); }
  DirectiveResult produce(std::string_view s, std::string_view t) {
    return engine().produce(at(s), at(t));
  }
  DirectiveResult map(std::string_view s, std::string_view t) {
    return engine().map(at(s), at(t));
  }
  std::string text(NodeRef n) { return print_node(ws(), n); }
  std::size_t stub_refs(std::string_view foreign) {
    const Model& m = target();
    NodeRef f = at(foreign);
    std::size_t count = 0;
    m.for_each_node([&](const AsgNode& n) {
      if (!n.referee) return;
      const AsgNode& d = m.node(*n.referee);
      if (d.kind == NodeKind::StubDeclaration && d.payload.foreign == f) ++count;
    });
    return count;
  }
};

struct Answer final : Chooser {
  explicit Answer(std::size_t a) : a(a) {}
  std::size_t choose(const ChoicePrompt& p) override {
    prompts.push_back(p);
    return a;
  }
  std::size_t a;
  std::vector<ChoicePrompt> prompts;
};

TEST(AnyCopy, LiteralLeafCopy) {
  Rig rig(kShowNameSource, kDestinationClass);
  NodeRef show = rig.at("src:Main.showName");
  const Model& s = rig.ws().model(show.model);
  NodeId call = s.node(s.node(show.node).children[0]).children[0];
  NodeId amp = s.node(call).children[0];
  NodeId literal = s.node(amp).children[0];
  auto r = rig.engine().produce({show.model, literal}, rig.at("oo:MyPackage.MyDestination.log"));
  ASSERT_TRUE(r.produced);
  const AsgNode& copy = rig.ws().node(*r.produced);
  EXPECT_EQ(copy.kind, NodeKind::StringLiteral);
  EXPECT_EQ(copy.payload.text, "Ms ");
  EXPECT_TRUE(r.stubs_created.empty());
  EXPECT_TRUE(r.mappings.empty());
}

TEST(AnyCopy, FunctionInvocationCopiedButIllegal) {
  Rig rig(kShowNameSource, kDestinationClass);
  NodeRef show = rig.at("src:Main.showName");
  NodeId stmt = rig.ws().node(show).children[0];
  auto r = rig.engine().produce({show.model, stmt}, rig.at("oo:MyPackage.MyDestination.log"));
  const Model& t = rig.target();
  EXPECT_EQ(t.node(r.produced->node).kind, NodeKind::ExpressionStatement);
  NodeId call = t.node(r.produced->node).children[0];
  EXPECT_EQ(t.node(call).kind, NodeKind::FunctionInvocation);
  bool illegal = false;
  for (const auto& v : validate(rig.ws(), t.id()))
    illegal |= v.node == call && v.reason == ViolationReason::IllegalKindForDialect;
  EXPECT_TRUE(illegal);
}

TEST(CopyAsStaticMethod, ShowNameBecomesStaticVoid) {
  Rig rig(kShowNameSource, kDestinationClass);
  rig.install("CopyAsStaticMethod at oo:");
  auto r = rig.produce("src:Main.showName", "oo:MyPackage.MyDestination");
  const AsgNode& m = rig.ws().node(*r.produced);
  EXPECT_EQ(m.kind, NodeKind::Method);
  EXPECT_TRUE(m.payload.is_static);
  EXPECT_EQ(rig.ws().node({r.produced->model, m.children[0]}).name, "void");
  EXPECT_NE(rig.text(*r.produced).find("public static void showName()"), std::string::npos);
}

TEST(CopyAsStaticMethod, ParametersCarriedOver) {
  Rig rig("Sub Pair(ByVal a As String, b As Integer)\nEnd Sub\n", kDestinationClass);
  rig.install("CopyAsStaticMethod at oo:");
  auto r = rig.produce("src:Main.Pair", "oo:MyPackage.MyDestination");
  const Model& src = rig.ws().model(rig.session.model_id("src"));
  std::size_t expected = 0;
  for (NodeId c : src.node(rig.at("src:Main.Pair").node).children)
    expected += src.node(c).kind == NodeKind::Parameter;
  std::size_t got = 0;
  for (NodeId c : rig.ws().node(*r.produced).children)
    got += rig.target().node(c).kind == NodeKind::Parameter;
  EXPECT_EQ(expected, 2u);
  EXPECT_EQ(got, expected);
}

TEST(CopyAsStaticMethod, FunctionDoesNotMatch) {
  Rig rig("Function F() As Integer\n  Return 1\nEnd Function\n", kDestinationClass);
  rig.install("CopyAsStaticMethod at oo:");
  auto r = rig.produce("src:Main.F", "oo:MyPackage.MyDestination");
  EXPECT_EQ(rig.ws().node(*r.produced).kind, NodeKind::Function);  // AnyCopy fallback
}

TEST(CopyAsStaticMethod, DuplicateMember) {
  Rig rig("Sub log()\nEnd Sub\n", kDestinationClass);
  rig.install("CopyAsStaticMethod at oo:");
  try {
    rig.produce("src:Main.log", "oo:MyPackage.MyDestination");
    FAIL();
  } catch (const MigrationError& e) {
    EXPECT_EQ(e.code(), ErrorCode::RuleApplicationFailed);
    EXPECT_NE(std::string(e.what()).find("CopyAsStaticMethod"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("DuplicateMember"), std::string::npos);
  }
  Rig over("Sub log()\nEnd Sub\n", kDestinationClass);
  over.install("CopyAsStaticMethod overwrite=true at oo:");
  over.produce("src:Main.log", "oo:MyPackage.MyDestination");
  std::size_t logs = 0;
  for (NodeId c : over.ws().node(over.at("oo:MyPackage.MyDestination")).children)
    logs += over.target().node(c).name == "log";
  EXPECT_EQ(logs, 1u);
}

TEST(CopyReplaceOperator, ReplacesNestedOccurrences) {
  Rig rig("Dim c As String\nSub S()\n  c = \"a\" & (\"b\" & c) - 1\nEnd Sub\n", kDestinationClass);
  rig.install("CopyAsStaticMethod at oo:");
  rig.install("CopyReplaceOperator OtD=& OtR=+ at oo:");
  auto r = rig.produce("src:Main.S", "oo:MyPackage.MyDestination");
  const Model& t = rig.target();
  std::size_t amps = 0, pluses = 0, minuses = 0;
  for (NodeId id : preorder(t, r.produced->node)) {
    const AsgNode& n = t.node(id);
    if (n.kind != NodeKind::BinaryOperation) continue;
    amps += n.payload.text == "&";
    pluses += n.payload.text == "+";
    minuses += n.payload.text == "-";
  }
  EXPECT_EQ(amps, 0u);
  EXPECT_EQ(pluses, 2u);
  EXPECT_EQ(minuses, 1u);
}

TEST(CopyReplaceOperator, ConditionChecksOperator) {
  auto rule = make_rule("CopyReplaceOperator", {{"OtD", "&"}, {"OtR", "+"}});
  Rig rig("Sub S()\n  Call MsgBox(1 - 2)\nEnd Sub\n", kDestinationClass);
  const Model& s = rig.ws().model(rig.session.model_id("src"));
  NodeId minus{};
  s.for_each_node([&](const AsgNode& n) {
    if (n.kind == NodeKind::BinaryOperation) minus = n.id;
  });
  auto& p = dynamic_cast<const ProductiveRule&>(*rule);
  EXPECT_FALSE(p.condition(rig.ws(), {s.id(), minus}, rig.at("oo:MyPackage.MyDestination")));
}

TEST(ModuleToClass, ModuleIntoPackage) {
  Rig rig(kShowNameSource, kDestinationClass);
  rig.install("ModuleToClass at oo:");
  auto r = rig.produce("src:Main", "oo:MyPackage");
  const AsgNode& cls = rig.ws().node(*r.produced);
  EXPECT_EQ(cls.kind, NodeKind::Class);
  EXPECT_EQ(cls.name, "Main");
  EXPECT_EQ(cls.children.size(), 2u);
}

TEST(GlobalToAttribute, DimBecomesStaticAttribute) {
  Rig rig(kShowNameSource, kDestinationClass);
  rig.install("GlobalToAttribute at oo:");
  rig.install("SimpleRename at oo:");
  rig.map("src:String", "oo:String");
  auto r = rig.produce("src:Main.name", "oo:MyPackage.MyDestination");
  const AsgNode& attr = rig.ws().node(*r.produced);
  EXPECT_EQ(attr.kind, NodeKind::AttributeDeclaration);
  EXPECT_TRUE(attr.payload.is_static);
  const AsgNode& type = rig.target().node(attr.children.at(0));
  EXPECT_EQ(type.referee, rig.at("oo:String").node);
  EXPECT_EQ(rig.text(*r.produced), "static String name;\n");
}

TEST(FunctionToMethod, SingleReturnTypeFollowsTypeMapping) {
  Rig rig("Function Ratio(ByVal v As Single) As Single\n  Return v\nEnd Function\n", kDestinationClass);
  rig.install("FunctionToMethod at oo:");
  rig.install("SimpleRename at oo:");
  rig.map("src:Single", "oo:Float");
  auto r = rig.produce("src:Main.Ratio", "oo:MyPackage.MyDestination");
  const AsgNode& m = rig.ws().node(*r.produced);
  EXPECT_EQ(m.kind, NodeKind::Method);
  EXPECT_TRUE(m.payload.is_static);
  EXPECT_EQ(rig.target().node(m.children.at(0)).referee, rig.at("oo:Float").node);
  EXPECT_NE(rig.text(*r.produced).find("static Float Ratio(Float v)"), std::string::npos);
}

TEST(SimpleRename, TypeReferencesFollowTableMappings) {
  for (Dialect d : {Dialect::MiniOO, Dialect::MiniScript}) {
    const bool oo = d == Dialect::MiniOO;
    Rig rig("Dim visits As dbInt\n", oo ? "package P;\nclass C {}\n" : "namespace P {\nclass C {}\n}\n",
            d);
    rig.install("GlobalToAttribute at oo:");
    rig.install("SimpleRename at oo:");
    auto r = rig.produce("src:Main.visits", "oo:P.C");
    EXPECT_EQ(rig.stub_refs("src:dbInt"), 1u);
    auto m = rig.map("src:dbInt", oo ? "oo:int" : "oo:number");
    EXPECT_EQ(m.adapted.size(), 1u);
    EXPECT_EQ(rig.stub_refs("src:dbInt"), 0u);
    NodeId type = rig.ws().node(*r.produced).children.at(0);
    EXPECT_EQ(rig.target().node(type).name, oo ? "int" : "number");
    EXPECT_EQ(m.stubs_removed.size(), 1u);
  }
}

TEST(SimpleRename, CallableStubIsNotItsBusiness) {
  Rig rig(kShowNameSource, kDestinationClass);
  rig.install("CopyAsStaticMethod at oo:");
  rig.install("SimpleRename at oo:");
  rig.produce("src:Main.showName", "oo:MyPackage.MyDestination");
  auto m = rig.map("src:MsgBox", "oo:MyPackage.MyDestination.log");
  EXPECT_TRUE(m.adapted.empty());
  EXPECT_EQ(rig.stub_refs("src:MsgBox"), 1u);
}

TEST(RenameAdaptToStaticReceiver, WorkedExample) {
  Rig rig(kShowNameSource, kDestinationClass);
  rig.install("CopyAsStaticMethod at oo:");
  rig.install("CopyReplaceOperator OtD=& OtR=+ at oo:");
  rig.install("RenameAdaptToStaticReceiver at oo:");
  auto p = rig.produce("src:Main.showName", "oo:MyPackage.MyDestination");
  const std::size_t before = rig.stub_refs("src:MsgBox");
  auto m = rig.map("src:MsgBox", "oo:MyPackage.MyDestination.log");
  EXPECT_EQ(before, 1u);
  EXPECT_EQ(rig.stub_refs("src:MsgBox"), 0u);
  ASSERT_EQ(m.adapted.size(), 1u);
  EXPECT_EQ(rig.text(m.adapted[0]), "MyDestination.log(\"Ms \" + name)");
  EXPECT_EQ(rig.ws().node(m.adapted[0]).kind, NodeKind::MethodInvocation);
}

TEST(RenameAdaptToStaticReceiver, ArgumentsKeepOrder) {
  Rig rig("Sub S()\n  Call Mid(\"abc\", 2, 1)\nEnd Sub\n", kDestinationClass);
  rig.install("CopyAsStaticMethod at oo:");
  rig.install("RenameAdaptToStaticReceiver at oo:");
  auto p = rig.produce("src:Main.S", "oo:MyPackage.MyDestination");
  // Oracle: argument texts before adaptation.
  const Model& t = rig.target();
  NodeId call{};
  for (NodeId id : preorder(t, p.produced->node))
    if (t.node(id).kind == NodeKind::FunctionInvocation) call = id;
  std::vector<std::string> args_before;
  for (NodeId a : t.node(call).children) args_before.push_back(rig.text({t.id(), a}));
  auto m = rig.map("src:Mid", "oo:Strings.substring");
  ASSERT_EQ(m.adapted.size(), 1u);
  const AsgNode& inv = rig.ws().node(m.adapted[0]);
  ASSERT_EQ(inv.children.size(), 4u);
  EXPECT_EQ(t.node(inv.children[0]).kind, NodeKind::TypeReference);
  std::vector<std::string> args_after;
  for (std::size_t i = 1; i < inv.children.size(); ++i)
    args_after.push_back(rig.text({t.id(), inv.children[i]}));
  EXPECT_EQ(args_after, args_before);
}

TEST(RenameAdaptToStaticReceiver, NonStaticTargetDeclines) {
  Rig rig(kShowNameSource, "package P;\nclass C {\n  public void note(String s) {}\n}\n");
  rig.install("CopyAsStaticMethod at oo:");
  rig.install("RenameAdaptToStaticReceiver at oo:");
  rig.produce("src:Main.showName", "oo:P.C");
  auto m = rig.map("src:MsgBox", "oo:P.C.note");
  EXPECT_TRUE(m.adapted.empty());
}

constexpr const char* kInstanceTarget =
    "package P;\n"
    "class Base {\n  public void helper() {}\n}\n"
    "class C extends Base {\n  public void run() {}\n}\n"
    "class Box {\n  public void put(String s) {}\n}\n";

TEST(RenameAdaptToSameClassReceiver, SiblingCallGetsThis) {
  Rig rig("Sub Helper()\nEnd Sub\nSub Go()\n  Call Helper()\nEnd Sub\n", kInstanceTarget);
  rig.install("CopyAsStaticMethod at oo:");
  rig.install("RenameAdaptToThisReceiver at oo:");
  rig.map("src:Main.Helper", "oo:P.Base.helper");
  auto p = rig.produce("src:Main.Go", "oo:P.C");
  EXPECT_NE(rig.text(*p.produced).find("this.helper();"), std::string::npos)
      << rig.text(*p.produced);
  Rig sup("Sub Helper()\nEnd Sub\nSub Go()\n  Call Helper()\nEnd Sub\n", kInstanceTarget);
  sup.install("CopyAsStaticMethod at oo:");
  sup.install("RenameAdaptToSameClassReceiver receiver=super at oo:");
  sup.map("src:Main.Helper", "oo:P.Base.helper");
  auto q = sup.produce("src:Main.Go", "oo:P.C");
  EXPECT_NE(sup.text(*q.produced).find("super.helper();"), std::string::npos);
}

TEST(RenameAdaptToArgumentReceiver, ChosenArgumentBecomesReceiver) {
  const char* source =
      "Dim x As String\nDim y As String\nSub Put(a As String, b As String)\nEnd Sub\n"
      "Sub Go()\n  Call Put(x, y)\nEnd Sub\n";
  Rig rig(source, kInstanceTarget);
  rig.install("CopyAsStaticMethod at oo:");
  rig.install("GlobalToAttribute at oo:");
  rig.install("SimpleRename at oo:");
  rig.install("RenameAdaptToArgumentReceiver at oo:");
  rig.map("src:String", "oo:String");
  rig.produce("src:Main.x", "oo:P.C");
  rig.produce("src:Main.y", "oo:P.C");
  rig.map("src:Main.Put", "oo:P.Box.put");
  Answer first(0);
  rig.engine().set_chooser(&first);
  auto p = rig.produce("src:Main.Go", "oo:P.C");
  ASSERT_EQ(first.prompts.size(), 1u);
  EXPECT_EQ(first.prompts[0].kind, ChoicePrompt::Kind::Argument);
  EXPECT_EQ(first.prompts[0].options, (std::vector<std::string>{"x", "y"}));
  const Model& t = rig.target();
  NodeId inv{};
  for (NodeId id : preorder(t, p.produced->node))
    if (t.node(id).kind == NodeKind::MethodInvocation) inv = id;
  ASSERT_TRUE(inv.valid());
  const auto& kids = t.node(inv).children;
  ASSERT_EQ(kids.size(), 2u);
  EXPECT_EQ(t.node(kids[0]).name, "x");
  EXPECT_EQ(t.node(kids[1]).name, "y");
  EXPECT_EQ(t.node(inv).referee, rig.at("oo:P.Box.put").node);
}

TEST(RenameAdaptToArgumentReceiver, HeadlessNeedsChooser) {
  Rig rig("Sub Put(a As String)\nEnd Sub\nSub Go()\n  Call Put(\"v\")\nEnd Sub\n",
          kInstanceTarget);
  rig.install("CopyAsStaticMethod at oo:");
  rig.install("RenameAdaptToArgumentReceiver at oo:");
  rig.map("src:Main.Put", "oo:P.Box.put");
  SnapshotOptions exact;
  exact.with_ids = true;
  const std::string before = snapshot(rig.ws(), rig.target().id(), exact);
  try {
    rig.produce("src:Main.Go", "oo:P.C");
    FAIL();
  } catch (const MigrationError& e) {
    EXPECT_EQ(e.code(), ErrorCode::ChooserRequired);
  }
  EXPECT_EQ(snapshot(rig.ws(), rig.target().id(), exact), before);
}

TEST(Autowrap, UnmappedRoutineGetsSkeleton) {
  Rig rig("Sub Ring()\n  Call Beep()\nEnd Sub\n", kDestinationClass);
  rig.install("CopyAsStaticMethod at oo:");
  rig.install("RenameAdaptToStaticReceiver at oo:");
  rig.install("Autowrap at oo:");
  auto r = rig.produce("src:Main.Ring", "oo:MyPackage.MyDestination");
  EXPECT_EQ(rig.stub_refs("src:Beep"), 0u);
  EXPECT_TRUE(stubs(rig.target()).empty());
  NodeRef shim = rig.at("oo:" + std::string(kShimClass) + ".Beep");
  const AsgNode& beep = rig.ws().node(shim);
  EXPECT_EQ(beep.kind, NodeKind::Method);
  EXPECT_TRUE(beep.payload.is_static);
  bool mapped = false;
  for (const auto& m : rig.engine().mappings().all())
    mapped |= m.target == shim && m.origin == MappingOrigin::ProduceAuto;
  EXPECT_TRUE(mapped);
  EXPECT_NE(rig.text(*r.produced).find("LibraryShims.Beep();"), std::string::npos);
  EXPECT_TRUE(validate(rig.ws(), rig.target().id()).empty());
}

TEST(Autowrap, UnmappedTypeGetsEmptyClass) {
  Rig rig("Dim price As Currency\n", "namespace P {\nclass C {}\n}\n", Dialect::MiniScript);
  rig.install("GlobalToAttribute at oo:");
  rig.install("SimpleRename at oo:");
  rig.install("Autowrap at oo:");
  rig.produce("src:Main.price", "oo:P.C");
  EXPECT_EQ(rig.stub_refs("src:Currency"), 0u);
  const AsgNode& cls = rig.ws().node(rig.at("oo:Currency"));
  EXPECT_EQ(cls.kind, NodeKind::Class);
  EXPECT_TRUE(cls.children.empty());
}

TEST(Autowrap, MappedRoutineIsLeftToMapping) {
  Rig rig(kShowNameSource, kDestinationClass);
  rig.install("CopyAsStaticMethod at oo:");
  rig.install("RenameAdaptToStaticReceiver at oo:");
  rig.install("Autowrap at oo:");
  rig.map("src:MsgBox", "oo:MyPackage.MyDestination.log");
  rig.produce("src:Main.showName", "oo:MyPackage.MyDestination");
  EXPECT_THROW(rig.at("oo:" + std::string(kShimClass) + ".MsgBox"), MigrationError);
  EXPECT_EQ(rig.stub_refs("src:MsgBox"), 0u);
}

}  // namespace
}  // namespace asgmig
