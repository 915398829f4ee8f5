#include "asgmig/builtin_rules.hpp"

#include <functional>

#include "asgmig/errors.hpp"
#include "asgmig/graph_ops.hpp"
#include "asgmig/print.hpp"
#include "asgmig/registry.hpp"

namespace asgmig {

namespace {

using K = NodeKind;

// ---------------------------------------------------------------- helpers

std::optional<NodeId> library_type(const Model& model, std::string_view name) {
  for (NodeId id : model.library()) {
    const AsgNode& n = model.node(id);
    if ((n.kind == K::PrimitiveTypeDeclaration || n.kind == K::Class) && n.name == name)
      return id;
  }
  return std::nullopt;
}

std::string_view top_type_name(Dialect dialect) {
  switch (dialect) {
    case Dialect::MiniOO: return "Object";
    case Dialect::MiniScript: return "any";
    case Dialect::MiniProc: return "Variant";
  }
  return "Object";
}

/// Append a TypeReference to the named library type of the target model.
NodeId add_type_ref(Model& model, NodeId parent, std::string_view type_name) {
  NodeId ref = model.add_node(parent, K::TypeReference, std::string(type_name));
  if (auto decl = library_type(model, type_name)) model.set_referee(ref, *decl);
  return ref;
}

void migrate_children(RuleContext& ctx, NodeRef source, NodeRef created) {
  const std::vector<NodeId> children = ctx.workspace().node(source).children;
  for (NodeId child : children) ctx.migrate({source.model, child}, created);
}

/// Fail on a same-named member unless the rule allows overwriting it.
void claim_member_name(const Rule& rule, RuleContext& ctx, NodeRef target,
                       const std::string& name) {
  Model& model = ctx.workspace().model(target.model);
  auto existing = child_named(model, target.node, name);
  if (!existing) return;
  if (rule.param("overwrite") == "true") {
    ctx.log(rule.name() + ": replacing existing member " + name);
    model.remove_subtree(*existing);
    return;
  }
  throw MigrationError(ErrorCode::DuplicateMember,
                       qualified_path(ctx.workspace(), target) + " already has a member '" +
                           name + "'");
}

bool source_is(const Workspace& ws, NodeRef source, K kind) {
  return ws.node(source).kind == kind;
}

/// The stub a reference points to, if any.
const AsgNode* stub_of(const Workspace& ws, NodeRef reference) {
  const AsgNode& ref = ws.node(reference);
  if (!is_reference(ref.kind) || !ref.referee) return nullptr;
  const AsgNode* decl = ws.model(reference.model).find(*ref.referee);
  if (!decl || decl->kind != K::StubDeclaration || !decl->payload.foreign) return nullptr;
  return decl;
}

bool unresolved_for(const Workspace& ws, NodeRef reference, const Mapping* mapping) {
  if (!mapping || mapping->target.model != reference.model) return false;
  const AsgNode* stub = stub_of(ws, reference);
  return stub && stands_for(ws, *stub->payload.foreign, mapping->source);
}

bool is_type_decl(K k) { return k == K::Class || k == K::PrimitiveTypeDeclaration; }
bool is_variable_decl(K k) {
  return k == K::VariableDeclaration || k == K::AttributeDeclaration || k == K::Parameter;
}

std::optional<NodeId> superclass(const Model& model, NodeId cls) {
  for (NodeId child : model.node(cls).children) {
    const AsgNode& c = model.node(child);
    if (c.kind == K::TypeReference) return c.referee;
    break;
  }
  return std::nullopt;
}

bool inherits_from(const Model& model, std::optional<NodeId> cls, NodeId ancestor) {
  for (int guard = 0; cls && guard < 32; ++guard) {
    if (*cls == ancestor) return true;
    if (model.node(*cls).kind != K::Class) return false;
    cls = superclass(model, *cls);
  }
  return false;
}

/// Method targets: instance or static method held by a class.
const AsgNode* target_method(const Workspace& ws, const Mapping& mapping) {
  const AsgNode& target = ws.node(mapping.target);
  if (target.kind != K::Method || !target.parent) return nullptr;
  if (ws.model(mapping.target.model).node(*target.parent).kind != K::Class) return nullptr;
  return &target;
}

/// Turn a function invocation into a method invocation bound to target.
void to_method_invocation(Model& model, NodeId call, const AsgNode& target) {
  model.set_kind(call, K::MethodInvocation);
  model.set_referee(call, target.id);
  model.set_name(call, target.name);
}

// ------------------------------------------------------------ productive

class AnyCopy final : public ProductiveRule {
 public:
  using ProductiveRule::ProductiveRule;
  std::string summary() const override {
    return "always true; copy the node and migrate each child under the copy";
  }
  bool condition(const Workspace&, NodeRef, NodeRef) const override { return true; }
  NodeId apply(RuleContext& ctx, NodeRef source, NodeRef target) const override {
    NodeId created = ctx.copy_node(source, target);
    migrate_children(ctx, source, {target.model, created});
    return created;
  }
};

/// Shared body of the declaration-producing rules.
class DeclarationRule : public ProductiveRule {
 public:
  DeclarationRule(std::string name, RuleParams params, K from, std::vector<K> into,
                  K produce, bool make_static, std::string summary)
      : ProductiveRule(std::move(name), std::move(params)),
        from_(from),
        into_(std::move(into)),
        produce_(produce),
        static_(make_static),
        summary_(std::move(summary)) {}

  std::string summary() const override { return summary_; }

  bool condition(const Workspace& ws, NodeRef source, NodeRef target) const override {
    if (!source_is(ws, source, from_)) return false;
    const AsgNode& t = ws.node(target);
    if (std::find(into_.begin(), into_.end(), t.kind) == into_.end()) return false;
    return extra_condition(ws, source);
  }

  NodeId apply(RuleContext& ctx, NodeRef source, NodeRef target) const override {
    const AsgNode& src = ctx.workspace().node(source);
    const std::string name = src.name;
    Payload payload;
    payload.is_static = static_;
    payload.visibility = src.payload.visibility;
    claim_member_name(*this, ctx, target, name);
    Model& model = ctx.workspace().model(target.model);
    NodeId created = model.add_node(target.node, produce_, name, payload);
    before_children(model, created);
    migrate_children(ctx, source, {target.model, created});
    return created;
  }

 protected:
  virtual bool extra_condition(const Workspace&, NodeRef) const { return true; }
  virtual void before_children(Model&, NodeId) const {}

 private:
  K from_;
  std::vector<K> into_;
  K produce_;
  bool static_;
  std::string summary_;
};

class CopyAsStaticMethod final : public DeclarationRule {
 public:
  CopyAsStaticMethod(std::string name, RuleParams params)
      : DeclarationRule(std::move(name), std::move(params), K::SubProcedure, {K::Class},
                        K::Method, true,
                        "SubProcedure into a Class; static void method with the same "
                        "selector") {}

 protected:
  void before_children(Model& model, NodeId method) const override {
    add_type_ref(model, method, "void");
  }
};

class FunctionToMethod final : public DeclarationRule {
 public:
  FunctionToMethod(std::string name, RuleParams params)
      : DeclarationRule(std::move(name), std::move(params), K::Function, {K::Class},
                        K::Method, true,
                        "Function into a Class; static method, return type migrated") {}
};

class ModuleToClass final : public DeclarationRule {
 public:
  ModuleToClass(std::string name, RuleParams params)
      : DeclarationRule(std::move(name), std::move(params), K::Module,
                        {K::Package, K::Project}, K::Class, false,
                        "Module into a Package or Project; class holding the members") {}
};

class GlobalToAttribute final : public DeclarationRule {
 public:
  GlobalToAttribute(std::string name, RuleParams params)
      : DeclarationRule(std::move(name), std::move(params), K::VariableDeclaration,
                        {K::Class}, K::AttributeDeclaration, true,
                        "module-level variable into a Class; static attribute") {}

 protected:
  bool extra_condition(const Workspace& ws, NodeRef source) const override {
    const AsgNode& n = ws.node(source);
    return n.parent && ws.model(source.model).node(*n.parent).kind == K::Module;
  }
};

class CopyReplaceOperator final : public ProductiveRule {
 public:
  CopyReplaceOperator(std::string name, RuleParams params)
      : ProductiveRule(std::move(name), std::move(params)),
        detect_(param("OtD")),
        replace_(param("OtR")) {
    if (detect_.empty() || replace_.empty())
      throw MigrationError(ErrorCode::PreconditionFailed,
                           this->name() + " needs parameters OtD and OtR");
  }
  std::string summary() const override {
    return "BinaryOperation '" + detect_ + "'; same operation with '" + replace_ + "'";
  }
  bool condition(const Workspace& ws, NodeRef source, NodeRef) const override {
    const AsgNode& n = ws.node(source);
    return n.kind == K::BinaryOperation && n.payload.text == detect_;
  }
  NodeId apply(RuleContext& ctx, NodeRef source, NodeRef target) const override {
    Payload payload = ctx.workspace().node(source).payload;
    payload.text = replace_;
    NodeId created = ctx.workspace().model(target.model).add_node(
        target.node, K::BinaryOperation, {}, payload);
    migrate_children(ctx, source, {target.model, created});
    return created;
  }

 private:
  std::string detect_;
  std::string replace_;
};

// -------------------------------------------------------------- adaptive

class SimpleRename final : public AdaptiveRule {
 public:
  using AdaptiveRule::AdaptiveRule;
  std::string summary() const override {
    return "type or variable reference to a stub of the mapped source; rebind to the "
           "target";
  }
  bool condition(const Workspace& ws, NodeRef reference,
                 const Mapping* mapping) const override {
    if (!unresolved_for(ws, reference, mapping)) return false;
    K ref = ws.node(reference).kind;
    K target = ws.node(mapping->target).kind;
    if (ref == K::TypeReference) return is_type_decl(target);
    if (ref == K::VariableAccess) return is_variable_decl(target);
    return false;
  }
  void apply(RuleContext& ctx, NodeRef reference, const Mapping* mapping) const override {
    Model& model = ctx.workspace().model(reference.model);
    model.set_referee(reference.node, mapping->target.node);
    model.set_name(reference.node, model.node(mapping->target.node).name);
  }
};

class RenameAdaptToStaticReceiver final : public AdaptiveRule {
 public:
  using AdaptiveRule::AdaptiveRule;
  std::string summary() const override {
    return "function invocation mapped to a static method; method invocation with the "
           "class as receiver";
  }
  bool condition(const Workspace& ws, NodeRef reference,
                 const Mapping* mapping) const override {
    if (!unresolved_for(ws, reference, mapping)) return false;
    if (ws.node(reference).kind != K::FunctionInvocation) return false;
    const AsgNode* method = target_method(ws, *mapping);
    return method && method->payload.is_static;
  }
  void apply(RuleContext& ctx, NodeRef reference, const Mapping* mapping) const override {
    Model& model = ctx.workspace().model(reference.model);
    const AsgNode& method = model.node(mapping->target.node);
    const AsgNode& owner = model.node(*method.parent);
    NodeId receiver = model.insert_node(reference.node, 0, K::TypeReference, owner.name);
    model.set_referee(receiver, owner.id);
    to_method_invocation(model, reference.node, model.node(mapping->target.node));
  }
};

class RenameAdaptToSameClassReceiver final : public AdaptiveRule {
 public:
  RenameAdaptToSameClassReceiver(std::string name, RuleParams params)
      : AdaptiveRule(std::move(name), std::move(params)),
        receiver_(param("receiver", "this")) {
    if (receiver_ != "this" && receiver_ != "super")
      throw MigrationError(ErrorCode::PreconditionFailed,
                           this->name() + ": receiver must be this or super");
  }
  std::string summary() const override {
    return "function invocation mapped to an instance method of the enclosing class; "
           "method invocation on '" + receiver_ + "'";
  }
  bool condition(const Workspace& ws, NodeRef reference,
                 const Mapping* mapping) const override {
    if (!unresolved_for(ws, reference, mapping)) return false;
    if (ws.node(reference).kind != K::FunctionInvocation) return false;
    const AsgNode* method = target_method(ws, *mapping);
    if (!method || method->payload.is_static) return false;
    const Model& model = ws.model(reference.model);
    auto cls = enclosing(model, reference.node, K::Class);
    if (!cls) return false;
    if (receiver_ == "super") cls = superclass(model, *cls);
    return inherits_from(model, cls, *method->parent);
  }
  void apply(RuleContext& ctx, NodeRef reference, const Mapping* mapping) const override {
    Model& model = ctx.workspace().model(reference.model);
    Payload self;
    self.text = receiver_;
    model.insert_node(reference.node, 0, K::SelfReference, {}, self);
    to_method_invocation(model, reference.node, model.node(mapping->target.node));
  }

 private:
  std::string receiver_;
};

class RenameAdaptToArgumentReceiver final : public AdaptiveRule {
 public:
  using AdaptiveRule::AdaptiveRule;
  std::string summary() const override {
    return "function invocation mapped to an instance method of another class; one "
           "argument, chosen by the user, becomes the receiver";
  }
  bool condition(const Workspace& ws, NodeRef reference,
                 const Mapping* mapping) const override {
    if (!unresolved_for(ws, reference, mapping)) return false;
    const AsgNode& ref = ws.node(reference);
    if (ref.kind != K::FunctionInvocation || ref.children.empty()) return false;
    const AsgNode* method = target_method(ws, *mapping);
    if (!method || method->payload.is_static) return false;
    const Model& model = ws.model(reference.model);
    return !inherits_from(model, enclosing(model, reference.node, K::Class),
                          *method->parent);
  }
  void apply(RuleContext& ctx, NodeRef reference, const Mapping* mapping) const override {
    Workspace& ws = ctx.workspace();
    Model& model = ws.model(reference.model);
    ChoicePrompt prompt;
    prompt.kind = ChoicePrompt::Kind::Argument;
    prompt.subject = "receiver for " + model.node(mapping->target.node).name + " in " +
                     print_node(ws, reference);
    const std::vector<NodeId> args = model.node(reference.node).children;
    for (NodeId arg : args) prompt.options.push_back(print_node(ws, {reference.model, arg}));
    std::size_t pick = ctx.choose(prompt);
    if (pick >= args.size())
      throw MigrationError(ErrorCode::ChoiceAbandoned, "argument index out of range");
    model.move_node(args[pick], reference.node, 0);
    to_method_invocation(model, reference.node, model.node(mapping->target.node));
  }
};

class Autowrap final : public AdaptiveRule {
 public:
  using AdaptiveRule::AdaptiveRule;
  bool fallback() const noexcept override { return true; }
  std::string summary() const override {
    return "reference to an unmapped library element; create a skeleton in " +
           std::string(kShimClass) + " (or a root class for types) and map to it";
  }
  bool condition(const Workspace& ws, NodeRef reference, const Mapping* mapping) const override {
    if (mapping) return false;
    const AsgNode* stub = stub_of(ws, reference);
    if (!stub) return false;
    NodeRef foreign = resolve_through_stubs(ws, *stub->payload.foreign);
    const Model& origin = ws.model(foreign.model);
    const AsgNode& decl = origin.node(foreign.node);
    if (!origin.in_library(foreign.node) || decl.kind == K::StubDeclaration) return false;
    const K ref = ws.node(reference).kind;
    switch (stub->payload.shape) {
      case StubShape::Callable: return ref == K::FunctionInvocation;
      case StubShape::Variable: return ref == K::VariableAccess;
      case StubShape::Type: return ref == K::TypeReference;
    }
    return false;
  }
  void apply(RuleContext& ctx, NodeRef reference, const Mapping*) const override {
    Workspace& ws = ctx.workspace();
    Model& model = ws.model(reference.model);
    const AsgNode& stub = *stub_of(ws, reference);
    const NodeRef foreign = resolve_through_stubs(ws, *stub.payload.foreign);
    const std::string foreign_name = ws.node(foreign).name;
    const StubShape shape = stub.payload.shape;
    const std::string top(top_type_name(model.dialect()));

    NodeId skeleton;
    if (shape == StubShape::Type) {
      auto existing = child_named(model, model.root(), foreign_name);
      skeleton = existing ? *existing : model.add_node(model.root(), K::Class, foreign_name);
    } else {
      NodeId shims = shim_class(model);
      if (auto existing = child_named(model, shims, foreign_name)) {
        skeleton = *existing;
      } else if (shape == StubShape::Callable) {
        Payload payload;
        payload.is_static = true;
        payload.visibility = Visibility::Public;
        skeleton = model.add_node(shims, K::Method, foreign_name, payload);
        const AsgNode& call = model.node(reference.node);
        const bool statement =
            call.parent && model.node(*call.parent).kind == K::ExpressionStatement;
        add_type_ref(model, skeleton, statement ? "void" : top);
        const std::size_t arity = call.children.size();
        for (std::size_t i = 0; i < arity; ++i) {
          NodeId p = model.add_node(skeleton, K::Parameter, "arg" + std::to_string(i + 1));
          add_type_ref(model, p, top);
        }
      } else {
        Payload payload;
        payload.is_static = true;
        payload.visibility = Visibility::Public;
        skeleton = model.add_node(shims, K::AttributeDeclaration, foreign_name, payload);
        add_type_ref(model, skeleton, top);
      }
    }
    ctx.register_mapping(foreign, {reference.model, skeleton},
                         ContextId{reference.model, model.root()},
                         MappingOrigin::ProduceAuto);
    ctx.log(name() + ": skeleton " + qualified_path(ws, {reference.model, skeleton}));
  }

 private:
  static NodeId shim_class(Model& model) {
    if (auto existing = child_named(model, model.root(), kShimClass)) return *existing;
    Payload payload;
    payload.visibility = Visibility::Public;
    return model.add_node(model.root(), K::Class, std::string(kShimClass), payload);
  }
};

// --------------------------------------------------------------- factory

using Factory = std::function<std::shared_ptr<const Rule>(std::string, RuleParams)>;

template <typename T>
Factory factory() {
  return [](std::string name, RuleParams params) {
    return std::make_shared<const T>(std::move(name), std::move(params));
  };
}

struct Builtin {
  RuleCatalogEntry entry;
  Factory make;
};

const std::vector<Builtin>& builtins() {
  static const std::vector<Builtin> list = [] {
    std::vector<Builtin> out;
    auto add = [&](std::string name, RuleFamily family, std::vector<std::string> params,
                   Factory make, RuleParams sample = {}) {
      std::string summary = make(name, sample)->summary();
      out.push_back({{std::move(name), family, std::move(params), std::move(summary)},
                     std::move(make)});
    };
    const auto P = RuleFamily::Productive;
    const auto A = RuleFamily::Adaptive;
    add("AnyCopy", P, {}, factory<AnyCopy>());
    add("CopyAsStaticMethod", P, {"overwrite"}, factory<CopyAsStaticMethod>());
    add("CopyReplaceOperator", P, {"OtD", "OtR"}, factory<CopyReplaceOperator>(),
        {{"OtD", "OtD"}, {"OtR", "OtR"}});
    add("FunctionToMethod", P, {"overwrite"}, factory<FunctionToMethod>());
    add("ModuleToClass", P, {"overwrite"}, factory<ModuleToClass>());
    add("GlobalToAttribute", P, {"overwrite"}, factory<GlobalToAttribute>());
    add("SimpleRename", A, {}, factory<SimpleRename>());
    add("RenameAdaptToStaticReceiver", A, {}, factory<RenameAdaptToStaticReceiver>());
    add("RenameAdaptToSameClassReceiver", A, {"receiver"},
        factory<RenameAdaptToSameClassReceiver>());
    add("RenameAdaptToArgumentReceiver", A, {}, factory<RenameAdaptToArgumentReceiver>());
    add("Autowrap", A, {}, factory<Autowrap>());
    return out;
  }();
  return list;
}

std::string_view canonical(std::string_view name) {
  if (name == "CopyReplaceBinaryOperator") return "CopyReplaceOperator";
  if (name == "RenameAdaptToThisReceiver") return "RenameAdaptToSameClassReceiver";
  return name;
}

}  // namespace

const std::vector<RuleCatalogEntry>& rule_catalog() {
  static const std::vector<RuleCatalogEntry> entries = [] {
    std::vector<RuleCatalogEntry> out;
    for (const auto& b : builtins()) out.push_back(b.entry);
    return out;
  }();
  return entries;
}

std::shared_ptr<const Rule> make_rule(std::string_view name, RuleParams params) {
  std::string_view wanted = canonical(name);
  for (const auto& b : builtins())
    if (b.entry.name == wanted) return b.make(std::string(wanted), std::move(params));
  throw MigrationError(ErrorCode::UnknownRule, "unknown rule '" + std::string(name) + "'");
}

}  // namespace asgmig
