#include "asgmig/graph_ops.hpp"

#include <algorithm>

#include "asgmig/errors.hpp"

namespace asgmig {

NodeId deep_copy(Workspace& ws, NodeRef source, ModelId target_model,
                 NodeId target_parent) {
  const AsgNode& src = ws.node(source);
  Model& target = ws.model(target_model);
  Payload payload = src.payload;
  if (is_reference(src.kind)) payload.origin = source;
  NodeId copy = target.add_node(target_parent, src.kind, src.name, payload);
  // Children are read by value: source and target may share a model.
  const std::vector<NodeId> children = src.children;
  for (NodeId child : children)
    deep_copy(ws, {source.model, child}, target_model, copy);
  return copy;
}

std::optional<StubShape> shape_of(const AsgNode& declaration) noexcept {
  switch (declaration.kind) {
    case NodeKind::Method:
    case NodeKind::SubProcedure:
    case NodeKind::Function:
    case NodeKind::LibraryRoutineDeclaration:
      return StubShape::Callable;
    case NodeKind::VariableDeclaration:
    case NodeKind::AttributeDeclaration:
    case NodeKind::Parameter:
      return StubShape::Variable;
    case NodeKind::PrimitiveTypeDeclaration:
    case NodeKind::Class:
      return StubShape::Type;
    case NodeKind::StubDeclaration:
      return declaration.payload.shape;
    default:
      return std::nullopt;
  }
}

std::optional<NodeId> find_stub(const Model& host, NodeRef foreign) {
  for (NodeId id : host.library()) {
    const AsgNode& n = host.node(id);
    if (n.kind == NodeKind::StubDeclaration && n.payload.foreign == foreign)
      return id;
  }
  return std::nullopt;
}

NodeId make_stub(Workspace& ws, ModelId host, NodeRef foreign, StubShape shape) {
  const AsgNode& target = ws.node(foreign);
  if (!is_declaration(target.kind))
    throw MigrationError(ErrorCode::ForeignNotDeclaration,
                         std::string(to_string(target.kind)) +
                             " cannot be bridged by a stub");
  if (foreign.model == host)
    throw MigrationError(ErrorCode::PreconditionFailed,
                         "a stub must bridge to another model");
  Model& model = ws.model(host);
  if (auto existing = find_stub(model, foreign)) return *existing;
  Payload payload;
  payload.foreign = foreign;
  payload.shape = shape;
  return model.add_library_node(NodeKind::StubDeclaration, target.name,
                                std::move(payload));
}

std::vector<NodeId> stubs(const Model& model) {
  std::vector<NodeId> out;
  for (NodeId id : model.library())
    if (model.node(id).kind == NodeKind::StubDeclaration) out.push_back(id);
  return out;
}

NodeRef resolve_through_stubs(const Workspace& ws, NodeRef declaration) {
  NodeRef current = declaration;
  for (int guard = 0; guard < 64; ++guard) {
    const AsgNode& n = ws.node(current);
    if (n.kind != NodeKind::StubDeclaration || !n.payload.foreign) return current;
    current = *n.payload.foreign;
  }
  throw MigrationError(ErrorCode::PreconditionFailed, "stub cycle");
}

std::vector<NodeId> incoming_references(const Model& model, NodeId decl) {
  std::vector<NodeId> out;
  model.for_each_node([&](const AsgNode& n) {
    if (n.referee == decl) out.push_back(n.id);
  });
  return out;
}

std::vector<NodeId> preorder(const Model& model, NodeId id) {
  std::vector<NodeId> out;
  std::vector<NodeId> pending{id};
  while (!pending.empty()) {
    NodeId current = pending.back();
    pending.pop_back();
    out.push_back(current);
    const auto& children = model.node(current).children;
    pending.insert(pending.end(), children.rbegin(), children.rend());
  }
  return out;
}

std::optional<NodeId> enclosing(const Model& model, NodeId id, NodeKind kind) {
  for (auto p = model.node(id).parent; p; p = model.node(*p).parent)
    if (model.node(*p).kind == kind) return *p;
  return std::nullopt;
}

std::string declaration_path(const Model& model, NodeId id) {
  std::vector<std::string_view> parts;
  const AsgNode* current = &model.node(id);
  while (current->parent) {
    if (is_declaration(current->kind)) parts.push_back(current->name);
    current = &model.node(*current->parent);
  }
  if (current->id != model.root()) parts.push_back(current->name);
  std::string out;
  for (auto it = parts.rbegin(); it != parts.rend(); ++it) {
    if (!out.empty()) out += '.';
    out += *it;
  }
  return out;
}

std::string qualified_path(const Workspace& ws, NodeRef ref) {
  const Model& model = ws.model(ref.model);
  return model.alias() + ":" + declaration_path(model, ref.node);
}

std::optional<NodeId> child_named(const Model& model, NodeId parent,
                                  std::string_view name) {
  for (NodeId child : model.node(parent).children) {
    const AsgNode& n = model.node(child);
    if (is_declaration(n.kind) && n.name == name) return child;
  }
  return std::nullopt;
}

namespace {

std::vector<std::string_view> split_dots(std::string_view path) {
  std::vector<std::string_view> parts;
  while (!path.empty()) {
    auto dot = path.find('.');
    parts.push_back(path.substr(0, dot));
    if (dot == std::string_view::npos) break;
    path.remove_prefix(dot + 1);
  }
  return parts;
}

std::optional<NodeId> walk(const Model& model, NodeId start,
                           std::span<const std::string_view> parts) {
  NodeId current = start;
  for (auto part : parts) {
    auto next = child_named(model, current, part);
    if (!next) return std::nullopt;
    current = *next;
  }
  return current;
}

}  // namespace

NodeRef resolve_path(const Workspace& ws, std::string_view qualified) {
  auto colon = qualified.find(':');
  if (colon == std::string_view::npos)
    throw MigrationError(ErrorCode::UnknownPath,
                         "expected alias:path, got '" + std::string(qualified) + "'");
  std::string_view alias = qualified.substr(0, colon);
  const Model* model = ws.find_model(alias);
  if (!model)
    throw MigrationError(ErrorCode::UnknownModel,
                         "no model named '" + std::string(alias) + "'");
  auto parts = split_dots(qualified.substr(colon + 1));
  if (parts.empty()) return {model->id(), model->root()};
  if (auto hit = walk(*model, model->root(), parts)) return {model->id(), *hit};
  // Library region: real declarations shadow stubs of the same name.
  for (bool want_stub : {false, true}) {
    for (NodeId top : model->library()) {
      const AsgNode& n = model->node(top);
      if ((n.kind == NodeKind::StubDeclaration) != want_stub || n.name != parts[0])
        continue;
      if (auto hit = walk(*model, top, std::span(parts).subspan(1)))
        return {model->id(), *hit};
    }
  }
  throw MigrationError(ErrorCode::UnknownPath,
                       "no declaration at '" + std::string(qualified) + "'");
}

}  // namespace asgmig
