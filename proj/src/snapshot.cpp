#include "asgmig/snapshot.hpp"

#include "asgmig/graph_ops.hpp"

namespace asgmig {

namespace {

std::string referee_path(const Workspace& ws, const Model& model, NodeId referee,
                         const SnapshotOptions& options) {
  const AsgNode* target = model.find(referee);
  if (!target) return "<dangling>";
  if (target->kind == NodeKind::StubDeclaration && target->payload.foreign) {
    std::string out = "stub>" + qualified_path(ws, *target->payload.foreign);
    if (options.with_ids) out += "#" + std::to_string(referee.value);
    return out;
  }
  std::string out = model.alias() + ":" + declaration_path(model, referee);
  if (options.with_ids) out += "#" + std::to_string(referee.value);
  return out;
}

void emit(const Workspace& ws, const Model& model, NodeId id, int depth,
          const SnapshotOptions& options, std::string& out) {
  const AsgNode& n = model.node(id);
  out.append(static_cast<std::size_t>(depth) * 2, ' ');
  out += std::to_string(depth);
  out += ' ';
  out += to_string(n.kind);
  if (options.with_ids) out += " #" + std::to_string(n.id.value);
  if (!n.name.empty()) out += " name=" + n.name;
  if (!n.payload.text.empty()) out += " text=\"" + n.payload.text + "\"";
  if (n.payload.is_static) out += " static";
  if (n.payload.visibility != Visibility::Default)
    out += " " + std::string(to_string(n.payload.visibility));
  if (n.kind == NodeKind::StubDeclaration && n.payload.foreign) {
    out += " foreign=" + qualified_path(ws, *n.payload.foreign);
    out += " shape=" + std::string(to_string(n.payload.shape));
  }
  if (options.with_ids && n.payload.origin)
    out += " origin=" + to_string(*n.payload.origin);
  if (is_reference(n.kind))
    out += " -> " + (n.referee ? referee_path(ws, model, *n.referee, options)
                               : std::string("<unbound>"));
  out += '\n';
  for (NodeId child : n.children) emit(ws, model, child, depth + 1, options, out);
}

}  // namespace

std::string snapshot(const Workspace& ws, ModelId model_id,
                     const SnapshotOptions& options) {
  const Model& model = ws.model(model_id);
  std::string out = "model " + model.alias() + " " +
                    std::string(to_string(model.dialect())) + "\n";
  if (options.with_ids) out += "next " + std::to_string(model.next_id()) + "\n";
  emit(ws, model, model.root(), 0, options, out);
  if (options.with_library) {
    out += "library\n";
    for (NodeId id : model.library()) emit(ws, model, id, 1, options, out);
  }
  return out;
}

std::string snapshot_subtree(const Workspace& ws, NodeRef node,
                             const SnapshotOptions& options) {
  std::string out;
  emit(ws, ws.model(node.model), node.node, 0, options, out);
  return out;
}

}  // namespace asgmig
