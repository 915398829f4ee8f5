#include "asgmig/context.hpp"

#include <algorithm>

#include "asgmig/graph_ops.hpp"
#include "asgmig/model.hpp"

namespace asgmig {

std::vector<ContextId> context_chain(const Workspace& ws, NodeRef ref) {
  const Model& model = ws.model(ref.model);
  std::vector<ContextId> chain;
  const AsgNode* current = &model.node(ref.node);
  while (current->parent) {
    if (is_declaration(current->kind)) chain.push_back({ref.model, current->id});
    current = &model.node(*current->parent);
  }
  chain.push_back({ref.model, model.root()});
  chain.push_back(ContextId::global());
  return chain;
}

ContextId nearest_context(const Workspace& ws, NodeRef node) {
  return context_chain(ws, node).front();
}

std::optional<std::size_t> chain_depth(const Workspace& ws, NodeRef node,
                                       const ContextId& ctx) {
  auto chain = context_chain(ws, node);
  auto it = std::find(chain.begin(), chain.end(), ctx);
  if (it == chain.end()) return std::nullopt;
  return static_cast<std::size_t>(it - chain.begin());
}

bool context_exists(const Workspace& ws, const ContextId& ctx) noexcept {
  if (ctx.is_global()) return !ctx.node.valid();
  const AsgNode* n = ws.find(ctx.ref());
  return n && is_declaration(n->kind);
}

std::string describe(const Workspace& ws, const ContextId& ctx) {
  if (ctx.is_global()) return "<global>";
  if (!ws.find(ctx.ref())) return "<deleted " + to_string(ctx.ref()) + ">";
  return qualified_path(ws, ctx.ref());
}

}  // namespace asgmig
