#pragma once

#include <compare>
#include <optional>
#include <string>
#include <vector>

#include "asgmig/ids.hpp"

namespace asgmig {

class Workspace;

/// A declaration acting as a scope for rules and mappings. The global root
/// context sits above every model and is encoded with null ids.
struct ContextId {
  ModelId model;
  NodeId node;

  static constexpr ContextId global() noexcept { return {}; }
  bool is_global() const noexcept { return !model.valid(); }
  NodeRef ref() const noexcept { return {model, node}; }

  auto operator<=>(const ContextId&) const = default;
};

/// Enclosing declaration contexts of a node, innermost first: the node itself
/// when it is a declaration, proper ancestor declarations, then the model root
/// and finally the global root. Library nodes yield [root, global].
std::vector<ContextId> context_chain(const Workspace& ws, NodeRef node);

/// First entry of context_chain.
ContextId nearest_context(const Workspace& ws, NodeRef node);

/// Position of ctx on the chain of node, or nullopt when not on it.
std::optional<std::size_t> chain_depth(const Workspace& ws, NodeRef node,
                                       const ContextId& ctx);

/// True when ctx names the global root or an existing declaration node.
bool context_exists(const Workspace& ws, const ContextId& ctx) noexcept;

std::string describe(const Workspace& ws, const ContextId& ctx);

}  // namespace asgmig
