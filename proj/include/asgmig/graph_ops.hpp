#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "asgmig/model.hpp"

namespace asgmig {

/// Structural copy of the subtree rooted at source, appended under
/// target_parent. Kinds, names, payloads and child order are preserved;
/// referees are left empty for the engine to rebind.
NodeId deep_copy(Workspace& ws, NodeRef source, ModelId target_model,
                 NodeId target_parent);

/// Shape a stub needs in order to stand for a declaration of this kind.
std::optional<StubShape> shape_of(const AsgNode& declaration) noexcept;

/// Install (or return the existing) stub in host bridging to foreign.
NodeId make_stub(Workspace& ws, ModelId host, NodeRef foreign, StubShape shape);
std::optional<NodeId> find_stub(const Model& host, NodeRef foreign);
std::vector<NodeId> stubs(const Model& model);

/// Follow a stub (possibly through further stubs in other models) down to a
/// real declaration. Non-stub declarations map to themselves.
NodeRef resolve_through_stubs(const Workspace& ws, NodeRef declaration);

/// Reference nodes whose referee is decl.
std::vector<NodeId> incoming_references(const Model& model, NodeId decl);

/// Pre-order list of the subtree rooted at id.
std::vector<NodeId> preorder(const Model& model, NodeId id);

/// Nearest proper ancestor of the given kind.
std::optional<NodeId> enclosing(const Model& model, NodeId id, NodeKind kind);

/// Dot-separated declaration names from the model root (exclusive) or from
/// the library region; e.g. "MyPackage.MyDestination.log".
std::string declaration_path(const Model& model, NodeId id);
/// "alias:path".
std::string qualified_path(const Workspace& ws, NodeRef ref);

/// Resolve "alias:path" (empty path = model root). The user tree is searched
/// first, then the library region.
NodeRef resolve_path(const Workspace& ws, std::string_view qualified);

/// Named child of a node, if any.
std::optional<NodeId> child_named(const Model& model, NodeId parent,
                                  std::string_view name);

}  // namespace asgmig
