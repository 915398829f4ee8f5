#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "asgmig/ids.hpp"
#include "asgmig/node_kind.hpp"

namespace asgmig {

class Journal;

enum class Dialect { MiniProc, MiniOO, MiniScript };

std::string_view to_string(Dialect dialect) noexcept;
std::optional<Dialect> dialect_from_string(std::string_view name) noexcept;

enum class Visibility : std::uint8_t { Default, Public, Private };

/// Expected shape of whatever a stub stands for.
enum class StubShape : std::uint8_t { Callable, Variable, Type };

std::string_view to_string(Visibility visibility) noexcept;
std::string_view to_string(StubShape shape) noexcept;

/// Kind-specific scalar data carried by a node.
struct Payload {
  std::string text;  // literal value, operator symbol or receiver keyword
  bool is_static = false;
  Visibility visibility = Visibility::Default;
  std::optional<NodeRef> foreign;  // stubs: the bridged declaration
  StubShape shape = StubShape::Callable;
  std::optional<NodeRef> origin;  // references: node this one was copied from

  bool operator==(const Payload&) const = default;
};

struct AsgNode {
  NodeId id;
  NodeKind kind = NodeKind::Project;
  std::string name;  // declarations: identifier; references: spelling used
  std::vector<NodeId> children;
  std::optional<NodeId> parent;
  std::optional<NodeId> referee;
  Payload payload;

  bool operator==(const AsgNode&) const = default;
};

/// One application's ASG: a user tree rooted at a Project declaration plus a
/// library region of definition-less declarations (primitives, library
/// routines, stubs). Nothing here enforces dialect legality.
class Model {
 public:
  Model(ModelId id, std::string alias, Dialect dialect);

  Model(const Model&) = delete;
  Model& operator=(const Model&) = delete;

  ModelId id() const noexcept { return id_; }
  const std::string& alias() const noexcept { return alias_; }
  Dialect dialect() const noexcept { return dialect_; }
  NodeId root() const noexcept { return root_; }

  const AsgNode& node(NodeId id) const;
  const AsgNode* find(NodeId id) const noexcept;
  bool contains(NodeId id) const noexcept { return nodes_.contains(id); }
  std::size_t size() const noexcept { return nodes_.size(); }
  std::uint32_t next_id() const noexcept { return next_id_; }

  /// Top-level nodes of the library region, in insertion order.
  std::span<const NodeId> library() const noexcept { return library_; }
  /// True when the node sits in the library region (at any depth).
  bool in_library(NodeId id) const;
  /// Top-level ancestor of a node (root for user tree, library entry otherwise).
  NodeId top_of(NodeId id) const;

  std::size_t index_in_parent(NodeId id) const;

  template <typename Fn>
  void for_each_node(Fn&& fn) const {
    for (const auto& [id, node] : nodes_) fn(node);
  }

  // Mutations. All of them are journaled when a journal is attached.
  NodeId add_node(NodeId parent, NodeKind kind, std::string name = {},
                  Payload payload = {});
  NodeId insert_node(NodeId parent, std::size_t position, NodeKind kind,
                     std::string name = {}, Payload payload = {});
  NodeId add_library_node(NodeKind kind, std::string name, Payload payload = {});
  void set_referee(NodeId id, std::optional<NodeId> referee);
  void set_name(NodeId id, std::string name);
  void set_kind(NodeId id, NodeKind kind);
  void set_payload(NodeId id, Payload payload);
  /// Detach a node and append it (or insert at position) under new_parent.
  void move_node(NodeId id, NodeId new_parent,
                 std::optional<std::size_t> position = std::nullopt);
  /// Remove a node and all its descendants; the node may be a library entry.
  void remove_subtree(NodeId id);

  void attach_journal(Journal* journal) noexcept { journal_ = journal; }

 private:
  AsgNode& mutable_node(NodeId id);
  NodeId allocate(NodeKind kind, std::string name, Payload payload);
  void remember(NodeId id);
  void remember_meta();

  ModelId id_;
  std::string alias_;
  Dialect dialect_;
  NodeId root_;
  std::map<NodeId, AsgNode> nodes_;
  std::vector<NodeId> library_;
  std::uint32_t next_id_ = 1;
  Journal* journal_ = nullptr;
};

/// Every model of a session. Models are addressed by id; cross-model edges
/// only exist through stub payloads and mapping records.
class Workspace {
 public:
  Workspace() = default;
  Workspace(const Workspace&) = delete;
  Workspace& operator=(const Workspace&) = delete;

  Model& add_model(std::string alias, Dialect dialect);

  Model& model(ModelId id);
  const Model& model(ModelId id) const;
  Model* find_model(std::string_view alias) noexcept;
  const Model* find_model(std::string_view alias) const noexcept;
  bool has_model(ModelId id) const noexcept;

  std::vector<ModelId> model_ids() const;

  const AsgNode& node(NodeRef ref) const { return model(ref.model).node(ref.node); }
  const AsgNode* find(NodeRef ref) const noexcept;

  void attach_journal(Journal* journal) noexcept;

 private:
  std::vector<std::unique_ptr<Model>> models_;
};

}  // namespace asgmig
