#include "asgmig/model.hpp"

#include <algorithm>

#include "asgmig/errors.hpp"
#include "asgmig/journal.hpp"

namespace asgmig {

std::string_view to_string(Dialect dialect) noexcept {
  switch (dialect) {
    case Dialect::MiniProc: return "MiniProc";
    case Dialect::MiniOO: return "MiniOO";
    case Dialect::MiniScript: return "MiniScript";
  }
  return "?";
}

std::optional<Dialect> dialect_from_string(std::string_view name) noexcept {
  if (name == "MiniProc") return Dialect::MiniProc;
  if (name == "MiniOO") return Dialect::MiniOO;
  if (name == "MiniScript") return Dialect::MiniScript;
  return std::nullopt;
}

std::string_view to_string(Visibility visibility) noexcept {
  switch (visibility) {
    case Visibility::Default: return "";
    case Visibility::Public: return "public";
    case Visibility::Private: return "private";
  }
  return "";
}

std::string_view to_string(StubShape shape) noexcept {
  switch (shape) {
    case StubShape::Callable: return "callable";
    case StubShape::Variable: return "variable";
    case StubShape::Type: return "type";
  }
  return "?";
}

Model::Model(ModelId id, std::string alias, Dialect dialect)
    : id_(id), alias_(std::move(alias)), dialect_(dialect) {
  root_ = allocate(NodeKind::Project, alias_, {});
}

const AsgNode& Model::node(NodeId id) const {
  auto it = nodes_.find(id);
  if (it == nodes_.end())
    throw MigrationError(ErrorCode::UnknownNode,
                         "node " + std::to_string(id.value) + " not in model " +
                             alias_);
  return it->second;
}

const AsgNode* Model::find(NodeId id) const noexcept {
  auto it = nodes_.find(id);
  return it == nodes_.end() ? nullptr : &it->second;
}

AsgNode& Model::mutable_node(NodeId id) {
  auto it = nodes_.find(id);
  if (it == nodes_.end())
    throw MigrationError(ErrorCode::UnknownNode,
                         "node " + std::to_string(id.value) + " not in model " +
                             alias_);
  return it->second;
}

NodeId Model::top_of(NodeId id) const {
  const AsgNode* current = &node(id);
  while (current->parent) current = &node(*current->parent);
  return current->id;
}

bool Model::in_library(NodeId id) const { return top_of(id) != root_; }

std::size_t Model::index_in_parent(NodeId id) const {
  const AsgNode& n = node(id);
  if (!n.parent) return 0;
  const auto& siblings = node(*n.parent).children;
  return static_cast<std::size_t>(
      std::find(siblings.begin(), siblings.end(), id) - siblings.begin());
}

void Model::remember(NodeId id) {
  if (!journal_) return;
  auto it = nodes_.find(id);
  if (it == nodes_.end()) {
    journal_->record([this, id] { nodes_.erase(id); });
  } else {
    journal_->record([this, image = it->second] { nodes_[image.id] = image; });
  }
}

void Model::remember_meta() {
  if (!journal_) return;
  journal_->record(
      [this, next = next_id_, lib = library_] {
        next_id_ = next;
        library_ = lib;
      });
}

NodeId Model::allocate(NodeKind kind, std::string name, Payload payload) {
  remember_meta();
  NodeId id{next_id_++};
  remember(id);
  AsgNode n;
  n.id = id;
  n.kind = kind;
  n.name = std::move(name);
  n.payload = std::move(payload);
  nodes_.emplace(id, std::move(n));
  if (journal_) journal_->note_created({id_, id});
  return id;
}

NodeId Model::add_node(NodeId parent, NodeKind kind, std::string name,
                       Payload payload) {
  auto it = nodes_.find(parent);
  if (it == nodes_.end())
    throw MigrationError(ErrorCode::UnknownParent,
                         "parent " + std::to_string(parent.value) +
                             " not in model " + alias_);
  return insert_node(parent, it->second.children.size(), kind, std::move(name),
                     std::move(payload));
}

NodeId Model::insert_node(NodeId parent, std::size_t position, NodeKind kind,
                          std::string name, Payload payload) {
  if (!nodes_.contains(parent))
    throw MigrationError(ErrorCode::UnknownParent,
                         "parent " + std::to_string(parent.value) +
                             " not in model " + alias_);
  NodeId id = allocate(kind, std::move(name), std::move(payload));
  remember(parent);
  AsgNode& p = nodes_.at(parent);
  position = std::min(position, p.children.size());
  p.children.insert(p.children.begin() + static_cast<std::ptrdiff_t>(position), id);
  nodes_.at(id).parent = parent;
  return id;
}

NodeId Model::add_library_node(NodeKind kind, std::string name, Payload payload) {
  NodeId id = allocate(kind, std::move(name), std::move(payload));
  library_.push_back(id);
  return id;
}

void Model::set_referee(NodeId id, std::optional<NodeId> referee) {
  AsgNode& n = mutable_node(id);
  if (referee && !is_reference(n.kind))
    throw MigrationError(ErrorCode::PreconditionFailed,
                         std::string(to_string(n.kind)) + " cannot have a referee");
  if (referee && !nodes_.contains(*referee))
    throw MigrationError(ErrorCode::UnknownNode,
                         "referee " + std::to_string(referee->value) +
                             " not in model " + alias_);
  remember(id);
  n.referee = referee;
}

void Model::set_name(NodeId id, std::string name) {
  mutable_node(id);
  remember(id);
  nodes_.at(id).name = std::move(name);
}

void Model::set_kind(NodeId id, NodeKind kind) {
  mutable_node(id);
  remember(id);
  nodes_.at(id).kind = kind;
}

void Model::set_payload(NodeId id, Payload payload) {
  mutable_node(id);
  remember(id);
  nodes_.at(id).payload = std::move(payload);
}

void Model::move_node(NodeId id, NodeId new_parent,
                      std::optional<std::size_t> position) {
  if (!nodes_.contains(new_parent))
    throw MigrationError(ErrorCode::UnknownParent,
                         "parent " + std::to_string(new_parent.value) +
                             " not in model " + alias_);
  for (std::optional<NodeId> walk = new_parent; walk; walk = node(*walk).parent)
    if (*walk == id)
      throw MigrationError(ErrorCode::PreconditionFailed,
                           "cannot move a node under its own descendant");
  AsgNode& n = mutable_node(id);
  remember(id);
  if (n.parent) {
    remember(*n.parent);
    auto& siblings = nodes_.at(*n.parent).children;
    siblings.erase(std::find(siblings.begin(), siblings.end(), id));
  } else if (auto lib = std::find(library_.begin(), library_.end(), id);
             lib != library_.end()) {
    remember_meta();
    library_.erase(lib);
  }
  remember(new_parent);
  auto& dest = nodes_.at(new_parent).children;
  std::size_t at = std::min(position.value_or(dest.size()), dest.size());
  dest.insert(dest.begin() + static_cast<std::ptrdiff_t>(at), id);
  nodes_.at(id).parent = new_parent;
}

void Model::remove_subtree(NodeId id) {
  if (id == root_)
    throw MigrationError(ErrorCode::PreconditionFailed, "cannot remove model root");
  const AsgNode& n = node(id);
  if (n.parent) {
    remember(*n.parent);
    auto& siblings = nodes_.at(*n.parent).children;
    siblings.erase(std::find(siblings.begin(), siblings.end(), id));
  } else {
    remember_meta();
    library_.erase(std::find(library_.begin(), library_.end(), id));
  }
  std::vector<NodeId> pending{id};
  while (!pending.empty()) {
    NodeId current = pending.back();
    pending.pop_back();
    const auto& children = nodes_.at(current).children;
    pending.insert(pending.end(), children.begin(), children.end());
    remember(current);
    nodes_.erase(current);
  }
}

Model& Workspace::add_model(std::string alias, Dialect dialect) {
  if (find_model(alias))
    throw MigrationError(ErrorCode::PreconditionFailed,
                         "duplicate model alias " + alias);
  ModelId id{static_cast<std::uint32_t>(models_.size() + 1)};
  models_.push_back(std::make_unique<Model>(id, std::move(alias), dialect));
  return *models_.back();
}

Model& Workspace::model(ModelId id) {
  if (!has_model(id))
    throw MigrationError(ErrorCode::UnknownModel,
                         "model " + std::to_string(id.value));
  return *models_[id.value - 1];
}

const Model& Workspace::model(ModelId id) const {
  if (!has_model(id))
    throw MigrationError(ErrorCode::UnknownModel,
                         "model " + std::to_string(id.value));
  return *models_[id.value - 1];
}

bool Workspace::has_model(ModelId id) const noexcept {
  return id.value >= 1 && id.value <= models_.size();
}

Model* Workspace::find_model(std::string_view alias) noexcept {
  for (auto& m : models_)
    if (m->alias() == alias) return m.get();
  return nullptr;
}

const Model* Workspace::find_model(std::string_view alias) const noexcept {
  for (const auto& m : models_)
    if (m->alias() == alias) return m.get();
  return nullptr;
}

std::vector<ModelId> Workspace::model_ids() const {
  std::vector<ModelId> ids;
  for (const auto& m : models_) ids.push_back(m->id());
  return ids;
}

const AsgNode* Workspace::find(NodeRef ref) const noexcept {
  if (!has_model(ref.model)) return nullptr;
  return models_[ref.model.value - 1]->find(ref.node);
}

void Workspace::attach_journal(Journal* journal) noexcept {
  for (auto& m : models_) m->attach_journal(journal);
}

}  // namespace asgmig
