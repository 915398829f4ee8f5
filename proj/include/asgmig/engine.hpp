#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "asgmig/journal.hpp"
#include "asgmig/registry.hpp"

namespace asgmig {

/// What one directive did.
struct DirectiveResult {
  std::uint64_t transaction = 0;
  std::optional<NodeRef> produced;     // root of a produce
  std::vector<NodeRef> created;        // every node created, creation order
  std::vector<MappingId> mappings;     // registered by this directive
  std::vector<NodeRef> stubs_created;
  std::vector<NodeRef> adapted;        // references rewritten by adaptive rules
  std::vector<NodeRef> stubs_removed;  // ids valid only before the sweep
  std::vector<NodeRef> unresolved;     // references the directive left unresolved
  std::vector<std::string> log;
  std::size_t prompts = 0;
};

struct UnresolvedRow {
  NodeRef reference;
  std::optional<NodeRef> stub;
  std::string foreign_path;  // "alias:path" of the bridged declaration, or the spelling
};

struct TransactionInfo {
  std::uint64_t id = 0;
  std::string description;
};

/// Executes directives against a workspace. Each produce/map is one
/// transaction; rollback is LIFO.
class Engine {
 public:
  explicit Engine(Workspace& ws);
  ~Engine();
  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  Workspace& workspace() noexcept { return ws_; }
  const Workspace& workspace() const noexcept { return ws_; }
  RuleRegistry& rules() noexcept { return rules_; }
  const RuleRegistry& rules() const noexcept { return rules_; }
  const MappingRegistry& mappings() const noexcept { return mappings_; }

  /// Chooser used by MultipleChoice/Debug lookups and by rules that ask.
  void set_chooser(Chooser* chooser) noexcept { chooser_ = chooser; }
  Chooser* chooser() const noexcept { return chooser_; }

  /// Migrate source into target (a declaration of another model).
  DirectiveResult produce(NodeRef source, NodeRef target,
                          LookupMode mode = LookupMode::Automatic);

  /// Declare source equivalent to target within scope (default: the target
  /// model root) and adapt the references that were waiting for it.
  DirectiveResult map(NodeRef source, NodeRef target,
                      std::optional<ContextId> scope = std::nullopt,
                      LookupMode mode = LookupMode::Automatic);

  /// Undo a transaction; it must be the most recent one.
  void rollback(std::uint64_t transaction);
  /// Undo the most recent transaction; returns its id.
  std::uint64_t rollback_last();

  const std::vector<TransactionInfo>& history() const noexcept { return history_; }

  /// Validate, print and write <dir>/<alias><ext>. Returns the written path.
  std::filesystem::path export_model(ModelId model, const std::filesystem::path& dir);

  /// References under context that point to a stub or to nothing.
  std::vector<UnresolvedRow> unresolved_report(const ContextId& context) const;

  const std::vector<std::string>& log() const noexcept { return log_; }
  void append_log(std::string line) { log_.push_back(std::move(line)); }

 private:
  class Run;
  friend class Run;

  template <typename Body>
  DirectiveResult transact(std::string description, Body&& body);

  Workspace& ws_;
  RuleRegistry rules_;
  MappingRegistry mappings_;
  Chooser* chooser_ = nullptr;
  std::vector<TransactionInfo> history_;
  std::vector<std::unique_ptr<Journal>> journals_;
  std::uint64_t next_txn_ = 1;
  std::vector<std::string> log_;
};

}  // namespace asgmig
