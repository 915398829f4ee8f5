#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "asgmig/rule.hpp"

namespace asgmig {

class Journal;

struct InstallationId {
  std::uint32_t value = 0;
  auto operator<=>(const InstallationId&) const = default;
};

struct Installation {
  InstallationId id;
  std::shared_ptr<const Rule> rule;
  ContextId context;
  std::uint64_t seq = 0;
};

/// A positive adaptive lookup result.
struct AdaptiveMatch {
  const Installation* installation = nullptr;
  const Mapping* mapping = nullptr;
};

/// Rule installations by context. Not journaled: rollback leaves
/// installations untouched.
class RuleRegistry {
 public:
  InstallationId install(const Workspace& ws, std::shared_ptr<const Rule> rule,
                         ContextId context);
  void uninstall(InstallationId id);

  const std::vector<Installation>& installations() const noexcept { return items_; }
  std::vector<const Installation*> installed_at(const ContextId& context) const;

  /// Every productive installation whose condition holds, in lookup order:
  /// context chain innermost first, newest installation first per context.
  std::vector<const Installation*> productive_candidates(const Workspace& ws,
                                                         NodeRef source,
                                                         NodeRef target) const;

  /// First candidate in Automatic mode; otherwise the chooser picks among all
  /// candidates. Throws NoRuleFound when nothing matches.
  const Installation& lookup_productive(const Workspace& ws, NodeRef source,
                                        NodeRef target, LookupMode mode,
                                        Chooser* chooser) const;

  /// Adaptive installations positive for (reference, mapping), lookup order.
  std::vector<const Installation*> adaptive_candidates(const Workspace& ws,
                                                       NodeRef reference,
                                                       const Mapping* mapping) const;
  const Installation* lookup_adaptive(const Workspace& ws, NodeRef reference,
                                      const Mapping& mapping) const;

  /// Fallback adaptive installations positive for a reference with no mapping.
  std::vector<const Installation*> fallback_candidates(const Workspace& ws,
                                                       NodeRef reference) const;

 private:
  std::vector<const Installation*> walk(const Workspace& ws, NodeRef at,
                                        RuleFamily family) const;

  std::vector<Installation> items_;
  std::uint64_t next_seq_ = 1;
  std::uint32_t next_id_ = 1;
};

/// Scoped mappings. Mutations are journaled when a journal is attached.
class MappingRegistry {
 public:
  /// Stores the mapping (id/seq assigned here). A duplicate (source, target,
  /// scope) returns the existing id.
  MappingId register_mapping(const Workspace& ws, NodeRef source, NodeRef target,
                             ContextId scope, MappingOrigin origin);

  const std::vector<Mapping>& all() const noexcept { return items_; }
  const Mapping* find(MappingId id) const noexcept;
  /// Mappings whose scope is exactly context.
  std::vector<const Mapping*> scoped_at(const ContextId& context) const;
  /// Mappings applicable to a reference that points to a stub, most concrete
  /// scope first, newest first on ties.
  std::vector<const Mapping*> mappings_for(const Workspace& ws, NodeRef reference) const;

  void attach_journal(Journal* journal) noexcept { journal_ = journal; }

 private:
  std::vector<Mapping> items_;
  std::uint64_t next_seq_ = 1;
  Journal* journal_ = nullptr;
};

/// True when the stub-side declaration stands for source (directly or through
/// further stubs).
bool stands_for(const Workspace& ws, NodeRef stub_foreign, NodeRef source);

}  // namespace asgmig
