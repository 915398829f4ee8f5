#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "asgmig/context.hpp"
#include "asgmig/model.hpp"

namespace asgmig {

enum class RuleFamily { Productive, Adaptive };
enum class LookupMode { Automatic, MultipleChoice, Debug };
enum class MappingOrigin { UserDirective, ProduceAuto };

std::string_view to_string(RuleFamily family) noexcept;
std::string_view to_string(LookupMode mode) noexcept;
std::string_view to_string(MappingOrigin origin) noexcept;
std::optional<LookupMode> lookup_mode_from_string(std::string_view text) noexcept;

struct MappingId {
  std::uint32_t value = 0;
  auto operator<=>(const MappingId&) const = default;
};

/// Source declaration is equivalent to target declaration within scope.
struct Mapping {
  MappingId id;
  NodeRef source;
  NodeRef target;
  ContextId scope;
  MappingOrigin origin = MappingOrigin::UserDirective;
  std::uint64_t seq = 0;
};

using RuleParams = std::map<std::string, std::string, std::less<>>;

/// A question the engine cannot answer alone.
struct ChoicePrompt {
  enum class Kind { Rule, Argument };
  Kind kind = Kind::Rule;
  std::string subject;  // what is being migrated or adapted
  std::vector<std::string> options;
};

/// Answers prompts for MultipleChoice/Debug lookups and for rules that need a
/// human decision. Returns an option index; throws to abandon.
class Chooser {
 public:
  virtual ~Chooser() = default;
  virtual std::size_t choose(const ChoicePrompt& prompt) = 0;
};

class RuleContext;

class Rule {
 public:
  Rule(std::string name, RuleParams params)
      : name_(std::move(name)), params_(std::move(params)) {}
  virtual ~Rule() = default;

  const std::string& name() const noexcept { return name_; }
  const RuleParams& params() const noexcept { return params_; }
  std::string param(std::string_view key, std::string fallback = {}) const;
  virtual RuleFamily family() const noexcept = 0;
  /// One-line condition/operation summary.
  virtual std::string summary() const = 0;

 private:
  std::string name_;
  RuleParams params_;
};

/// Creates target entities from a source entity. target is the node that
/// will parent the result; it is a declaration at the directive root and may
/// be any node during recursion.
class ProductiveRule : public Rule {
 public:
  using Rule::Rule;
  RuleFamily family() const noexcept override { return RuleFamily::Productive; }
  virtual bool condition(const Workspace& ws, NodeRef source, NodeRef target) const = 0;
  virtual NodeId apply(RuleContext& ctx, NodeRef source, NodeRef target) const = 0;
};

/// Rewrites a reference that points to a stub once an equivalent declaration
/// is known. Fallback rules run with mapping == nullptr when no mapping
/// applies to the reference.
class AdaptiveRule : public Rule {
 public:
  using Rule::Rule;
  RuleFamily family() const noexcept override { return RuleFamily::Adaptive; }
  virtual bool fallback() const noexcept { return false; }
  virtual bool condition(const Workspace& ws, NodeRef reference,
                         const Mapping* mapping) const = 0;
  virtual void apply(RuleContext& ctx, NodeRef reference, const Mapping* mapping) const = 0;
};

/// Services the engine lends to a rule while it runs. Every mutation goes
/// through the workspace and is journaled by the engine.
class RuleContext {
 public:
  virtual ~RuleContext() = default;
  virtual Workspace& workspace() = 0;
  /// Recursive produce of source under target (lookup + apply).
  virtual NodeId migrate(NodeRef source, NodeRef target) = 0;
  /// One-level copy of source under target; references get empty referees
  /// and an origin note.
  virtual NodeId copy_node(NodeRef source, NodeRef target) = 0;
  virtual MappingId register_mapping(NodeRef source, NodeRef target, ContextId scope,
                                     MappingOrigin origin) = 0;
  /// Ask the human; throws ChooserRequired without a chooser.
  virtual std::size_t choose(const ChoicePrompt& prompt) = 0;
  virtual void log(std::string line) = 0;
};

}  // namespace asgmig

namespace asgmig {

/// Thrown by a chooser that cannot answer now (e.g. the HTTP client has not
/// replied yet). The engine rolls the directive back and rethrows it as is.
class ChoicePending : public std::exception {
 public:
  explicit ChoicePending(ChoicePrompt prompt) : prompt_(std::move(prompt)) {}
  const ChoicePrompt& prompt() const noexcept { return prompt_; }
  const char* what() const noexcept override { return "choice pending"; }

 private:
  ChoicePrompt prompt_;
};

}  // namespace asgmig
