#include "asgmig/registry.hpp"

#include <algorithm>

#include "asgmig/errors.hpp"
#include "asgmig/graph_ops.hpp"
#include "asgmig/journal.hpp"

namespace asgmig {

std::string_view to_string(RuleFamily family) noexcept {
  return family == RuleFamily::Productive ? "Productive" : "Adaptive";
}

std::string_view to_string(LookupMode mode) noexcept {
  switch (mode) {
    case LookupMode::Automatic: return "auto";
    case LookupMode::MultipleChoice: return "choice";
    case LookupMode::Debug: return "debug";
  }
  return "auto";
}

std::string_view to_string(MappingOrigin origin) noexcept {
  return origin == MappingOrigin::UserDirective ? "UserDirective" : "ProduceAuto";
}

std::optional<LookupMode> lookup_mode_from_string(std::string_view text) noexcept {
  if (text == "auto" || text == "automatic") return LookupMode::Automatic;
  if (text == "choice" || text == "multiple") return LookupMode::MultipleChoice;
  if (text == "debug") return LookupMode::Debug;
  return std::nullopt;
}

std::string Rule::param(std::string_view key, std::string fallback) const {
  auto it = params_.find(key);
  return it == params_.end() ? fallback : it->second;
}

// ------------------------------------------------------------------ rules

InstallationId RuleRegistry::install(const Workspace& ws, std::shared_ptr<const Rule> rule,
                                     ContextId context) {
  if (!rule) throw MigrationError(ErrorCode::UnknownRule, "no rule given");
  if (!context_exists(ws, context))
    throw MigrationError(ErrorCode::UnknownContext,
                         "context " + to_string(context.ref()) + " does not exist");
  InstallationId id{next_id_++};
  items_.push_back({id, std::move(rule), context, next_seq_++});
  return id;
}

void RuleRegistry::uninstall(InstallationId id) {
  auto it = std::find_if(items_.begin(), items_.end(),
                         [&](const Installation& i) { return i.id == id; });
  if (it == items_.end())
    throw MigrationError(ErrorCode::UnknownRule,
                         "installation " + std::to_string(id.value) + " does not exist");
  items_.erase(it);
}

std::vector<const Installation*> RuleRegistry::installed_at(const ContextId& context) const {
  std::vector<const Installation*> out;
  for (const auto& item : items_)
    if (item.context == context) out.push_back(&item);
  std::sort(out.begin(), out.end(),
            [](const Installation* a, const Installation* b) { return a->seq > b->seq; });
  return out;
}

std::vector<const Installation*> RuleRegistry::walk(const Workspace& ws, NodeRef at,
                                                    RuleFamily family) const {
  std::vector<const Installation*> out;
  for (const ContextId& ctx : context_chain(ws, at))
    for (const Installation* item : installed_at(ctx))
      if (item->rule->family() == family) out.push_back(item);
  return out;
}

std::vector<const Installation*> RuleRegistry::productive_candidates(const Workspace& ws,
                                                                     NodeRef source,
                                                                     NodeRef target) const {
  std::vector<const Installation*> out;
  for (const Installation* item : walk(ws, target, RuleFamily::Productive)) {
    const auto& rule = static_cast<const ProductiveRule&>(*item->rule);
    if (rule.condition(ws, source, target)) out.push_back(item);
  }
  return out;
}

const Installation& RuleRegistry::lookup_productive(const Workspace& ws, NodeRef source,
                                                    NodeRef target, LookupMode mode,
                                                    Chooser* chooser) const {
  if (mode == LookupMode::Automatic) {
    for (const Installation* item : walk(ws, target, RuleFamily::Productive)) {
      const auto& rule = static_cast<const ProductiveRule&>(*item->rule);
      if (rule.condition(ws, source, target)) return *item;
    }
    throw MigrationError(ErrorCode::NoRuleFound,
                         "no productive rule accepts " + qualified_path(ws, source));
  }
  auto candidates = productive_candidates(ws, source, target);
  if (candidates.empty())
    throw MigrationError(ErrorCode::NoRuleFound,
                         "no productive rule accepts " + qualified_path(ws, source));
  if (!chooser)
    throw MigrationError(ErrorCode::ChooserRequired,
                         std::string(to_string(mode)) + " mode needs a chooser");
  ChoicePrompt prompt;
  prompt.kind = ChoicePrompt::Kind::Rule;
  prompt.subject = std::string(to_string(ws.node(source).kind)) + " " +
                   qualified_path(ws, source);
  for (const Installation* c : candidates)
    prompt.options.push_back(c->rule->name() + " @ " + describe(ws, c->context));
  std::size_t pick = chooser->choose(prompt);
  if (pick >= candidates.size())
    throw MigrationError(ErrorCode::ChoiceAbandoned, "choice out of range");
  return *candidates[pick];
}

std::vector<const Installation*> RuleRegistry::adaptive_candidates(
    const Workspace& ws, NodeRef reference, const Mapping* mapping) const {
  std::vector<const Installation*> out;
  for (const Installation* item : walk(ws, reference, RuleFamily::Adaptive)) {
    const auto& rule = static_cast<const AdaptiveRule&>(*item->rule);
    if (rule.fallback() != (mapping == nullptr)) continue;
    if (rule.condition(ws, reference, mapping)) out.push_back(item);
  }
  return out;
}

const Installation* RuleRegistry::lookup_adaptive(const Workspace& ws, NodeRef reference,
                                                  const Mapping& mapping) const {
  for (const Installation* item : walk(ws, reference, RuleFamily::Adaptive)) {
    const auto& rule = static_cast<const AdaptiveRule&>(*item->rule);
    if (!rule.fallback() && rule.condition(ws, reference, &mapping)) return item;
  }
  return nullptr;
}

std::vector<const Installation*> RuleRegistry::fallback_candidates(const Workspace& ws,
                                                                   NodeRef reference) const {
  return adaptive_candidates(ws, reference, nullptr);
}

// --------------------------------------------------------------- mappings

bool stands_for(const Workspace& ws, NodeRef stub_foreign, NodeRef source) {
  if (stub_foreign == source) return true;
  return resolve_through_stubs(ws, stub_foreign) == resolve_through_stubs(ws, source);
}

MappingId MappingRegistry::register_mapping(const Workspace& ws, NodeRef source,
                                            NodeRef target, ContextId scope,
                                            MappingOrigin origin) {
  const AsgNode& src = ws.node(source);
  const AsgNode& tgt = ws.node(target);
  if (!is_declaration(src.kind) || !is_declaration(tgt.kind))
    throw MigrationError(ErrorCode::InvalidMapping,
                         "mappings relate declarations, got " +
                             std::string(to_string(src.kind)) + " => " +
                             std::string(to_string(tgt.kind)));
  if (source.model == target.model)
    throw MigrationError(ErrorCode::InvalidMapping,
                         "source and target of a mapping must be in different models");
  if (scope.is_global() || scope.model != target.model)
    throw MigrationError(ErrorCode::ScopeModelMismatch,
                         "mapping scope must lie in the target model");
  if (!context_exists(ws, scope))
    throw MigrationError(ErrorCode::UnknownContext, "mapping scope does not exist");
  for (const Mapping& m : items_)
    if (m.source == source && m.target == target && m.scope == scope) return m.id;

  MappingId id{static_cast<std::uint32_t>(next_seq_)};
  if (journal_) {
    journal_->record([this, seq = next_seq_] {
      items_.pop_back();
      next_seq_ = seq;
    });
  }
  items_.push_back({id, source, target, scope, origin, next_seq_++});
  return id;
}

const Mapping* MappingRegistry::find(MappingId id) const noexcept {
  for (const Mapping& m : items_)
    if (m.id == id) return &m;
  return nullptr;
}

std::vector<const Mapping*> MappingRegistry::scoped_at(const ContextId& context) const {
  std::vector<const Mapping*> out;
  for (const Mapping& m : items_)
    if (m.scope == context) out.push_back(&m);
  return out;
}

std::vector<const Mapping*> MappingRegistry::mappings_for(const Workspace& ws,
                                                          NodeRef reference) const {
  const AsgNode& ref = ws.node(reference);
  if (!is_reference(ref.kind) || !ref.referee)
    throw MigrationError(ErrorCode::PreconditionFailed,
                         "mappings_for expects a reference bound to a stub");
  const AsgNode& stub = ws.model(reference.model).node(*ref.referee);
  if (stub.kind != NodeKind::StubDeclaration || !stub.payload.foreign)
    throw MigrationError(ErrorCode::PreconditionFailed,
                         "reference '" + ref.name + "' is not bound to a stub");

  const auto chain = context_chain(ws, reference);
  std::vector<std::pair<std::size_t, const Mapping*>> hits;
  for (const Mapping& m : items_) {
    if (!stands_for(ws, *stub.payload.foreign, m.source)) continue;
    auto at = std::find(chain.begin(), chain.end(), m.scope);
    if (at == chain.end()) continue;
    hits.emplace_back(static_cast<std::size_t>(at - chain.begin()), &m);
  }
  std::sort(hits.begin(), hits.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return a.second->seq > b.second->seq;
  });
  std::vector<const Mapping*> out;
  for (const auto& [depth, m] : hits) out.push_back(m);
  return out;
}

}  // namespace asgmig
