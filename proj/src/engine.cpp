#include "asgmig/engine.hpp"

#include <algorithm>
#include <fstream>

#include "asgmig/errors.hpp"
#include "asgmig/graph_ops.hpp"
#include "asgmig/print.hpp"

namespace asgmig {

namespace {

std::string label(const Workspace& ws, NodeRef ref) {
  const AsgNode& n = ws.node(ref);
  std::string out(to_string(n.kind));
  if (is_declaration(n.kind)) return out + " " + qualified_path(ws, ref);
  if (!n.name.empty()) out += " " + n.name;
  if (!n.payload.text.empty()) out += " '" + n.payload.text + "'";
  return out + " #" + std::to_string(ref.node.value);
}

bool passes_through(const MigrationError& e) {
  return e.code() == ErrorCode::ChooserRequired || e.code() == ErrorCode::ChoiceAbandoned ||
         e.code() == ErrorCode::RuleApplicationFailed;
}

/// Run a rule body, naming the rule in any failure it raises.
template <typename Fn>
auto guarded(const Rule& rule, const std::string& subject, Fn&& fn) {
  try {
    return fn();
  } catch (const ChoicePending&) {
    throw;
  } catch (const MigrationError& e) {
    if (passes_through(e)) throw;
    throw MigrationError(ErrorCode::RuleApplicationFailed,
                         "rule " + rule.name() + " failed on " + subject + ": " +
                             std::string(to_string(e.code())) + ": " + e.what());
  } catch (const std::exception& e) {
    throw MigrationError(ErrorCode::RuleApplicationFailed,
                         "rule " + rule.name() + " failed on " + subject + ": " + e.what());
  }
}

const AsgNode* stub_referee(const Workspace& ws, NodeRef reference) {
  const AsgNode* ref = ws.find(reference);
  if (!ref || !is_reference(ref->kind) || !ref->referee) return nullptr;
  const AsgNode* decl = ws.model(reference.model).find(*ref->referee);
  if (!decl || decl->kind != NodeKind::StubDeclaration) return nullptr;
  return decl;
}

}  // namespace

// ------------------------------------------------------------------- run

/// One directive in flight: the RuleContext handed to rules.
class Engine::Run final : public RuleContext {
 public:
  Run(Engine& engine, LookupMode mode, bool choose_adaptive, DirectiveResult& result)
      : engine_(engine),
        ws_(engine.ws_),
        mode_(mode),
        choose_adaptive_(choose_adaptive),
        result_(result),
        counter_(*this) {}

  Workspace& workspace() override { return ws_; }

  NodeId migrate(NodeRef source, NodeRef target) override {
    LookupMode effective = LookupMode::Automatic;
    if (mode_ == LookupMode::Debug || (mode_ == LookupMode::MultipleChoice && root_pending_))
      effective = mode_;
    root_pending_ = false;
    const Installation& chosen =
        engine_.rules_.lookup_productive(ws_, source, target, effective, &counter_);
    const auto& rule = static_cast<const ProductiveRule&>(*chosen.rule);
    const std::string subject = label(ws_, source);
    log("  " + rule.name() + " @ " + describe(ws_, chosen.context) + ": " + subject);
    NodeId created = guarded(rule, subject, [&] { return rule.apply(*this, source, target); });
    if (is_declaration(ws_.node(source).kind)) {
      ContextId scope = nearest_context(ws_, target);
      register_mapping(source, {target.model, created}, scope, MappingOrigin::ProduceAuto);
    }
    return created;
  }

  NodeId copy_node(NodeRef source, NodeRef target) override {
    const AsgNode& src = ws_.node(source);
    Payload payload = src.payload;
    const bool reference = is_reference(src.kind);
    if (reference) payload.origin = source;
    NodeId id = ws_.model(target.model).add_node(target.node, src.kind, src.name, payload);
    if (reference) pending_refs_.push_back({target.model, id});
    return id;
  }

  MappingId register_mapping(NodeRef source, NodeRef target, ContextId scope,
                             MappingOrigin origin) override {
    std::size_t before = engine_.mappings_.all().size();
    MappingId id = engine_.mappings_.register_mapping(ws_, source, target, scope, origin);
    if (engine_.mappings_.all().size() != before) {
      result_.mappings.push_back(id);
      log("  mapping " + qualified_path(ws_, source) + " => " + qualified_path(ws_, target) +
          " @ " + describe(ws_, scope) + " (" + std::string(to_string(origin)) + ")");
    }
    return id;
  }

  std::size_t choose(const ChoicePrompt& prompt) override { return counter_.choose(prompt); }

  void log(std::string line) override { result_.log.push_back(std::move(line)); }

  // Step 7: bind or bridge every reference the productive phase created.
  void fix_references() {
    for (std::size_t i = 0; i < pending_refs_.size(); ++i) {
      NodeRef ref = pending_refs_[i];
      const AsgNode* node = ws_.find(ref);
      if (!node || node->referee || !node->payload.origin) continue;
      const AsgNode* original = ws_.find(*node->payload.origin);
      if (!original || !original->referee) {
        log("  step 7: " + label(ws_, ref) + " has no binding in its source");
        continue;
      }
      NodeRef foreign = resolve_through_stubs(ws_, {node->payload.origin->model,
                                                    *original->referee});
      Model& model = ws_.model(ref.model);
      if (foreign.model == ref.model) {
        model.set_referee(ref.node, foreign.node);
        continue;
      }
      auto shape = shape_of(ws_.node(foreign));
      if (!shape) continue;
      const bool existed = find_stub(model, foreign).has_value();
      NodeId stub = make_stub(ws_, ref.model, foreign, *shape);
      model.set_referee(ref.node, stub);
      const bool adapted = adapt(ref, true);
      if (existed) continue;
      if (adapted && incoming_references(model, stub).empty()) {
        // An existing mapping bound the reference; the bridge was never needed.
        model.remove_subtree(stub);
        log("  step 7: " + qualified_path(ws_, foreign) + " bound through a mapping");
        continue;
      }
      result_.stubs_created.push_back({ref.model, stub});
      log("  step 7: stub for " + qualified_path(ws_, foreign));
    }
  }

  /// Double lookup for one stub reference: mappings most concrete first, then
  /// adaptive rules innermost first. Returns true when a rule fired.
  bool adapt(NodeRef ref, bool allow_fallback) {
    if (!stub_referee(ws_, ref)) return false;
    std::vector<Mapping> mappings;
    for (const Mapping* m : engine_.mappings_.mappings_for(ws_, ref)) mappings.push_back(*m);

    if (choose_adaptive_) {
      std::vector<std::pair<const Installation*, const Mapping*>> options;
      for (const Mapping& m : mappings)
        for (const Installation* inst : engine_.rules_.adaptive_candidates(ws_, ref, &m))
          options.emplace_back(inst, &m);
      if (!options.empty()) {
        ChoicePrompt prompt;
        prompt.subject = label(ws_, ref);
        for (const auto& [inst, m] : options)
          prompt.options.push_back(inst->rule->name() + " via " +
                                   qualified_path(ws_, m->source) + " => " +
                                   qualified_path(ws_, m->target));
        std::size_t pick = counter_.choose(prompt);
        if (pick >= options.size())
          throw MigrationError(ErrorCode::ChoiceAbandoned, "choice out of range");
        fire(*options[pick].first, ref, options[pick].second);
        return true;
      }
    } else {
      for (const Mapping& m : mappings) {
        if (const Installation* inst = engine_.rules_.lookup_adaptive(ws_, ref, m)) {
          fire(*inst, ref, &m);
          return true;
        }
      }
    }
    if (!mappings.empty() || !allow_fallback) return false;
    auto fallbacks = engine_.rules_.fallback_candidates(ws_, ref);
    if (fallbacks.empty()) return false;
    fire(*fallbacks.front(), ref, nullptr);
    return adapt(ref, false);
  }

  /// Adaptive phase of one mapping over its scope.
  void adaptive_phase(const Mapping& mapping) {
    const Model& model = ws_.model(mapping.scope.model);
    std::vector<NodeRef> waiting;
    for (NodeId id : preorder(model, mapping.scope.node)) {
      NodeRef ref{mapping.scope.model, id};
      const AsgNode* stub = stub_referee(ws_, ref);
      if (stub && stands_for(ws_, *stub->payload.foreign, mapping.source))
        waiting.push_back(ref);
    }
    for (NodeRef ref : waiting)
      if (!adapt(ref, false)) result_.unresolved.push_back(ref);
  }

  void sweep(ModelId model_id) {
    Model& model = ws_.model(model_id);
    for (NodeId stub : stubs(model)) {
      if (!incoming_references(model, stub).empty()) continue;
      result_.stubs_removed.push_back({model_id, stub});
      log("  sweep: stub " + model.node(stub).name);
      model.remove_subtree(stub);
    }
  }

  const std::vector<NodeRef>& pending_refs() const noexcept { return pending_refs_; }

 private:
  void fire(const Installation& inst, NodeRef ref, const Mapping* mapping) {
    const auto& rule = static_cast<const AdaptiveRule&>(*inst.rule);
    const std::string subject = label(ws_, ref);
    guarded(rule, subject, [&] {
      rule.apply(*this, ref, mapping);
      return 0;
    });
    result_.adapted.push_back(ref);
    log("  " + rule.name() + " @ " + describe(ws_, inst.context) + " adapts " + subject);
  }

  /// Forwards prompts to the engine's chooser and counts them.
  class Counter final : public Chooser {
   public:
    explicit Counter(Run& run) : run_(run) {}
    std::size_t choose(const ChoicePrompt& prompt) override {
      Chooser* chooser = run_.engine_.chooser_;
      if (!chooser)
        throw MigrationError(ErrorCode::ChooserRequired,
                             "a choice is needed for " + prompt.subject);
      ++run_.result_.prompts;
      return chooser->choose(prompt);
    }

   private:
    Run& run_;
  };

  Engine& engine_;
  Workspace& ws_;
  LookupMode mode_;
  bool choose_adaptive_;
  bool root_pending_ = true;
  DirectiveResult& result_;
  Counter counter_;
  std::vector<NodeRef> pending_refs_;
};

// ---------------------------------------------------------------- engine

Engine::Engine(Workspace& ws) : ws_(ws) {}

Engine::~Engine() {
  ws_.attach_journal(nullptr);
  mappings_.attach_journal(nullptr);
}

template <typename Body>
DirectiveResult Engine::transact(std::string description, Body&& body) {
  auto journal = std::make_unique<Journal>();
  DirectiveResult result;
  ws_.attach_journal(journal.get());
  mappings_.attach_journal(journal.get());
  auto detach = [&] {
    ws_.attach_journal(nullptr);
    mappings_.attach_journal(nullptr);
  };
  try {
    body(result);
  } catch (...) {
    detach();
    journal->undo();
    try {
      throw;
    } catch (const ChoicePending&) {
      log_.push_back("pending " + description);
    } catch (const std::exception& e) {
      log_.push_back("FAILED " + description + ": " + e.what());
    }
    throw;
  }
  detach();
  for (NodeRef ref : journal->created())
    if (ws_.find(ref)) result.created.push_back(ref);
  result.transaction = next_txn_++;
  history_.push_back({result.transaction, description});
  journals_.push_back(std::move(journal));
  log_.push_back("#" + std::to_string(result.transaction) + " " + description);
  for (const auto& line : result.log) log_.push_back(line);
  return result;
}

DirectiveResult Engine::produce(NodeRef source, NodeRef target, LookupMode mode) {
  if (!ws_.has_model(source.model) || !ws_.find(source))
    throw MigrationError(ErrorCode::UnknownNode, "produce source does not exist");
  if (!ws_.has_model(target.model) || !ws_.find(target))
    throw MigrationError(ErrorCode::UnknownNode, "produce target does not exist");
  if (source.model == target.model)
    throw MigrationError(ErrorCode::PreconditionFailed,
                         "produce target must be in another model than the source");
  if (!is_declaration(ws_.node(target).kind))
    throw MigrationError(ErrorCode::PreconditionFailed,
                         "produce target must be a declaration");
  const std::string description = "produce " + qualified_path(ws_, source) + " -> " +
                                  qualified_path(ws_, target) + " [" +
                                  std::string(to_string(mode)) + "]";
  return transact(description, [&](DirectiveResult& result) {
    Run run(*this, mode, mode == LookupMode::Debug, result);
    run.log("steps 1-6: productive phase");
    NodeId root = run.migrate(source, target);
    result.produced = NodeRef{target.model, root};
    run.log("step 7: reference fixing");
    run.fix_references();
    run.log("step 8: adaptive phase");
    const std::vector<MappingId> registered = result.mappings;
    for (MappingId id : registered)
      if (const Mapping* m = mappings_.find(id)) run.adaptive_phase(Mapping(*m));
    run.sweep(target.model);
    for (NodeRef ref : run.pending_refs()) {
      const AsgNode* n = ws_.find(ref);
      if (n && (!n->referee || stub_referee(ws_, ref)) &&
          std::find(result.unresolved.begin(), result.unresolved.end(), ref) ==
              result.unresolved.end())
        result.unresolved.push_back(ref);
    }
  });
}

DirectiveResult Engine::map(NodeRef source, NodeRef target, std::optional<ContextId> scope,
                            LookupMode mode) {
  if (!ws_.has_model(source.model) || !ws_.find(source))
    throw MigrationError(ErrorCode::UnknownNode, "map source does not exist");
  if (!ws_.has_model(target.model) || !ws_.find(target))
    throw MigrationError(ErrorCode::UnknownNode, "map target does not exist");
  ContextId where = scope.value_or(ContextId{target.model, ws_.model(target.model).root()});
  const std::string description = "map " + qualified_path(ws_, source) + " => " +
                                  qualified_path(ws_, target) + " @ " +
                                  describe(ws_, where);
  return transact(description, [&](DirectiveResult& result) {
    Run run(*this, mode, mode != LookupMode::Automatic, result);
    run.log("step 1: register mapping");
    MappingId id = run.register_mapping(source, target, where, MappingOrigin::UserDirective);
    run.log("steps 2-3: adaptive phase");
    run.adaptive_phase(Mapping(*mappings_.find(id)));
    run.log("step 4: sweep");
    run.sweep(where.model);
  });
}

void Engine::rollback(std::uint64_t transaction) {
  if (history_.empty() || history_.back().id != transaction)
    throw MigrationError(ErrorCode::NotTopOfStack,
                         "transaction " + std::to_string(transaction) +
                             " is not the most recent one");
  journals_.back()->undo();
  journals_.pop_back();
  log_.push_back("rollback #" + std::to_string(transaction) + " " +
                 history_.back().description);
  history_.pop_back();
}

std::uint64_t Engine::rollback_last() {
  if (history_.empty())
    throw MigrationError(ErrorCode::NotTopOfStack, "nothing to roll back");
  std::uint64_t id = history_.back().id;
  rollback(id);
  return id;
}

std::filesystem::path Engine::export_model(ModelId model_id,
                                           const std::filesystem::path& dir) {
  const Model& model = ws_.model(model_id);
  std::string text = print_model(ws_, model_id);
  std::filesystem::create_directories(dir);
  std::filesystem::path path = dir / export_file_name(model);
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw MigrationError(ErrorCode::PreconditionFailed,
                         "cannot write " + path.string());
  out << text;
  log_.push_back("export " + model.alias() + " -> " + path.string());
  return path;
}

std::vector<UnresolvedRow> Engine::unresolved_report(const ContextId& context) const {
  std::vector<NodeRef> roots;
  if (context.is_global()) {
    for (ModelId id : ws_.model_ids()) roots.push_back({id, ws_.model(id).root()});
  } else {
    if (!context_exists(ws_, context))
      throw MigrationError(ErrorCode::UnknownContext, "context does not exist");
    roots.push_back(context.ref());
  }
  std::vector<UnresolvedRow> rows;
  for (NodeRef root : roots) {
    const Model& model = ws_.model(root.model);
    for (NodeId id : preorder(model, root.node)) {
      const AsgNode& n = model.node(id);
      if (!is_reference(n.kind)) continue;
      if (!n.referee) {
        rows.push_back({{root.model, id}, std::nullopt, n.name});
        continue;
      }
      const AsgNode& decl = model.node(*n.referee);
      if (decl.kind == NodeKind::StubDeclaration && decl.payload.foreign)
        rows.push_back({{root.model, id},
                        NodeRef{root.model, decl.id},
                        qualified_path(ws_, *decl.payload.foreign)});
    }
  }
  return rows;
}

}  // namespace asgmig
