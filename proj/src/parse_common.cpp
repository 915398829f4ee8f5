#include "asgmig/errors.hpp"
#include "asgmig/parse.hpp"
#include "syntax.hpp"

namespace asgmig {

namespace detail {

NodeId materialize(Model& model, NodeId parent, const Syn& syn,
                   std::vector<PendingBind>& pending) {
  NodeId id = model.add_node(parent, syn.kind, syn.name, syn.payload);
  for (const Syn& child : syn.children) materialize(model, id, child, pending);
  if (is_reference(syn.kind)) pending.push_back({id, syn.qualifier, syn.line, syn.column});
  return id;
}

}  // namespace detail

ParseOutcome parse_model(Workspace& ws, std::string alias, Dialect dialect,
                         std::string_view text, std::string default_module) {
  if (dialect == Dialect::MiniProc)
    return parse_source(ws, std::move(alias), text, std::move(default_module));
  return parse_target(ws, std::move(alias), dialect, text);
}

}  // namespace asgmig
