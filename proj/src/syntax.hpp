#pragma once

#include <string>
#include <vector>

#include "asgmig/model.hpp"
#include "asgmig/parse.hpp"

namespace asgmig::detail {

/// Parser output before it becomes model nodes.
struct Syn {
  NodeKind kind = NodeKind::Block;
  std::string name;
  Payload payload;
  std::vector<Syn> children;
  std::string qualifier;  // member access: class name, "this" or "super"
  int line = 0;
  int column = 0;
};

struct PendingBind {
  NodeId node;
  std::string qualifier;
  int line = 0;
  int column = 0;
};

/// Create nodes for syn under parent. References are queued children first so
/// receivers bind before the invocations that depend on them.
NodeId materialize(Model& model, NodeId parent, const Syn& syn,
                   std::vector<PendingBind>& pending);

}  // namespace asgmig::detail
