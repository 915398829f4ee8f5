#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "asgmig/model.hpp"

namespace asgmig {

/// A name use that resolved to nothing. Not fatal: the reference stays in the
/// model with an empty referee.
struct UnboundName {
  NodeId node;
  std::string name;
  int line = 0;
  int column = 0;
};

struct ParseOutcome {
  ModelId model;
  std::vector<UnboundName> unbound;
};

/// Parse MiniProc text into a new model. Text may hold several modules, each
/// introduced by `Attribute VB_Name = "X"`; text without one becomes a single
/// module named default_module. Throws ParseError before touching ws.
ParseOutcome parse_source(Workspace& ws, std::string alias, std::string_view text,
                          std::string default_module = "Main");

/// Parse MiniOO or MiniScript text (skeletons or full bodies) into a new model.
ParseOutcome parse_target(Workspace& ws, std::string alias, Dialect dialect,
                          std::string_view text);

inline ParseOutcome parse_target_skeleton(Workspace& ws, std::string alias,
                                          Dialect dialect, std::string_view text) {
  return parse_target(ws, std::move(alias), dialect, text);
}

/// Dispatch on dialect.
ParseOutcome parse_model(Workspace& ws, std::string alias, Dialect dialect,
                         std::string_view text, std::string default_module = "Main");

}  // namespace asgmig
