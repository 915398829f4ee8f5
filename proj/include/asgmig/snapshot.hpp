#pragma once

#include <string>

#include "asgmig/model.hpp"

namespace asgmig {

struct SnapshotOptions {
  /// Include node ids, provenance notes and stub ids. Off for structural
  /// comparison across independently built models.
  bool with_ids = false;
  bool with_library = true;
};

/// Deterministic tree-ordered text form of one model: one node per line with
/// depth, kind, name, payload and referee path.
std::string snapshot(const Workspace& ws, ModelId model,
                     const SnapshotOptions& options = {});

/// Snapshot of a single subtree (depth relative to node).
std::string snapshot_subtree(const Workspace& ws, NodeRef node,
                             const SnapshotOptions& options = {});

}  // namespace asgmig
