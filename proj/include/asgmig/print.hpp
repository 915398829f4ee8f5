#pragma once

#include <string>

#include "asgmig/model.hpp"

namespace asgmig {

/// Source text of a model in its dialect. Throws NotExportable listing every
/// violation when validate() is not empty.
std::string print_model(const Workspace& ws, ModelId model);

/// Same layout without validation. Illegal constructs print in a best-effort
/// form that may not parse back.
std::string print_unchecked(const Workspace& ws, ModelId model);

/// Source of a single node (declaration, statement or expression).
std::string print_node(const Workspace& ws, NodeRef node);

/// "<alias><extension>".
std::string export_file_name(const Model& model);

}  // namespace asgmig
