#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "asgmig/model.hpp"

namespace asgmig {

/// One library declaration preloaded into every model of a dialect.
struct CatalogEntry {
  StubShape shape = StubShape::Type;
  std::string name;
  std::string owner;  // library class holding the member, empty at top level
  std::optional<std::string> type;
  bool is_static = false;
  bool is_class = false;
};

/// Typing ontology of one dialect: which kinds and operators may appear in an
/// exportable model, plus the library catalog.
struct DialectSpec {
  Dialect dialect;
  std::string file_extension;
  std::set<NodeKind> legal_kinds;
  std::set<std::string, std::less<>> legal_operators;
  std::vector<CatalogEntry> library_catalog;
};

const DialectSpec& dialect_spec(Dialect dialect);

/// Parse catalog text. Throws ParseError on malformed lines.
std::vector<CatalogEntry> parse_catalog(std::string_view text);

/// Create the catalog's declarations in the model's library region.
void install_library(Model& model, const DialectSpec& spec);

enum class ViolationReason {
  IllegalKindForDialect,
  IllegalOperator,
  UnresolvedReference,
  ReferenceToStub,
};

std::string_view to_string(ViolationReason reason) noexcept;

struct Violation {
  NodeId node;
  ViolationReason reason;
  std::string detail;

  bool operator==(const Violation&) const = default;
};

/// Every reason the model would not print as legal code in its dialect.
/// The library region is not inspected. Empty result means exportable.
std::vector<Violation> validate(const Workspace& ws, ModelId model);

}  // namespace asgmig
