#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "asgmig/rule.hpp"

namespace asgmig {

struct RuleCatalogEntry {
  std::string name;
  RuleFamily family;
  std::vector<std::string> parameters;
  std::string summary;
};

/// Every built-in rule, one entry per canonical name.
const std::vector<RuleCatalogEntry>& rule_catalog();

/// Instantiate a built-in rule by name (aliases accepted). Throws UnknownRule
/// for unknown names and PreconditionFailed for missing parameters.
std::shared_ptr<const Rule> make_rule(std::string_view name, RuleParams params = {});

/// Name of the class Autowrap fills with library skeletons.
inline constexpr std::string_view kShimClass = "LibraryShims";

}  // namespace asgmig
