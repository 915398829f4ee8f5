#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>

namespace asgmig {

/// Model-scoped node identifier. Zero is never handed out.
struct NodeId {
  std::uint32_t value = 0;

  bool valid() const noexcept { return value != 0; }
  auto operator<=>(const NodeId&) const = default;
};

struct ModelId {
  std::uint32_t value = 0;

  bool valid() const noexcept { return value != 0; }
  auto operator<=>(const ModelId&) const = default;
};

/// Cross-model address of a node.
struct NodeRef {
  ModelId model;
  NodeId node;

  auto operator<=>(const NodeRef&) const = default;
};

inline std::string to_string(const NodeRef& ref) {
  return std::to_string(ref.model.value) + ":" + std::to_string(ref.node.value);
}

}  // namespace asgmig

template <>
struct std::hash<asgmig::NodeId> {
  std::size_t operator()(const asgmig::NodeId& id) const noexcept {
    return std::hash<std::uint32_t>{}(id.value);
  }
};

template <>
struct std::hash<asgmig::NodeRef> {
  std::size_t operator()(const asgmig::NodeRef& ref) const noexcept {
    return (static_cast<std::size_t>(ref.model.value) << 32) ^ ref.node.value;
  }
};
