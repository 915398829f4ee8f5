#pragma once

#include <optional>
#include <span>
#include <string_view>

namespace asgmig {

enum class NodeKind {
  // declarations
  Project,
  Package,
  Module,
  Class,
  Method,
  SubProcedure,
  Function,
  VariableDeclaration,
  AttributeDeclaration,
  Parameter,
  PrimitiveTypeDeclaration,
  LibraryRoutineDeclaration,
  StubDeclaration,
  // references
  MethodInvocation,
  FunctionInvocation,
  VariableAccess,
  TypeReference,
  // grammatical
  ExpressionStatement,
  BinaryOperation,
  StringLiteral,
  NumberLiteral,
  IfStatement,
  ElseIfClause,
  Block,
  Assignment,
  Return,
  SelfReference,
};

enum class NodeCategory { Declaration, Reference, Grammatical };

NodeCategory category(NodeKind kind) noexcept;

inline bool is_declaration(NodeKind kind) noexcept {
  return category(kind) == NodeCategory::Declaration;
}
inline bool is_reference(NodeKind kind) noexcept {
  return category(kind) == NodeCategory::Reference;
}

std::string_view to_string(NodeKind kind) noexcept;
std::optional<NodeKind> kind_from_string(std::string_view name) noexcept;

/// All kinds, in declaration order.
std::span<const NodeKind> all_node_kinds() noexcept;

}  // namespace asgmig
