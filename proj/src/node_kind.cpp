#include "asgmig/node_kind.hpp"

#include <array>

namespace asgmig {

namespace {

struct KindInfo {
  NodeKind kind;
  std::string_view name;
  NodeCategory category;
};

constexpr std::array kKinds = {
    KindInfo{NodeKind::Project, "Project", NodeCategory::Declaration},
    KindInfo{NodeKind::Package, "Package", NodeCategory::Declaration},
    KindInfo{NodeKind::Module, "Module", NodeCategory::Declaration},
    KindInfo{NodeKind::Class, "Class", NodeCategory::Declaration},
    KindInfo{NodeKind::Method, "Method", NodeCategory::Declaration},
    KindInfo{NodeKind::SubProcedure, "SubProcedure", NodeCategory::Declaration},
    KindInfo{NodeKind::Function, "Function", NodeCategory::Declaration},
    KindInfo{NodeKind::VariableDeclaration, "VariableDeclaration", NodeCategory::Declaration},
    KindInfo{NodeKind::AttributeDeclaration, "AttributeDeclaration", NodeCategory::Declaration},
    KindInfo{NodeKind::Parameter, "Parameter", NodeCategory::Declaration},
    KindInfo{NodeKind::PrimitiveTypeDeclaration, "PrimitiveTypeDeclaration", NodeCategory::Declaration},
    KindInfo{NodeKind::LibraryRoutineDeclaration, "LibraryRoutineDeclaration", NodeCategory::Declaration},
    KindInfo{NodeKind::StubDeclaration, "StubDeclaration", NodeCategory::Declaration},
    KindInfo{NodeKind::MethodInvocation, "MethodInvocation", NodeCategory::Reference},
    KindInfo{NodeKind::FunctionInvocation, "FunctionInvocation", NodeCategory::Reference},
    KindInfo{NodeKind::VariableAccess, "VariableAccess", NodeCategory::Reference},
    KindInfo{NodeKind::TypeReference, "TypeReference", NodeCategory::Reference},
    KindInfo{NodeKind::ExpressionStatement, "ExpressionStatement", NodeCategory::Grammatical},
    KindInfo{NodeKind::BinaryOperation, "BinaryOperation", NodeCategory::Grammatical},
    KindInfo{NodeKind::StringLiteral, "StringLiteral", NodeCategory::Grammatical},
    KindInfo{NodeKind::NumberLiteral, "NumberLiteral", NodeCategory::Grammatical},
    KindInfo{NodeKind::IfStatement, "IfStatement", NodeCategory::Grammatical},
    KindInfo{NodeKind::ElseIfClause, "ElseIfClause", NodeCategory::Grammatical},
    KindInfo{NodeKind::Block, "Block", NodeCategory::Grammatical},
    KindInfo{NodeKind::Assignment, "Assignment", NodeCategory::Grammatical},
    KindInfo{NodeKind::Return, "Return", NodeCategory::Grammatical},
    KindInfo{NodeKind::SelfReference, "SelfReference", NodeCategory::Grammatical},
};

constexpr std::array<NodeKind, kKinds.size()> make_kind_list() {
  std::array<NodeKind, kKinds.size()> out{};
  for (std::size_t i = 0; i < kKinds.size(); ++i) out[i] = kKinds[i].kind;
  return out;
}

constexpr auto kKindList = make_kind_list();

const KindInfo& info(NodeKind kind) noexcept {
  return kKinds[static_cast<std::size_t>(kind)];
}

}  // namespace

static_assert([] {
  for (std::size_t i = 0; i < kKinds.size(); ++i)
    if (static_cast<std::size_t>(kKinds[i].kind) != i) return false;
  return true;
}());

NodeCategory category(NodeKind kind) noexcept { return info(kind).category; }

std::string_view to_string(NodeKind kind) noexcept { return info(kind).name; }

std::optional<NodeKind> kind_from_string(std::string_view name) noexcept {
  for (const auto& k : kKinds)
    if (k.name == name) return k.kind;
  return std::nullopt;
}

std::span<const NodeKind> all_node_kinds() noexcept { return kKindList; }

}  // namespace asgmig
