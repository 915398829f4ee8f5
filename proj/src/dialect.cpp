#include "asgmig/dialect.hpp"

#include <map>
#include <sstream>

#include "asgmig/errors.hpp"
#include "asgmig/graph_ops.hpp"
#include "catalog_data.hpp"

namespace asgmig {

namespace {

using K = NodeKind;

const std::set<NodeKind> kExpressions = {
    K::MethodInvocation, K::FunctionInvocation, K::VariableAccess,
    K::BinaryOperation,  K::StringLiteral,      K::NumberLiteral};

const std::set<NodeKind> kStatements = {K::ExpressionStatement, K::Assignment,
                                        K::Return, K::IfStatement,
                                        K::VariableDeclaration};

std::set<NodeKind> common_kinds() {
  return {K::Project,           K::VariableDeclaration, K::Parameter,
          K::VariableAccess,    K::TypeReference,       K::ExpressionStatement,
          K::BinaryOperation,   K::StringLiteral,       K::NumberLiteral,
          K::IfStatement,       K::ElseIfClause,        K::Block,
          K::Assignment,        K::Return,              K::PrimitiveTypeDeclaration,
          K::StubDeclaration};
}

DialectSpec make_proc() {
  DialectSpec spec{Dialect::MiniProc, ".mproc", common_kinds(), {}, {}};
  spec.legal_kinds.insert({K::Module, K::SubProcedure, K::Function,
                           K::FunctionInvocation, K::LibraryRoutineDeclaration});
  spec.legal_operators = {"&", "+", "-", "*", "/", "=", "<>",
                          "<", ">", "<=", ">=", "And", "Or"};
  spec.library_catalog = parse_catalog(catalog_data::miniproc);
  return spec;
}

DialectSpec make_object(Dialect dialect, std::string ext, std::string_view catalog) {
  DialectSpec spec{dialect, std::move(ext), common_kinds(), {}, {}};
  spec.legal_kinds.insert({K::Package, K::Class, K::Method, K::AttributeDeclaration,
                           K::MethodInvocation, K::SelfReference});
  spec.legal_operators = {"+", "-", "*", "/", "==", "!=",
                          "<", ">", "<=", ">=", "&&", "||"};
  spec.library_catalog = parse_catalog(catalog);
  return spec;
}

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

const DialectSpec& dialect_spec(Dialect dialect) {
  static const DialectSpec proc = make_proc();
  static const DialectSpec oo =
      make_object(Dialect::MiniOO, ".moo", catalog_data::minioo);
  static const DialectSpec script =
      make_object(Dialect::MiniScript, ".mscript", catalog_data::miniscript);
  switch (dialect) {
    case Dialect::MiniProc: return proc;
    case Dialect::MiniOO: return oo;
    case Dialect::MiniScript: return script;
  }
  return proc;
}

std::vector<CatalogEntry> parse_catalog(std::string_view text) {
  std::vector<CatalogEntry> out;
  std::string current_class;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    bool member = !raw.empty() && (raw[0] == ' ' || raw[0] == '\t');
    std::string line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    std::istringstream words(line);
    std::vector<std::string> tokens;
    for (std::string w; words >> w;) tokens.push_back(w);

    CatalogEntry entry;
    std::size_t i = 0;
    if (tokens[i] == "static") {
      entry.is_static = true;
      ++i;
    }
    if (i + 1 >= tokens.size())
      throw ParseError("catalog entry needs a kind and a name", line_no, 1);
    const std::string& kind = tokens[i];
    entry.name = tokens[i + 1];
    i += 2;
    if (i < tokens.size()) {
      if (tokens[i] != ":" || i + 1 >= tokens.size())
        throw ParseError("expected ': Type'", line_no, 1);
      entry.type = tokens[i + 1];
    }
    if (kind == "type") {
      entry.shape = StubShape::Type;
    } else if (kind == "class") {
      entry.shape = StubShape::Type;
      entry.is_class = true;
    } else if (kind == "callable") {
      entry.shape = StubShape::Callable;
    } else if (kind == "variable") {
      entry.shape = StubShape::Variable;
    } else {
      throw ParseError("unknown catalog kind '" + kind + "'", line_no, 1);
    }
    if (member) {
      if (current_class.empty())
        throw ParseError("member outside a class", line_no, 1);
      entry.owner = current_class;
    } else {
      current_class = entry.is_class ? entry.name : std::string();
    }
    out.push_back(std::move(entry));
  }
  return out;
}

void install_library(Model& model, const DialectSpec& spec) {
  std::map<std::string, NodeId, std::less<>> types;
  std::map<std::string, NodeId, std::less<>> classes;
  std::vector<std::pair<NodeId, std::string>> typed;

  for (const auto& entry : spec.library_catalog) {
    Payload payload;
    payload.is_static = entry.is_static;
    NodeId id;
    if (entry.is_class) {
      id = model.add_library_node(NodeKind::Class, entry.name, payload);
      classes[entry.name] = id;
      types[entry.name] = id;
      continue;
    }
    if (!entry.owner.empty()) {
      NodeId owner = classes.at(entry.owner);
      NodeKind kind = entry.shape == StubShape::Callable ? NodeKind::Method
                                                         : NodeKind::AttributeDeclaration;
      id = model.add_node(owner, kind, entry.name, payload);
    } else {
      switch (entry.shape) {
        case StubShape::Type:
          id = model.add_library_node(NodeKind::PrimitiveTypeDeclaration, entry.name,
                                      payload);
          types[entry.name] = id;
          break;
        case StubShape::Callable:
          id = model.add_library_node(NodeKind::LibraryRoutineDeclaration, entry.name,
                                      payload);
          break;
        case StubShape::Variable:
          id = model.add_library_node(NodeKind::VariableDeclaration, entry.name,
                                      payload);
          break;
      }
    }
    if (entry.type) typed.emplace_back(id, *entry.type);
  }
  for (const auto& [id, type_name] : typed) {
    NodeId ref = model.insert_node(id, 0, NodeKind::TypeReference, type_name);
    if (auto it = types.find(type_name); it != types.end())
      model.set_referee(ref, it->second);
  }
}

std::string_view to_string(ViolationReason reason) noexcept {
  switch (reason) {
    case ViolationReason::IllegalKindForDialect: return "IllegalKindForDialect";
    case ViolationReason::IllegalOperator: return "IllegalOperator";
    case ViolationReason::UnresolvedReference: return "UnresolvedReference";
    case ViolationReason::ReferenceToStub: return "ReferenceToStub";
  }
  return "?";
}

namespace {

/// Child kinds a container may hold in the given dialect; nullopt means the
/// kind has a fixed slot layout checked separately.
std::optional<std::set<NodeKind>> allowed_children(Dialect dialect, NodeKind parent) {
  const bool proc = dialect == Dialect::MiniProc;
  std::set<NodeKind> stmts = kStatements;
  switch (parent) {
    case K::Project:
      return proc ? std::set<NodeKind>{K::Module}
                  : std::set<NodeKind>{K::Package, K::Class};
    case K::Package:
      return std::set<NodeKind>{K::Class};
    case K::Module:
      return std::set<NodeKind>{K::VariableDeclaration, K::SubProcedure, K::Function};
    case K::Class:
      return std::set<NodeKind>{K::TypeReference, K::AttributeDeclaration, K::Method};
    case K::Method:
    case K::SubProcedure:
    case K::Function:
      stmts.insert({K::TypeReference, K::Parameter});
      return stmts;
    case K::Block:
      return stmts;
    case K::VariableDeclaration:
    case K::AttributeDeclaration:
    case K::Parameter:
      return std::set<NodeKind>{K::TypeReference};
    case K::FunctionInvocation:
      return kExpressions;
    case K::VariableAccess:
    case K::TypeReference:
    case K::StringLiteral:
    case K::NumberLiteral:
    case K::SelfReference:
      return std::set<NodeKind>{};
    default:
      return std::nullopt;
  }
}

bool is_expression(NodeKind kind) { return kExpressions.contains(kind); }

std::string slot_problem(const Model& model, const AsgNode& n) {
  auto kind_at = [&](std::size_t i) { return model.node(n.children[i]).kind; };
  const std::size_t count = n.children.size();
  switch (n.kind) {
    case K::ExpressionStatement:
      if (count != 1 || !is_expression(kind_at(0))) return "expects one expression";
      return {};
    case K::Assignment:
      if (count != 2 || kind_at(0) != K::VariableAccess || !is_expression(kind_at(1)))
        return "expects a variable and an expression";
      return {};
    case K::Return:
      if (count > 1 || (count == 1 && !is_expression(kind_at(0))))
        return "expects at most one expression";
      return {};
    case K::BinaryOperation:
      if (count != 2 || !is_expression(kind_at(0)) || !is_expression(kind_at(1)))
        return "expects two operands";
      return {};
    case K::ElseIfClause:
      if (count != 2 || !is_expression(kind_at(0)) || kind_at(1) != K::Block)
        return "expects a condition and a block";
      return {};
    case K::IfStatement: {
      if (count < 2 || !is_expression(kind_at(0)) || kind_at(1) != K::Block)
        return "expects a condition and a block";
      std::size_t i = 2;
      while (i < count && kind_at(i) == K::ElseIfClause) ++i;
      if (i < count && kind_at(i) == K::Block) ++i;
      if (i != count) return "unexpected branch layout";
      return {};
    }
    case K::MethodInvocation: {
      if (count == 0) return "missing receiver";
      NodeKind receiver = kind_at(0);
      if (!is_expression(receiver) && receiver != K::TypeReference &&
          receiver != K::SelfReference)
        return "bad receiver";
      for (std::size_t i = 1; i < count; ++i)
        if (!is_expression(kind_at(i))) return "bad argument";
      return {};
    }
    default:
      return {};
  }
}

}  // namespace

std::vector<Violation> validate(const Workspace& ws, ModelId model_id) {
  const Model& model = ws.model(model_id);
  const DialectSpec& spec = dialect_spec(model.dialect());
  std::vector<Violation> out;
  for (NodeId id : preorder(model, model.root())) {
    const AsgNode& n = model.node(id);
    if (!spec.legal_kinds.contains(n.kind)) {
      out.push_back({id, ViolationReason::IllegalKindForDialect,
                     std::string(to_string(n.kind)) + " is not legal in " +
                         std::string(to_string(model.dialect()))});
    } else if (n.parent) {
      const AsgNode& parent = model.node(*n.parent);
      auto allowed = allowed_children(model.dialect(), parent.kind);
      if (allowed && spec.legal_kinds.contains(parent.kind) &&
          !allowed->contains(n.kind)) {
        out.push_back({id, ViolationReason::IllegalKindForDialect,
                       std::string(to_string(n.kind)) + " misplaced under " +
                           std::string(to_string(parent.kind))});
      }
    }
    if (spec.legal_kinds.contains(n.kind)) {
      if (auto problem = slot_problem(model, n); !problem.empty())
        out.push_back({id, ViolationReason::IllegalKindForDialect,
                       std::string(to_string(n.kind)) + " " + problem});
    }
    if (n.kind == K::SelfReference) {
      const AsgNode& parent = model.node(*n.parent);
      if (parent.kind != K::MethodInvocation || parent.children.front() != id)
        out.push_back({id, ViolationReason::IllegalKindForDialect,
                       "self reference outside a receiver slot"});
    }
    if (n.kind == K::BinaryOperation && !spec.legal_operators.contains(n.payload.text))
      out.push_back({id, ViolationReason::IllegalOperator,
                     "operator '" + n.payload.text + "'"});
    if (is_reference(n.kind)) {
      if (!n.referee) {
        out.push_back({id, ViolationReason::UnresolvedReference,
                       "'" + n.name + "' is not bound"});
      } else if (model.node(*n.referee).kind == K::StubDeclaration) {
        out.push_back({id, ViolationReason::ReferenceToStub,
                       "'" + n.name + "' points to a stub"});
      }
    }
  }
  return out;
}

}  // namespace asgmig
