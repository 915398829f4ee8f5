#include <algorithm>
#include <functional>

#include "asgmig/dialect.hpp"
#include "asgmig/errors.hpp"
#include "asgmig/graph_ops.hpp"
#include "asgmig/parse.hpp"
#include "lexer.hpp"
#include "syntax.hpp"

namespace asgmig {

namespace {

using namespace detail;

int precedence(std::string_view op) {
  if (op == "||") return 1;
  if (op == "&&") return 2;
  if (op == "==" || op == "!=") return 3;
  if (op == "<" || op == ">" || op == "<=" || op == ">=") return 4;
  if (op == "+" || op == "-") return 5;
  if (op == "*" || op == "/") return 6;
  return 0;
}

Syn make(NodeKind kind, const Token& at, std::string name = {}) {
  Syn s;
  s.kind = kind;
  s.name = std::move(name);
  s.line = at.line;
  s.column = at.column;
  return s;
}

/// Shared recursive-descent parser for the two object dialects. MiniOO writes
/// `Type name`, MiniScript writes `name: Type`.
class ObjParser {
 public:
  ObjParser(std::string_view text, Dialect dialect)
      : ts_(tokenize(text, LexerStyle{false}), false),
        script_(dialect == Dialect::MiniScript) {}

  std::vector<Syn> parse() {
    std::vector<Syn> top;
    Syn* open_package = nullptr;  // MiniOO `package X;` form
    while (!ts_.at_end()) {
      if (!script_ && ts_.is_keyword("package")) {
        const Token& at = ts_.next();
        Token name = ts_.expect_identifier("package name");
        Syn pkg = make(NodeKind::Package, at, name.text);
        if (ts_.accept_symbol(";")) {
          top.push_back(std::move(pkg));
          open_package = &top.back();
          continue;
        }
        ts_.expect_symbol("{");
        while (!ts_.accept_symbol("}")) pkg.children.push_back(parse_class());
        top.push_back(std::move(pkg));
        open_package = nullptr;
        continue;
      }
      if (script_ && ts_.is_keyword("namespace")) {
        const Token& at = ts_.next();
        Token name = ts_.expect_identifier("namespace name");
        Syn pkg = make(NodeKind::Package, at, name.text);
        ts_.expect_symbol("{");
        while (!ts_.accept_symbol("}")) pkg.children.push_back(parse_class());
        top.push_back(std::move(pkg));
        continue;
      }
      Syn cls = parse_class();
      if (open_package)
        open_package->children.push_back(std::move(cls));
      else
        top.push_back(std::move(cls));
    }
    return top;
  }

 private:
  Visibility parse_visibility() {
    if (ts_.accept_keyword("public")) return Visibility::Public;
    if (ts_.accept_keyword("private")) return Visibility::Private;
    return Visibility::Default;
  }

  Syn parse_class() {
    Visibility vis = parse_visibility();
    if (script_) ts_.accept_keyword("export");
    const Token& at = ts_.peek();
    ts_.expect_keyword("class");
    Token name = ts_.expect_identifier("class name");
    Syn cls = make(NodeKind::Class, at, name.text);
    cls.payload.visibility = vis;
    if (ts_.accept_keyword("extends")) {
      Token super = ts_.expect_identifier("superclass name");
      cls.children.push_back(make(NodeKind::TypeReference, super, super.text));
    }
    ts_.expect_symbol("{");
    while (!ts_.accept_symbol("}")) {
      if (ts_.at_end()) ts_.fail("unterminated class");
      cls.children.push_back(parse_member());
    }
    return cls;
  }

  // Type position; `var` means no declared type.
  std::optional<Syn> parse_type() {
    Token type = ts_.expect_identifier("type name");
    if (type.text == "var") return std::nullopt;
    return make(NodeKind::TypeReference, type, type.text);
  }

  Syn parse_member() {
    Payload payload;
    payload.visibility = parse_visibility();
    if (ts_.accept_keyword("static")) payload.is_static = true;
    std::optional<Syn> type;
    Token name;
    if (script_) {
      name = ts_.expect_identifier("member name");
    } else {
      type = parse_type();
      name = ts_.expect_identifier("member name");
    }
    if (ts_.is_symbol("(")) {
      Syn method = make(NodeKind::Method, name, name.text);
      method.payload = payload;
      std::vector<Syn> params = parse_params();
      if (script_ && ts_.accept_symbol(":")) type = parse_type();
      if (type) method.children.push_back(std::move(*type));
      for (auto& p : params) method.children.push_back(std::move(p));
      if (!ts_.accept_symbol(";")) parse_body(method.children);
      return method;
    }
    Syn attr = make(NodeKind::AttributeDeclaration, name, name.text);
    attr.payload = payload;
    if (script_ && ts_.accept_symbol(":")) type = parse_type();
    if (type) attr.children.push_back(std::move(*type));
    ts_.expect_symbol(";");
    return attr;
  }

  std::vector<Syn> parse_params() {
    std::vector<Syn> params;
    ts_.expect_symbol("(");
    if (ts_.accept_symbol(")")) return params;
    do {
      if (script_) {
        Token name = ts_.expect_identifier("parameter name");
        Syn p = make(NodeKind::Parameter, name, name.text);
        if (ts_.accept_symbol(":"))
          if (auto t = parse_type()) p.children.push_back(std::move(*t));
        params.push_back(std::move(p));
      } else {
        const Token& at = ts_.peek();
        std::optional<Syn> type = parse_type();
        Syn p = make(NodeKind::Parameter, at);
        if (ts_.peek().type == TokenType::Identifier) p.name = ts_.next().text;
        if (type) p.children.push_back(std::move(*type));
        params.push_back(std::move(p));
      }
    } while (ts_.accept_symbol(","));
    ts_.expect_symbol(")");
    return params;
  }

  void parse_body(std::vector<Syn>& out) {
    ts_.expect_symbol("{");
    while (!ts_.accept_symbol("}")) {
      if (ts_.at_end()) ts_.fail("unterminated block");
      out.push_back(parse_statement());
    }
  }

  Syn parse_block() {
    Syn block = make(NodeKind::Block, ts_.peek());
    parse_body(block.children);
    return block;
  }

  Syn parse_statement() {
    const Token& at = ts_.peek();
    if (ts_.accept_keyword("return")) {
      Syn ret = make(NodeKind::Return, at);
      if (!ts_.is_symbol(";")) ret.children.push_back(parse_expression(0));
      ts_.expect_symbol(";");
      return ret;
    }
    if (ts_.accept_keyword("if")) return parse_if(at);
    if (script_ && ts_.accept_keyword("let")) {
      Token name = ts_.expect_identifier("variable name");
      Syn var = make(NodeKind::VariableDeclaration, name, name.text);
      if (ts_.accept_symbol(":"))
        if (auto t = parse_type()) var.children.push_back(std::move(*t));
      ts_.expect_symbol(";");
      return var;
    }
    if (!script_ && at.type == TokenType::Identifier &&
        ts_.peek(1).type == TokenType::Identifier && ts_.is_symbol(";", 2)) {
      std::optional<Syn> type = parse_type();
      Token name = ts_.expect_identifier("variable name");
      Syn var = make(NodeKind::VariableDeclaration, name, name.text);
      if (type) var.children.push_back(std::move(*type));
      ts_.expect_symbol(";");
      return var;
    }
    Syn expr = parse_expression(0);
    if (ts_.accept_symbol("=")) {
      if (expr.kind != NodeKind::VariableAccess) ts_.fail("cannot assign to this expression");
      Syn assign = make(NodeKind::Assignment, at);
      assign.children.push_back(std::move(expr));
      assign.children.push_back(parse_expression(0));
      ts_.expect_symbol(";");
      return assign;
    }
    Syn stmt = make(NodeKind::ExpressionStatement, at);
    stmt.children.push_back(std::move(expr));
    ts_.expect_symbol(";");
    return stmt;
  }

  Syn parse_if(const Token& at) {
    Syn stmt = make(NodeKind::IfStatement, at);
    ts_.expect_symbol("(");
    stmt.children.push_back(parse_expression(0));
    ts_.expect_symbol(")");
    stmt.children.push_back(parse_block());
    while (ts_.is_keyword("else")) {
      const Token& else_at = ts_.next();
      if (ts_.accept_keyword("if")) {
        Syn clause = make(NodeKind::ElseIfClause, else_at);
        ts_.expect_symbol("(");
        clause.children.push_back(parse_expression(0));
        ts_.expect_symbol(")");
        clause.children.push_back(parse_block());
        stmt.children.push_back(std::move(clause));
        continue;
      }
      stmt.children.push_back(parse_block());
      break;
    }
    return stmt;
  }

  Syn parse_expression(int min_prec) {
    Syn lhs = parse_postfix();
    while (true) {
      const Token& t = ts_.peek();
      int prec = t.type == TokenType::Symbol ? precedence(t.text) : 0;
      if (prec == 0 || prec <= min_prec) break;
      const Token& at = ts_.next();
      Syn bin = make(NodeKind::BinaryOperation, at);
      bin.payload.text = at.text;
      bin.children.push_back(std::move(lhs));
      bin.children.push_back(parse_expression(prec));
      lhs = std::move(bin);
    }
    return lhs;
  }

  std::vector<Syn> parse_args() {
    std::vector<Syn> args;
    ts_.expect_symbol("(");
    if (ts_.accept_symbol(")")) return args;
    do {
      args.push_back(parse_expression(0));
    } while (ts_.accept_symbol(","));
    ts_.expect_symbol(")");
    return args;
  }

  Syn invocation(Syn receiver, const Token& name) {
    Syn call = make(NodeKind::MethodInvocation, name, name.text);
    call.children.push_back(std::move(receiver));
    for (auto& a : parse_args()) call.children.push_back(std::move(a));
    return call;
  }

  Syn parse_postfix() {
    const Token& t = ts_.peek();
    Syn expr;
    if (t.type == TokenType::Identifier && (t.text == "this" || t.text == "super")) {
      Token self = ts_.next();
      ts_.expect_symbol(".");
      Token member = ts_.expect_identifier("member name");
      if (ts_.is_symbol("(")) {
        Syn receiver = make(NodeKind::SelfReference, self);
        receiver.payload.text = self.text;
        expr = invocation(std::move(receiver), member);
      } else {
        expr = make(NodeKind::VariableAccess, member, member.text);
        expr.qualifier = self.text;
      }
    } else if (t.type == TokenType::Identifier) {
      Token name = ts_.next();
      if (ts_.is_symbol("(")) {
        expr = make(NodeKind::FunctionInvocation, name, name.text);
        for (auto& a : parse_args()) expr.children.push_back(std::move(a));
      } else if (ts_.is_symbol(".") && ts_.peek(1).type == TokenType::Identifier) {
        ts_.next();
        Token member = ts_.next();
        if (ts_.is_symbol("(")) {
          expr = invocation(make(NodeKind::VariableAccess, name, name.text), member);
        } else {
          expr = make(NodeKind::VariableAccess, member, member.text);
          expr.qualifier = name.text;
        }
      } else {
        expr = make(NodeKind::VariableAccess, name, name.text);
      }
    } else {
      expr = parse_primary();
    }
    while (ts_.is_symbol(".")) {
      ts_.next();
      Token member = ts_.expect_identifier("member name");
      if (!ts_.is_symbol("(")) ts_.fail("only method calls may follow an expression");
      expr = invocation(std::move(expr), member);
    }
    return expr;
  }

  Syn parse_primary() {
    const Token& t = ts_.peek();
    if (t.type == TokenType::String) {
      Syn lit = make(NodeKind::StringLiteral, t);
      lit.payload.text = ts_.next().text;
      return lit;
    }
    if (t.type == TokenType::Number) {
      Syn lit = make(NodeKind::NumberLiteral, t);
      lit.payload.text = ts_.next().text;
      return lit;
    }
    if (ts_.is_symbol("-") && ts_.peek(1).type == TokenType::Number) {
      Syn lit = make(NodeKind::NumberLiteral, ts_.next());
      lit.payload.text = "-" + ts_.next().text;
      return lit;
    }
    if (ts_.accept_symbol("(")) {
      Syn inner = parse_expression(0);
      ts_.expect_symbol(")");
      return inner;
    }
    ts_.fail("expected an expression");
  }

  TokenStream ts_;
  bool script_;
};

// ---------------------------------------------------------------- binding

bool is_type_decl(NodeKind k) {
  return k == NodeKind::PrimitiveTypeDeclaration || k == NodeKind::Class;
}
bool is_variable(NodeKind k) {
  return k == NodeKind::VariableDeclaration || k == NodeKind::Parameter ||
         k == NodeKind::AttributeDeclaration;
}
bool is_callable(NodeKind k) {
  return k == NodeKind::Method || k == NodeKind::LibraryRoutineDeclaration;
}

class ObjBinder {
 public:
  ObjBinder(Model& model, std::vector<UnboundName>& unbound)
      : model_(model), unbound_(unbound) {}

  void run(const std::vector<PendingBind>& pending) {
    // Type references first: member lookup and receiver typing depend on them.
    for (const auto& p : pending)
      if (model_.node(p.node).kind == NodeKind::TypeReference) bind(p);
    for (const auto& p : pending)
      if (model_.node(p.node).kind != NodeKind::TypeReference) bind(p);
  }

 private:
  std::optional<NodeId> find_type(std::string_view name) const {
    for (NodeId id : preorder(model_, model_.root())) {
      const AsgNode& n = model_.node(id);
      if (n.kind == NodeKind::Class && n.name == name) return id;
    }
    for (NodeId id : model_.library()) {
      const AsgNode& n = model_.node(id);
      if (is_type_decl(n.kind) && n.name == name) return id;
    }
    return std::nullopt;
  }

  std::optional<NodeId> superclass(NodeId cls) const {
    for (NodeId child : model_.node(cls).children) {
      const AsgNode& c = model_.node(child);
      if (c.kind == NodeKind::TypeReference) return c.referee;
    }
    return std::nullopt;
  }

  std::optional<NodeId> member(std::optional<NodeId> cls, std::string_view name,
                               bool (*accept)(NodeKind)) const {
    for (int guard = 0; cls && guard < 32; ++guard) {
      if (model_.node(*cls).kind != NodeKind::Class) return std::nullopt;
      for (NodeId child : model_.node(*cls).children) {
        const AsgNode& c = model_.node(child);
        if (accept(c.kind) && c.kind != NodeKind::VariableDeclaration && c.name == name)
          return child;
      }
      cls = superclass(*cls);
    }
    return std::nullopt;
  }

  std::optional<NodeId> local_variable(NodeId use, std::string_view name) const {
    auto method = enclosing(model_, use, NodeKind::Method);
    if (!method) return std::nullopt;
    for (NodeId id : preorder(model_, *method)) {
      const AsgNode& n = model_.node(id);
      if ((n.kind == NodeKind::VariableDeclaration || n.kind == NodeKind::Parameter) &&
          n.name == name)
        return id;
    }
    return std::nullopt;
  }

  /// Class a variable is declared with, if any.
  std::optional<NodeId> type_of(NodeId decl) const {
    const AsgNode& d = model_.node(decl);
    for (NodeId child : d.children) {
      const AsgNode& c = model_.node(child);
      if (c.kind == NodeKind::TypeReference) return c.referee;
    }
    return std::nullopt;
  }

  std::optional<NodeId> variable(NodeId use, std::string_view name) const {
    if (auto local = local_variable(use, name)) return local;
    if (auto attr = member(enclosing(model_, use, NodeKind::Class), name, is_variable))
      return attr;
    for (NodeId id : model_.library()) {
      const AsgNode& n = model_.node(id);
      if (n.kind == NodeKind::VariableDeclaration && n.name == name) return id;
    }
    return std::nullopt;
  }

  /// Class that a receiver expression denotes or evaluates to.
  std::optional<NodeId> receiver_class(NodeId use, NodeId receiver) const {
    const AsgNode& r = model_.node(receiver);
    switch (r.kind) {
      case NodeKind::SelfReference: {
        auto cls = enclosing(model_, use, NodeKind::Class);
        if (cls && r.payload.text == "super") return superclass(*cls);
        return cls;
      }
      case NodeKind::TypeReference:
        return r.referee;
      case NodeKind::VariableAccess:
        if (r.referee) return type_of(*r.referee);
        return std::nullopt;
      case NodeKind::MethodInvocation:
        if (r.referee) return type_of(*r.referee);
        return std::nullopt;
      default:
        return std::nullopt;
    }
  }

  void bind(const PendingBind& p) {
    const AsgNode& n = model_.node(p.node);
    std::optional<NodeId> hit;
    switch (n.kind) {
      case NodeKind::TypeReference:
        hit = find_type(n.name);
        break;
      case NodeKind::VariableAccess:
        if (p.qualifier == "this" || p.qualifier == "super") {
          auto cls = enclosing(model_, p.node, NodeKind::Class);
          if (cls && p.qualifier == "super") cls = superclass(*cls);
          hit = member(cls, n.name, is_variable);
        } else if (!p.qualifier.empty()) {
          hit = member(find_type(p.qualifier), n.name, is_variable);
        } else if (is_receiver(p.node)) {
          hit = variable(p.node, n.name);
          if (!hit) {
            if (auto cls = find_type(n.name)) {
              model_.set_kind(p.node, NodeKind::TypeReference);
              hit = cls;
            }
          }
        } else {
          hit = variable(p.node, n.name);
        }
        break;
      case NodeKind::MethodInvocation:
        hit = member(receiver_class(p.node, model_.node(p.node).children.front()),
                     n.name, is_callable);
        break;
      case NodeKind::FunctionInvocation: {
        hit = member(enclosing(model_, p.node, NodeKind::Class), n.name, is_callable);
        if (!hit)
          for (NodeId id : model_.library()) {
            const AsgNode& lib = model_.node(id);
            if (lib.kind == NodeKind::LibraryRoutineDeclaration && lib.name == n.name) {
              hit = id;
              break;
            }
          }
        break;
      }
      default:
        break;
    }
    if (!hit) {
      unbound_.push_back({p.node, n.name, p.line, p.column});
      return;
    }
    model_.set_referee(p.node, *hit);
  }

  bool is_receiver(NodeId id) const {
    const AsgNode& n = model_.node(id);
    if (!n.parent) return false;
    const AsgNode& parent = model_.node(*n.parent);
    return parent.kind == NodeKind::MethodInvocation && parent.children.front() == id;
  }

  Model& model_;
  std::vector<UnboundName>& unbound_;
};

}  // namespace

ParseOutcome parse_target(Workspace& ws, std::string alias, Dialect dialect,
                          std::string_view text) {
  if (dialect == Dialect::MiniProc)
    throw MigrationError(ErrorCode::PreconditionFailed,
                         "parse_target expects an object dialect");
  ObjParser parser(text, dialect);
  std::vector<Syn> top = parser.parse();

  Model& model = ws.add_model(std::move(alias), dialect);
  install_library(model, dialect_spec(dialect));
  std::vector<PendingBind> pending;
  for (const Syn& item : top) materialize(model, model.root(), item, pending);
  ParseOutcome outcome{model.id(), {}};
  ObjBinder(model, outcome.unbound).run(pending);
  return outcome;
}

}  // namespace asgmig
