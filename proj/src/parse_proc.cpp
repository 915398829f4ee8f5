#include <algorithm>

#include "asgmig/dialect.hpp"
#include "asgmig/graph_ops.hpp"
#include "asgmig/parse.hpp"
#include "lexer.hpp"
#include "syntax.hpp"

namespace asgmig {

namespace {

using namespace detail;

int precedence(std::string_view op) {
  if (op == "Or") return 1;
  if (op == "And") return 2;
  if (op == "=" || op == "<>" || op == "<" || op == ">" || op == "<=" || op == ">=")
    return 3;
  if (op == "&") return 4;
  if (op == "+" || op == "-") return 5;
  if (op == "*" || op == "/") return 6;
  return 0;
}

constexpr std::string_view kReserved[] = {
    "Dim",  "Sub",    "Function", "End",  "If",     "Then", "Else", "ElseIf",
    "Call", "Return", "And",      "Or",   "As",     "Public", "Private",
    "ByVal", "ByRef", "Attribute", "Option"};

bool reserved(std::string_view word) {
  return std::any_of(std::begin(kReserved), std::end(kReserved),
                     [&](std::string_view r) { return iequals(r, word); });
}

Syn make(NodeKind kind, const Token& at, std::string name = {}) {
  Syn s;
  s.kind = kind;
  s.name = std::move(name);
  s.line = at.line;
  s.column = at.column;
  return s;
}

class ProcParser {
 public:
  ProcParser(std::string_view text, std::string default_module)
      : ts_(tokenize(text, LexerStyle{true}), true),
        default_module_(std::move(default_module)) {}

  std::vector<Syn> parse() {
    std::vector<Syn> modules;
    while (true) {
      skip_newlines();
      if (ts_.at_end()) break;
      if (ts_.is_keyword("Attribute")) {
        modules.push_back(parse_attribute_header());
        continue;
      }
      if (ts_.accept_keyword("Option")) {
        skip_option();
        continue;
      }
      if (modules.empty()) modules.push_back(make(NodeKind::Module, ts_.peek(), default_module_));
      parse_module_item(modules.back());
    }
    if (modules.empty()) modules.push_back(make(NodeKind::Module, ts_.peek(), default_module_));
    return modules;
  }

 private:
  void skip_newlines() {
    while (ts_.peek().type == TokenType::Newline) ts_.next();
  }

  void end_of_line() {
    if (ts_.peek().type == TokenType::Newline) {
      ts_.next();
      return;
    }
    if (!ts_.at_end()) ts_.fail("expected end of line");
  }

  // Compiler options carry no model content.
  void skip_option() {
    while (ts_.peek().type != TokenType::Newline && !ts_.at_end()) ts_.next();
  }

  Syn parse_attribute_header() {
    const Token& at = ts_.next();
    ts_.expect_keyword("VB_Name");
    ts_.expect_symbol("=");
    if (ts_.peek().type != TokenType::String) ts_.fail("expected module name string");
    Syn module = make(NodeKind::Module, at, ts_.next().text);
    end_of_line();
    return module;
  }

  Visibility parse_visibility() {
    if (ts_.accept_keyword("Public")) return Visibility::Public;
    if (ts_.accept_keyword("Private")) return Visibility::Private;
    return Visibility::Default;
  }

  void parse_module_item(Syn& module) {
    Visibility vis = parse_visibility();
    if (ts_.is_keyword("Sub") || ts_.is_keyword("Function")) {
      module.children.push_back(parse_callable(vis));
      return;
    }
    bool dim = ts_.accept_keyword("Dim");
    if (!dim && vis == Visibility::Default) ts_.fail("expected a declaration");
    Syn var = parse_variable_tail(NodeKind::VariableDeclaration);
    var.payload.visibility = vis;
    module.children.push_back(std::move(var));
    end_of_line();
  }

  // name [As Type]
  Syn parse_variable_tail(NodeKind kind) {
    Token name = ts_.expect_identifier("variable name");
    Syn var = make(kind, name, name.text);
    if (ts_.accept_keyword("As")) var.children.push_back(parse_type_ref());
    return var;
  }

  Syn parse_type_ref() {
    Token type = ts_.expect_identifier("type name");
    return make(NodeKind::TypeReference, type, type.text);
  }

  Syn parse_callable(Visibility vis) {
    bool is_function = ts_.is_keyword("Function");
    const Token& at = ts_.next();
    Token name = ts_.expect_identifier("procedure name");
    Syn callable =
        make(is_function ? NodeKind::Function : NodeKind::SubProcedure, at, name.text);
    callable.payload.visibility = vis;
    std::vector<Syn> params;
    if (ts_.accept_symbol("(")) {
      if (!ts_.is_symbol(")")) {
        do {
          ts_.accept_keyword("ByVal") || ts_.accept_keyword("ByRef");
          params.push_back(parse_variable_tail(NodeKind::Parameter));
        } while (ts_.accept_symbol(","));
      }
      ts_.expect_symbol(")");
    }
    if (is_function && ts_.accept_keyword("As"))
      callable.children.push_back(parse_type_ref());
    for (auto& p : params) callable.children.push_back(std::move(p));
    end_of_line();
    parse_statements(callable.children);
    ts_.expect_keyword("End");
    ts_.expect_keyword(is_function ? "Function" : "Sub");
    end_of_line();
    return callable;
  }

  bool at_block_end() const {
    return ts_.at_end() || ts_.is_keyword("End") || ts_.is_keyword("Else") ||
           ts_.is_keyword("ElseIf");
  }

  void parse_statements(std::vector<Syn>& out) {
    while (true) {
      skip_newlines();
      if (at_block_end()) return;
      out.push_back(parse_statement());
    }
  }

  Syn parse_block() {
    Syn block = make(NodeKind::Block, ts_.peek());
    parse_statements(block.children);
    return block;
  }

  Syn parse_statement() {
    const Token& at = ts_.peek();
    if (ts_.accept_keyword("Dim")) {
      Syn var = parse_variable_tail(NodeKind::VariableDeclaration);
      end_of_line();
      return var;
    }
    if (ts_.accept_keyword("Call")) {
      Token name = ts_.expect_identifier("procedure name");
      Syn stmt = make(NodeKind::ExpressionStatement, at);
      stmt.children.push_back(parse_call_tail(name, true));
      end_of_line();
      return stmt;
    }
    if (ts_.accept_keyword("Return")) {
      Syn ret = make(NodeKind::Return, at);
      if (ts_.peek().type != TokenType::Newline && !ts_.at_end())
        ret.children.push_back(parse_expression(0));
      end_of_line();
      return ret;
    }
    if (ts_.accept_keyword("If")) return parse_if(at);
    Token name = ts_.expect_identifier("statement");
    if (reserved(name.text)) ts_.fail("unexpected keyword '" + name.text + "'");
    if (ts_.accept_symbol("=")) {
      Syn assign = make(NodeKind::Assignment, at);
      assign.children.push_back(make(NodeKind::VariableAccess, name, name.text));
      assign.children.push_back(parse_expression(0));
      end_of_line();
      return assign;
    }
    Syn stmt = make(NodeKind::ExpressionStatement, at);
    stmt.children.push_back(parse_call_tail(name, false));
    end_of_line();
    return stmt;
  }

  // After the callee name: "(args)", bare args, or nothing.
  Syn parse_call_tail(const Token& name, bool parens_only) {
    Syn call = make(NodeKind::FunctionInvocation, name, name.text);
    if (ts_.accept_symbol("(")) {
      if (!ts_.is_symbol(")")) {
        do {
          call.children.push_back(parse_expression(0));
        } while (ts_.accept_symbol(","));
      }
      ts_.expect_symbol(")");
    } else if (!parens_only && ts_.peek().type != TokenType::Newline && !ts_.at_end()) {
      do {
        call.children.push_back(parse_expression(0));
      } while (ts_.accept_symbol(","));
    }
    return call;
  }

  Syn parse_if(const Token& at) {
    Syn stmt = make(NodeKind::IfStatement, at);
    stmt.children.push_back(parse_expression(0));
    ts_.expect_keyword("Then");
    end_of_line();
    stmt.children.push_back(parse_block());
    while (ts_.is_keyword("ElseIf")) {
      Syn clause = make(NodeKind::ElseIfClause, ts_.next());
      clause.children.push_back(parse_expression(0));
      ts_.expect_keyword("Then");
      end_of_line();
      clause.children.push_back(parse_block());
      stmt.children.push_back(std::move(clause));
    }
    if (ts_.accept_keyword("Else")) {
      end_of_line();
      stmt.children.push_back(parse_block());
    }
    ts_.expect_keyword("End");
    ts_.expect_keyword("If");
    end_of_line();
    return stmt;
  }

  std::string peek_operator() const {
    const Token& t = ts_.peek();
    if (t.type == TokenType::Symbol && precedence(t.text) > 0) return t.text;
    if (t.type == TokenType::Identifier) {
      if (iequals(t.text, "And")) return "And";
      if (iequals(t.text, "Or")) return "Or";
    }
    return {};
  }

  Syn parse_expression(int min_prec) {
    Syn lhs = parse_primary();
    while (true) {
      std::string op = peek_operator();
      int prec = op.empty() ? 0 : precedence(op);
      if (prec == 0 || prec <= min_prec) break;
      const Token& at = ts_.next();
      Syn bin = make(NodeKind::BinaryOperation, at);
      bin.payload.text = op;
      bin.children.push_back(std::move(lhs));
      bin.children.push_back(parse_expression(prec));
      lhs = std::move(bin);
    }
    return lhs;
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
    if (t.type == TokenType::Identifier && !reserved(t.text)) {
      Token name = ts_.next();
      if (ts_.is_symbol("(")) return parse_call_tail(name, true);
      return make(NodeKind::VariableAccess, name, name.text);
    }
    ts_.fail("expected an expression");
  }

  TokenStream ts_;
  std::string default_module_;
};

bool is_callable(NodeKind kind) {
  return kind == NodeKind::SubProcedure || kind == NodeKind::Function ||
         kind == NodeKind::LibraryRoutineDeclaration;
}

bool is_variable(NodeKind kind) {
  return kind == NodeKind::VariableDeclaration || kind == NodeKind::Parameter;
}

std::optional<NodeId> find_in(const Model& model, std::span<const NodeId> ids,
                              std::string_view name, bool (*accept)(NodeKind)) {
  for (NodeId id : ids) {
    const AsgNode& n = model.node(id);
    if (accept(n.kind) && iequals(n.name, name)) return id;
  }
  return std::nullopt;
}

/// Declarations visible from a use site, innermost scope first.
std::vector<std::vector<NodeId>> proc_scopes(const Model& model, NodeId use) {
  std::vector<std::vector<NodeId>> scopes;
  auto callable = enclosing(model, use, NodeKind::SubProcedure);
  if (!callable) callable = enclosing(model, use, NodeKind::Function);
  if (callable) {
    auto all = preorder(model, *callable);
    std::vector<NodeId> locals;
    for (NodeId id : all)
      if (id != *callable && is_variable(model.node(id).kind)) locals.push_back(id);
    scopes.push_back(std::move(locals));
  }
  auto module = enclosing(model, use, NodeKind::Module);
  if (module) scopes.push_back(model.node(*module).children);
  std::vector<NodeId> others;
  for (NodeId m : model.node(model.root()).children)
    if (!module || m != *module)
      for (NodeId member : model.node(m).children) others.push_back(member);
  scopes.push_back(std::move(others));
  scopes.push_back(std::vector<NodeId>(model.library().begin(), model.library().end()));
  return scopes;
}

void bind_proc(Model& model, const std::vector<PendingBind>& pending,
               std::vector<UnboundName>& unbound) {
  for (const auto& p : pending) {
    const AsgNode& n = model.node(p.node);
    std::optional<NodeId> hit;
    bool as_call = false;
    for (const auto& scope : proc_scopes(model, p.node)) {
      if (n.kind == NodeKind::TypeReference) {
        hit = find_in(model, scope, n.name, [](NodeKind k) {
          return k == NodeKind::PrimitiveTypeDeclaration || k == NodeKind::Class;
        });
      } else if (n.kind == NodeKind::FunctionInvocation) {
        hit = find_in(model, scope, n.name, is_callable);
      } else {
        hit = find_in(model, scope, n.name, is_variable);
        if (!hit) {
          hit = find_in(model, scope, n.name, is_callable);
          as_call = hit.has_value();
        }
      }
      if (hit) break;
    }
    if (!hit) {
      unbound.push_back({p.node, n.name, p.line, p.column});
      continue;
    }
    if (as_call) model.set_kind(p.node, NodeKind::FunctionInvocation);
    model.set_name(p.node, model.node(*hit).name);
    model.set_referee(p.node, *hit);
  }
}

}  // namespace

ParseOutcome parse_source(Workspace& ws, std::string alias, std::string_view text,
                          std::string default_module) {
  ProcParser parser(text, std::move(default_module));
  std::vector<Syn> modules = parser.parse();

  Model& model = ws.add_model(std::move(alias), Dialect::MiniProc);
  install_library(model, dialect_spec(Dialect::MiniProc));
  std::vector<PendingBind> pending;
  for (const Syn& module : modules) materialize(model, model.root(), module, pending);
  ParseOutcome outcome{model.id(), {}};
  bind_proc(model, pending, outcome.unbound);
  return outcome;
}

}  // namespace asgmig
