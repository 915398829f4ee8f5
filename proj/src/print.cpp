#include "asgmig/print.hpp"

#include <sstream>

#include "asgmig/dialect.hpp"
#include "asgmig/errors.hpp"
#include "asgmig/graph_ops.hpp"

namespace asgmig {

namespace {

using K = NodeKind;

int precedence(std::string_view op) {
  if (op == "||" || op == "Or") return 1;
  if (op == "&&" || op == "And") return 2;
  if (op == "==" || op == "!=" || op == "=" || op == "<>") return 3;
  if (op == "<" || op == ">" || op == "<=" || op == ">=") return 3;
  if (op == "&") return 4;
  if (op == "+" || op == "-") return 5;
  if (op == "*" || op == "/") return 6;
  return 0;
}

// Object dialects rank comparisons above equality.
int object_precedence(std::string_view op) {
  if (op == "<" || op == ">" || op == "<=" || op == ">=") return 4;
  if (op == "&") return 5;
  return precedence(op);
}

constexpr int kAtom = 100;

class Printer {
 public:
  explicit Printer(const Model& model)
      : model_(model),
        proc_(model.dialect() == Dialect::MiniProc),
        script_(model.dialect() == Dialect::MiniScript) {}

  std::string model_text() {
    const AsgNode& root = model_.node(model_.root());
    bool first = true;
    for (std::size_t i = 0; i < root.children.size(); ++i) {
      if (!first) out_ << '\n';
      first = false;
      top_level(root.children[i], i + 1 == root.children.size());
    }
    return out_.str();
  }

  std::string fragment(NodeId id) {
    const AsgNode& n = model_.node(id);
    switch (category(n.kind)) {
      case NodeCategory::Declaration:
        if (n.kind == K::Project) return model_text();
        if (n.kind == K::Parameter) return parameter(id);
        if (n.kind == K::VariableDeclaration && !is_local(id) && proc_) {
          module_variable(id);
          break;
        }
        declaration(id);
        break;
      case NodeCategory::Reference:
        if (n.kind == K::TypeReference) return n.name;
        return expression(id);
      case NodeCategory::Grammatical:
        if (is_expression(n.kind)) return expression(id);
        if (n.kind == K::Block) {
          for (NodeId child : n.children) statement(child);
          break;
        }
        if (n.kind == K::ElseIfClause) return expression(n.children.front());
        statement(id);
        break;
    }
    return out_.str();
  }

 private:
  void line(const std::string& text) {
    out_ << std::string(static_cast<std::size_t>(indent_) * 2, ' ') << text << '\n';
  }

  bool is_local(NodeId id) const {
    const AsgNode& n = model_.node(id);
    if (!n.parent) return false;
    NodeKind p = model_.node(*n.parent).kind;
    return p != K::Module && p != K::Class && p != K::Project && p != K::Package;
  }

  static bool is_expression(NodeKind k) {
    return k == K::BinaryOperation || k == K::StringLiteral || k == K::NumberLiteral ||
           k == K::VariableAccess || k == K::FunctionInvocation ||
           k == K::MethodInvocation || k == K::SelfReference;
  }

  void top_level(NodeId id, bool last) {
    const AsgNode& n = model_.node(id);
    if (n.kind == K::Module) return module(id);
    if (n.kind == K::Package) {
      const std::string kw = script_ ? "namespace " : "package ";
      if (!script_ && last) {
        line(kw + n.name + ";");
        for (NodeId child : n.children) {
          out_ << '\n';
          declaration(child);
        }
        return;
      }
      line(kw + n.name + " {");
      ++indent_;
      bool first = true;
      for (NodeId child : n.children) {
        if (!first) out_ << '\n';
        first = false;
        declaration(child);
      }
      --indent_;
      line("}");
      return;
    }
    declaration(id);
  }

  // ------------------------------------------------------------ MiniProc

  void module(NodeId id) {
    const AsgNode& n = model_.node(id);
    line("Attribute VB_Name = " + quote(n.name));
    for (NodeId child : n.children) {
      const AsgNode& c = model_.node(child);
      if (c.kind == K::VariableDeclaration) {
        module_variable(child);
      } else {
        out_ << '\n';
        declaration(child);
      }
    }
  }

  void module_variable(NodeId id) {
    const AsgNode& n = model_.node(id);
    std::string head = n.payload.visibility == Visibility::Public    ? "Public "
                       : n.payload.visibility == Visibility::Private ? "Private "
                                                                     : "Dim ";
    line(head + n.name + proc_type_suffix(id));
  }

  std::string proc_type_suffix(NodeId id) const {
    auto type = type_child(id);
    return type ? " As " + model_.node(*type).name : std::string{};
  }

  std::string proc_visibility(Visibility v) const {
    return v == Visibility::Public ? "Public " : v == Visibility::Private ? "Private " : "";
  }

  void proc_callable(NodeId id) {
    const AsgNode& n = model_.node(id);
    const bool fn = n.kind == K::Function;
    std::string head = proc_visibility(n.payload.visibility) +
                       (fn ? "Function " : "Sub ") + n.name + "(" + parameters(id) + ")";
    if (fn) head += proc_type_suffix(id);
    line(head);
    body(id);
    line(fn ? "End Function" : "End Sub");
  }

  // ------------------------------------------------------------ shared

  std::optional<NodeId> type_child(NodeId id) const {
    for (NodeId child : model_.node(id).children) {
      const AsgNode& c = model_.node(child);
      if (c.kind == K::TypeReference) return child;
      if (c.kind != K::TypeReference) break;
    }
    return std::nullopt;
  }

  std::string parameters(NodeId callable) const {
    std::string out;
    for (NodeId child : model_.node(callable).children) {
      if (model_.node(child).kind != K::Parameter) continue;
      if (!out.empty()) out += ", ";
      out += parameter(child);
    }
    return out;
  }

  std::string parameter(NodeId id) const {
    const AsgNode& n = model_.node(id);
    auto type = type_child(id);
    if (proc_) return n.name + proc_type_suffix(id);
    if (script_) {
      std::string name = n.name.empty() ? "_" : n.name;
      return type ? name + ": " + model_.node(*type).name : name;
    }
    std::string t = type ? model_.node(*type).name : "var";
    return n.name.empty() ? t : t + " " + n.name;
  }

  void body(NodeId callable) {
    ++indent_;
    for (NodeId child : model_.node(callable).children) {
      NodeKind k = model_.node(child).kind;
      if (k == K::TypeReference || k == K::Parameter) continue;
      statement(child);
    }
    --indent_;
  }

  std::string modifiers(const AsgNode& n) const {
    std::string out;
    if (n.payload.visibility == Visibility::Public) out += "public ";
    if (n.payload.visibility == Visibility::Private) out += "private ";
    if (n.payload.is_static) out += "static ";
    return out;
  }

  void declaration(NodeId id) {
    const AsgNode& n = model_.node(id);
    switch (n.kind) {
      case K::Module:
        return module(id);
      case K::SubProcedure:
      case K::Function:
        if (proc_) return proc_callable(id);
        return object_callable(id);
      case K::Method:
        return object_callable(id);
      case K::Class:
        return object_class(id);
      case K::AttributeDeclaration:
        return line(modifiers(n) + typed_name(id) + ";");
      case K::VariableDeclaration:
        if (proc_) return line("Dim " + n.name + proc_type_suffix(id));
        if (script_) return line("let " + typed_name(id) + ";");
        return line(typed_name(id) + ";");
      case K::Package:
        return top_level(id, false);
      default:
        return line(std::string(to_string(n.kind)) + " " + n.name);
    }
  }

  // "Type name" or "name: Type".
  std::string typed_name(NodeId id) const {
    const AsgNode& n = model_.node(id);
    auto type = type_child(id);
    if (script_) return type ? n.name + ": " + model_.node(*type).name : n.name;
    return (type ? model_.node(*type).name : "var") + " " + n.name;
  }

  void object_class(NodeId id) {
    const AsgNode& n = model_.node(id);
    std::string head = modifiers(n) + "class " + n.name;
    if (auto super = type_child(id)) head += " extends " + model_.node(*super).name;
    line(head + " {");
    ++indent_;
    for (NodeId child : n.children)
      if (model_.node(child).kind != K::TypeReference) declaration(child);
    --indent_;
    line("}");
  }

  void object_callable(NodeId id) {
    const AsgNode& n = model_.node(id);
    auto type = type_child(id);
    std::string head = modifiers(n);
    if (script_) {
      head += n.name + "(" + parameters(id) + ")";
      if (type) head += ": " + model_.node(*type).name;
    } else {
      head += (type ? model_.node(*type).name : "var") + " " + n.name + "(" +
              parameters(id) + ")";
    }
    line(head + " {");
    body(id);
    line("}");
  }

  void statement(NodeId id) {
    const AsgNode& n = model_.node(id);
    const std::string end = proc_ ? "" : ";";
    switch (n.kind) {
      case K::VariableDeclaration:
        return declaration(id);
      case K::Assignment:
        return line(expression(n.children.at(0)) + " = " + expression(n.children.at(1)) +
                    end);
      case K::ExpressionStatement: {
        NodeId expr = n.children.at(0);
        if (proc_ && model_.node(expr).kind == K::FunctionInvocation)
          return line("Call " + expression(expr));
        return line(expression(expr) + end);
      }
      case K::Return:
        if (n.children.empty()) return line((proc_ ? "Return" : "return") + end);
        return line((proc_ ? "Return " : "return ") + expression(n.children.front()) + end);
      case K::IfStatement:
        return if_statement(id);
      default:
        if (is_expression(n.kind)) return line(expression(id) + end);
        return line(std::string(to_string(n.kind)));
    }
  }

  void block(NodeId id) {
    ++indent_;
    for (NodeId child : model_.node(id).children) statement(child);
    --indent_;
  }

  void if_statement(NodeId id) {
    const auto& kids = model_.node(id).children;
    if (proc_) {
      line("If " + expression(kids.at(0)) + " Then");
      block(kids.at(1));
      for (std::size_t i = 2; i < kids.size(); ++i) {
        const AsgNode& c = model_.node(kids[i]);
        if (c.kind == K::ElseIfClause) {
          line("ElseIf " + expression(c.children.at(0)) + " Then");
          block(c.children.at(1));
        } else {
          line("Else");
          block(kids[i]);
        }
      }
      line("End If");
      return;
    }
    line("if (" + expression(kids.at(0)) + ") {");
    block(kids.at(1));
    for (std::size_t i = 2; i < kids.size(); ++i) {
      const AsgNode& c = model_.node(kids[i]);
      if (c.kind == K::ElseIfClause) {
        line("} else if (" + expression(c.children.at(0)) + ") {");
        block(c.children.at(1));
      } else {
        line("} else {");
        block(kids[i]);
      }
    }
    line("}");
  }

  // ------------------------------------------------------------ expressions

  int rank(NodeId id) const {
    const AsgNode& n = model_.node(id);
    if (n.kind != K::BinaryOperation) return kAtom;
    return proc_ ? precedence(n.payload.text) : object_precedence(n.payload.text);
  }

  std::string quote(const std::string& value) const {
    std::string out = "\"";
    for (char c : value) {
      if (proc_) {
        out += c == '"' ? std::string("\"\"") : std::string(1, c);
        continue;
      }
      switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        default: out += c;
      }
    }
    return out + "\"";
  }

  std::string arguments(NodeId id, std::size_t from) const {
    std::string out;
    const auto& kids = model_.node(id).children;
    for (std::size_t i = from; i < kids.size(); ++i) {
      if (i > from) out += ", ";
      out += expression(kids[i]);
    }
    return out;
  }

  std::string expression(NodeId id) const {
    const AsgNode& n = model_.node(id);
    switch (n.kind) {
      case K::StringLiteral:
        return quote(n.payload.text);
      case K::NumberLiteral:
        return n.payload.text;
      case K::BinaryOperation: {
        int mine = rank(id);
        std::string lhs = expression(n.children.at(0));
        std::string rhs = expression(n.children.at(1));
        if (rank(n.children[0]) < mine) lhs = "(" + lhs + ")";
        if (rank(n.children[1]) <= mine) rhs = "(" + rhs + ")";
        return lhs + " " + n.payload.text + " " + rhs;
      }
      case K::FunctionInvocation:
        return n.name + "(" + arguments(id, 0) + ")";
      case K::MethodInvocation: {
        std::string receiver = receiver_text(n.children.at(0));
        return receiver + "." + n.name + "(" + arguments(id, 1) + ")";
      }
      case K::VariableAccess:
        return variable_access(id);
      case K::SelfReference:
        return n.payload.text.empty() ? "this" : n.payload.text;
      case K::TypeReference:
        return n.name;
      default:
        return "<" + std::string(to_string(n.kind)) + ">";
    }
  }

  std::string receiver_text(NodeId id) const {
    std::string text = expression(id);
    if (rank(id) != kAtom) return "(" + text + ")";
    return text;
  }

  /// Whether a bare name at use would bind to something other than decl.
  bool shadowed(NodeId use, NodeId decl, const std::string& name) const {
    auto method = enclosing(model_, use, K::Method);
    if (!method) return false;
    for (NodeId id : preorder(model_, *method)) {
      const AsgNode& n = model_.node(id);
      if (id != decl && (n.kind == K::VariableDeclaration || n.kind == K::Parameter) &&
          n.name == name)
        return true;
    }
    return false;
  }

  bool inherits_from(std::optional<NodeId> cls, NodeId owner) const {
    for (int guard = 0; cls && guard < 32; ++guard) {
      if (*cls == owner) return true;
      std::optional<NodeId> next;
      for (NodeId child : model_.node(*cls).children) {
        const AsgNode& c = model_.node(child);
        if (c.kind == K::TypeReference) next = c.referee;
        break;
      }
      cls = next;
    }
    return false;
  }

  std::string variable_access(NodeId id) const {
    const AsgNode& n = model_.node(id);
    if (proc_ || !n.referee || !model_.contains(*n.referee)) return n.name;
    const AsgNode& decl = model_.node(*n.referee);
    if (decl.kind != K::AttributeDeclaration && decl.kind != K::VariableDeclaration)
      return n.name;
    if (!decl.parent || model_.node(*decl.parent).kind != K::Class) return n.name;
    NodeId owner = *decl.parent;
    const std::string& owner_name = model_.node(owner).name;
    const bool is_static = decl.payload.is_static;
    if (script_) return (is_static ? owner_name : std::string("this")) + "." + n.name;
    auto cls = enclosing(model_, id, K::Class);
    bool reachable = inherits_from(cls, owner);
    if (reachable && !shadowed(id, *n.referee, n.name)) return n.name;
    if (is_static) return owner_name + "." + n.name;
    return "this." + n.name;
  }

  const Model& model_;
  bool proc_;
  bool script_;
  int indent_ = 0;
  std::ostringstream out_;
};

}  // namespace

std::string print_unchecked(const Workspace& ws, ModelId model) {
  return Printer(ws.model(model)).model_text();
}

std::string print_model(const Workspace& ws, ModelId model) {
  auto violations = validate(ws, model);
  if (!violations.empty()) {
    const Model& m = ws.model(model);
    std::string message = "model '" + m.alias() + "' is not exportable:";
    for (const auto& v : violations)
      message += "\n  " + std::string(to_string(v.reason)) + " at " +
                 declaration_path(m, v.node) + " #" + std::to_string(v.node.value) + ": " + v.detail;
    throw MigrationError(ErrorCode::NotExportable, message);
  }
  return print_unchecked(ws, model);
}

std::string print_node(const Workspace& ws, NodeRef node) {
  return Printer(ws.model(node.model)).fragment(node.node);
}

std::string export_file_name(const Model& model) {
  return model.alias() + dialect_spec(model.dialect()).file_extension;
}

}  // namespace asgmig
