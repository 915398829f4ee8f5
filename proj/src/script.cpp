#include "asgmig/script.hpp"

#include <algorithm>
#include <sstream>

#include "asgmig/dialect.hpp"
#include "asgmig/errors.hpp"
#include "asgmig/graph_ops.hpp"

namespace asgmig {

namespace {

[[noreturn]] void script_error(int line, const std::string& message) {
  throw MigrationError(ErrorCode::ScriptError,
                       "script line " + std::to_string(line) + ": " + message);
}

std::vector<std::size_t> indices(const std::string& text, int line) {
  std::vector<std::size_t> out;
  std::stringstream in(text);
  for (std::string item; std::getline(in, item, ',');) {
    try {
      std::size_t used = 0;
      long value = std::stol(item, &used);
      if (used != item.size() || value < 0) throw std::invalid_argument(item);
      out.push_back(static_cast<std::size_t>(value));
    } catch (const std::exception&) {
      script_error(line, "'" + item + "' is not a choice index");
    }
  }
  return out;
}

LookupMode mode_of(const ScriptCommand& cmd, LookupMode fallback) {
  auto it = cmd.options.find("mode");
  if (it == cmd.options.end()) return fallback;
  auto mode = lookup_mode_from_string(it->second);
  if (!mode) script_error(cmd.line, "unknown mode '" + it->second + "'");
  return *mode;
}

std::string option(const ScriptCommand& cmd, const std::string& key) {
  auto it = cmd.options.find(key);
  return it == cmd.options.end() ? std::string() : it->second;
}

/// "<src> -> <target>" arguments.
std::pair<std::string, std::string> arrow(const ScriptCommand& cmd) {
  if (cmd.args.size() != 3 || cmd.args[1] != "->")
    script_error(cmd.line, "expected: " + cmd.verb + " <source> -> <target>");
  return {cmd.args[0], cmd.args[2]};
}

}  // namespace

std::vector<ScriptCommand> parse_script(std::string_view text) {
  std::vector<ScriptCommand> out;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw.substr(0, raw.find('#'));
    std::istringstream words(line);
    ScriptCommand cmd;
    cmd.line = line_no;
    for (std::string w; words >> w;) {
      if (cmd.verb.empty()) {
        cmd.verb = w;
        continue;
      }
      auto eq = w.find('=');
      // key=value options; "OtD=&" style rule parameters stay positional for install.
      if (cmd.verb != "install" && eq != std::string::npos && eq > 0)
        cmd.options[w.substr(0, eq)] = w.substr(eq + 1);
      else
        cmd.args.push_back(w);
    }
    if (cmd.verb.empty()) continue;
    auto first = line.find_first_not_of(" \t");
    auto last = line.find_last_not_of(" \t\r");
    cmd.text = line.substr(first, last - first + 1);
    static const char* known[] = {"produce", "map", "install", "rollback", "export", "report"};
    if (std::find(std::begin(known), std::end(known), cmd.verb) == std::end(known))
      script_error(line_no, "unknown command '" + cmd.verb + "'");
    out.push_back(std::move(cmd));
  }
  return out;
}

std::size_t ScriptedChooser::choose(const ChoicePrompt& prompt) {
  ++asked_;
  auto& queue = prompt.kind == ChoicePrompt::Kind::Rule ? rules_ : arguments_;
  if (!queue.empty()) {
    std::size_t pick = queue.front();
    queue.pop_front();
    return pick;
  }
  if (next_) return next_->choose(prompt);
  if (prompt.kind == ChoicePrompt::Kind::Argument)
    throw MigrationError(ErrorCode::ChooserRequired,
                         "no answer for " + prompt.subject + " (use arg=<index>)");
  throw MigrationError(ErrorCode::ChoiceAbandoned,
                       "no answer for " + prompt.subject + " (use choose=<i,j,...>)");
}

ScriptReport run_script(Session& session, const std::vector<ScriptCommand>& commands,
                        const ScriptOptions& options) {
  ScriptReport report;
  Engine& engine = session.engine();
  for (const ScriptCommand& cmd : commands) {
    CommandOutcome outcome;
    outcome.command = cmd;
    ScriptedChooser chooser(indices(option(cmd, "choose"), cmd.line),
                            indices(option(cmd, "arg"), cmd.line), options.interactive);
    Chooser* previous = engine.chooser();
    engine.set_chooser(&chooser);
    try {
      if (cmd.verb == "produce") {
        auto [src, dst] = arrow(cmd);
        outcome.result = engine.produce(session.resolve(src), session.resolve(dst),
                                        mode_of(cmd, options.default_mode));
      } else if (cmd.verb == "map") {
        auto [src, dst] = arrow(cmd);
        std::optional<ContextId> scope;
        if (auto s = option(cmd, "scope"); !s.empty()) scope = session.resolve_context(s);
        outcome.result = engine.map(session.resolve(src), session.resolve(dst), scope,
                                    mode_of(cmd, options.default_mode));
      } else if (cmd.verb == "install") {
        std::string body;
        for (const auto& a : cmd.args) body += a + " ";
        session.install(parse_install(body, cmd.line));
      } else if (cmd.verb == "rollback") {
        if (cmd.args.empty()) {
          outcome.message = "rolled back #" + std::to_string(engine.rollback_last());
        } else {
          std::uint64_t id = indices(cmd.args[0], cmd.line).at(0);
          engine.rollback(id);
          outcome.message = "rolled back #" + std::to_string(id);
        }
      } else if (cmd.verb == "export") {
        if (cmd.args.size() != 1) script_error(cmd.line, "expected: export <alias>");
        std::filesystem::path dir = options.export_dir;
        if (auto d = option(cmd, "dir"); !d.empty()) dir = d;
        outcome.exported = engine.export_model(session.model_id(cmd.args[0]), dir);
        outcome.message = "wrote " + outcome.exported->string();
      } else if (cmd.verb == "report") {
        ContextId ctx = cmd.args.empty() ? ContextId::global()
                                         : session.resolve_context(cmd.args[0]);
        std::ostringstream text;
        auto rows = engine.unresolved_report(ctx);
        text << rows.size() << " unresolved";
        for (const auto& row : rows)
          text << "\n    " << session.workspace().node(row.reference).name << " #"
               << row.reference.node.value << " -> " << row.foreign_path;
        outcome.message = text.str();
      }
    } catch (const ChoicePending& pending) {
      outcome.ok = false;
      outcome.error_code = "ChoicePending";
      outcome.message = "unanswered choice for " + pending.prompt().subject;
    } catch (const MigrationError& e) {
      outcome.ok = false;
      outcome.error_code = std::string(to_string(e.code()));
      outcome.message = e.what();
    }
    engine.set_chooser(previous);
    const bool ok = outcome.ok;
    report.outcomes.push_back(std::move(outcome));
    if (!ok) {
      report.ok = false;
      if (options.stop_on_error) break;
    }
  }
  return report;
}

std::string render_report(const Session& session, const ScriptReport& report) {
  std::ostringstream out;
  const Workspace& ws = session.workspace();
  for (const CommandOutcome& o : report.outcomes) {
    out << "line " << o.command.line << ": " << o.command.text << "\n";
    if (!o.ok) {
      out << "  ERROR " << o.error_code << ": " << o.message << "\n";
      continue;
    }
    if (o.result) {
      const DirectiveResult& r = *o.result;
      out << "  ok #" << r.transaction << ": " << r.created.size() << " created, "
          << r.mappings.size() << " mappings, " << r.stubs_created.size() << " stubs, "
          << r.adapted.size() << " adapted, " << r.stubs_removed.size() << " swept, "
          << r.unresolved.size() << " unresolved";
      if (r.prompts) out << ", " << r.prompts << " prompts";
      out << "\n";
      for (const auto& line : r.log) out << "  " << line << "\n";
    } else {
      out << "  ok" << (o.message.empty() ? "" : ": " + o.message) << "\n";
    }
  }
  out << "unresolved references: " << session.engine().unresolved_report(ContextId::global()).size()
      << "\n";
  for (ModelId id : ws.model_ids()) {
    if (session.role(id) != ModelRole::Target) continue;
    auto violations = validate(ws, id);
    out << "model " << ws.model(id).alias() << ": " << violations.size() << " violations, "
        << stubs(ws.model(id)).size() << " stubs\n";
    for (const auto& v : violations)
      out << "  " << to_string(v.reason) << " #" << v.node.value << ": " << v.detail << "\n";
  }
  out << (report.ok ? "status: ok" : "status: failed") << "\n";
  return out.str();
}

}  // namespace asgmig
