#include "asgmig/http_service.hpp"

#include <httplib.h>

#include <json.hpp>
#include <sstream>

#include "asgmig/dialect.hpp"
#include "asgmig/errors.hpp"
#include "asgmig/graph_ops.hpp"
#include "asgmig/print.hpp"

namespace asgmig {

using nlohmann::json;

namespace {

class HttpError : public std::runtime_error {
 public:
  HttpError(int status, std::string code, const std::string& message)
      : std::runtime_error(message), status_(status), code_(std::move(code)) {}
  int status() const noexcept { return status_; }
  const std::string& code() const noexcept { return code_; }

 private:
  int status_;
  std::string code_;
};

ApiResponse reply(int status, const json& body) { return {status, body.dump()}; }

ApiResponse error_reply(int status, std::string_view code, const std::string& message) {
  return reply(status, json{{"error", {{"code", code}, {"message", message}}}});
}

int status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownModel:
    case ErrorCode::UnknownNode:
    case ErrorCode::UnknownPath:
    case ErrorCode::UnknownContext:
      return 404;
    case ErrorCode::NotTopOfStack:
      return 409;
    default:
      return 400;
  }
}

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> parts;
  std::stringstream in(path);
  for (std::string part; std::getline(in, part, '/');)
    if (!part.empty()) parts.push_back(part);
  return parts;
}

json parse_body(const std::string& body) {
  if (body.empty()) return json::object();
  json parsed = json::parse(body, nullptr, false);
  if (parsed.is_discarded() || !parsed.is_object())
    throw HttpError(400, "BadRequest", "request body must be a JSON object");
  return parsed;
}

std::string required(const json& body, const char* key) {
  if (!body.contains(key) || !body[key].is_string())
    throw HttpError(400, "BadRequest", std::string("missing string field '") + key + "'");
  return body[key].get<std::string>();
}

json ref_json(const Workspace& ws, NodeRef ref) {
  json out{{"model", ws.model(ref.model).alias()}, {"id", ref.node.value}};
  if (const AsgNode* n = ws.find(ref)) {
    out["kind"] = std::string(to_string(n->kind));
    if (!n->name.empty()) out["name"] = n->name;
  }
  return out;
}

json refs_json(const Workspace& ws, const std::vector<NodeRef>& refs) {
  json out = json::array();
  for (NodeRef r : refs) {
    if (ws.find(r))
      out.push_back(ref_json(ws, r));
    else
      out.push_back(json{{"model", ws.model(r.model).alias()}, {"id", r.node.value}});
  }
  return out;
}

json mapping_json(const Workspace& ws, const Mapping& m) {
  return json{{"id", m.id.value},
              {"source", qualified_path(ws, m.source)},
              {"target", qualified_path(ws, m.target)},
              {"scope", describe(ws, m.scope)},
              {"origin", std::string(to_string(m.origin))}};
}

json result_json(const Workspace& ws, const MappingRegistry& registry,
                 const DirectiveResult& r) {
  json mappings = json::array();
  for (MappingId id : r.mappings)
    if (const Mapping* m = registry.find(id)) mappings.push_back(mapping_json(ws, *m));
  json out{{"transaction", r.transaction},
           {"created", refs_json(ws, r.created)},
           {"mappings", mappings},
           {"stubs_created", refs_json(ws, r.stubs_created)},
           {"adapted", refs_json(ws, r.adapted)},
           {"stubs_removed", r.stubs_removed.size()},
           {"unresolved", refs_json(ws, r.unresolved)},
           {"log", r.log},
           {"prompts", r.prompts}};
  if (r.produced) out["produced"] = ref_json(ws, *r.produced);
  return out;
}

/// Answers from the replay list, then suspends the directive.
class ReplayChooser final : public Chooser {
 public:
  explicit ReplayChooser(std::vector<std::size_t> answers) : answers_(std::move(answers)) {}
  std::size_t choose(const ChoicePrompt& prompt) override {
    if (next_ < answers_.size()) return answers_[next_++];
    throw ChoicePending(prompt);
  }

 private:
  std::vector<std::size_t> answers_;
  std::size_t next_ = 0;
};

json prompt_json(const ChoicePrompt& prompt) {
  return json{{"kind", prompt.kind == ChoicePrompt::Kind::Rule ? "rule" : "argument"},
              {"subject", prompt.subject},
              {"options", prompt.options}};
}

}  // namespace

HttpService::HttpService(Session& session, std::string export_dir)
    : session_(session), export_dir_(std::move(export_dir)) {}

HttpService::~HttpService() = default;

ApiResponse HttpService::handle(const ApiRequest& request) {
  std::lock_guard lock(mutex_);
  try {
    return dispatch(request);
  } catch (const HttpError& e) {
    return error_reply(e.status(), e.code(), e.what());
  } catch (const MigrationError& e) {
    return error_reply(status_for(e.code()), to_string(e.code()), e.what());
  } catch (const std::exception& e) {
    return error_reply(500, "Internal", e.what());
  }
}

ApiResponse HttpService::run_directive(const std::string& kind, const std::string& body,
                                       std::vector<std::size_t> answers) {
  json req = parse_body(body);
  Engine& engine = session_.engine();
  const Workspace& ws = session_.workspace();
  LookupMode mode = LookupMode::Automatic;
  if (req.contains("mode")) {
    auto parsed = lookup_mode_from_string(req["mode"].get<std::string>());
    if (!parsed) throw HttpError(400, "BadRequest", "unknown mode");
    mode = *parsed;
  }
  NodeRef source = session_.resolve(required(req, "source"));
  NodeRef target = session_.resolve(required(req, "target"));
  std::optional<ContextId> scope;
  if (kind == "map" && req.contains("scope"))
    scope = session_.resolve_context(required(req, "scope"));

  ReplayChooser chooser(answers);
  Chooser* previous = engine.chooser();
  engine.set_chooser(&chooser);
  try {
    DirectiveResult result = kind == "produce" ? engine.produce(source, target, mode)
                                               : engine.map(source, target, scope, mode);
    engine.set_chooser(previous);
    ++generation_;
    pending_.clear();
    return reply(200, json{{"status", "applied"},
                           {"result", result_json(ws, engine.mappings(), result)}});
  } catch (const ChoicePending& pending) {
    engine.set_chooser(previous);
    std::string token = "c" + std::to_string(next_token_++);
    pending_[token] = Pending{kind, body, std::move(answers), generation_};
    return reply(202, json{{"status", "pending"},
                           {"token", token},
                           {"prompt", prompt_json(pending.prompt())}});
  } catch (...) {
    engine.set_chooser(previous);
    throw;
  }
}

ApiResponse HttpService::dispatch(const ApiRequest& request) {
  const auto parts = split_path(request.path);
  Workspace& ws = session_.workspace();
  Engine& engine = session_.engine();
  if (parts.size() < 2 || parts[0] != "api")
    throw HttpError(404, "NotFound", "no route " + request.path);
  const std::string& head = parts[1];
  const bool get = request.method == "GET";
  const bool post = request.method == "POST";
  auto query = [&](const std::string& key) {
    auto it = request.query.find(key);
    if (it == request.query.end())
      throw HttpError(400, "BadRequest", "missing query parameter '" + key + "'");
    return it->second;
  };

  if (get && head == "models" && parts.size() == 2) {
    json out = json::array();
    for (ModelId id : ws.model_ids()) {
      const Model& m = ws.model(id);
      out.push_back({{"id", id.value},
                     {"alias", m.alias()},
                     {"dialect", std::string(to_string(m.dialect()))},
                     {"role", session_.role(id) == ModelRole::Source ? "source" : "target"},
                     {"nodes", m.size()},
                     {"stubs", stubs(m).size()},
                     {"violations", validate(ws, id).size()}});
    }
    return reply(200, out);
  }

  if (get && head == "models" && parts.size() == 4 && parts[3] == "tree") {
    const Model& m = ws.model(session_.model_id(parts[2]));
    std::map<NodeId, std::vector<std::string>> violations;
    for (const auto& v : validate(ws, m.id()))
      violations[v.node].push_back(std::string(to_string(v.reason)));
    std::function<json(NodeId, std::size_t&)> build = [&](NodeId id, std::size_t& unresolved) {
      const AsgNode& n = m.node(id);
      json node{{"id", id.value}, {"kind", std::string(to_string(n.kind))}, {"name", n.name}};
      if (!n.payload.text.empty()) node["text"] = n.payload.text;
      if (n.payload.is_static) node["static"] = true;
      if (n.payload.visibility != Visibility::Default)
        node["visibility"] = std::string(to_string(n.payload.visibility));
      bool stub_ref = false;
      if (is_reference(n.kind)) {
        if (n.referee) {
          const AsgNode& decl = m.node(*n.referee);
          stub_ref = decl.kind == NodeKind::StubDeclaration;
          node["referee"] = n.referee->value;
          node["referee_path"] = stub_ref && decl.payload.foreign
                                     ? "stub>" + qualified_path(ws, *decl.payload.foreign)
                                     : qualified_path(ws, {m.id(), *n.referee});
        } else {
          node["referee"] = nullptr;
        }
      }
      std::size_t below = (is_reference(n.kind) && (!n.referee || stub_ref)) ? 1 : 0;
      json children = json::array();
      for (NodeId child : n.children) children.push_back(build(child, below));
      node["children"] = std::move(children);
      json badges{{"stub_reference", stub_ref}, {"unresolved", below}};
      if (auto it = violations.find(id); it != violations.end()) badges["violations"] = it->second;
      node["badges"] = std::move(badges);
      unresolved += below;
      return node;
    };
    std::size_t total = 0;
    json library = json::array();
    for (NodeId id : m.library()) {
      const AsgNode& n = m.node(id);
      json entry{{"id", id.value}, {"kind", std::string(to_string(n.kind))}, {"name", n.name}};
      if (n.kind == NodeKind::StubDeclaration && n.payload.foreign) {
        entry["foreign"] = qualified_path(ws, *n.payload.foreign);
        entry["shape"] = std::string(to_string(n.payload.shape));
        entry["incoming"] = incoming_references(m, id).size();
      }
      library.push_back(std::move(entry));
    }
    json root = build(m.root(), total);
    return reply(200, json{{"alias", m.alias()},
                           {"dialect", std::string(to_string(m.dialect()))},
                           {"root", std::move(root)},
                           {"library", std::move(library)}});
  }

  if (get && head == "models" && parts.size() == 6 && parts[3] == "nodes" &&
      parts[5] == "source") {
    ModelId id = session_.model_id(parts[2]);
    std::uint32_t node = 0;
    try {
      node = static_cast<std::uint32_t>(std::stoul(parts[4]));
    } catch (const std::exception&) {
      throw HttpError(400, "BadRequest", "node id must be a number");
    }
    NodeRef ref{id, NodeId{node}};
    if (!ws.find(ref)) throw MigrationError(ErrorCode::UnknownNode, "no node " + parts[4]);
    return reply(200, json{{"id", node}, {"text", print_node(ws, ref)}});
  }

  if (get && head == "rules" && parts.size() == 2) {
    NodeRef source = session_.resolve(query("source"));
    NodeRef target = session_.resolve(query("target"));
    json productive = json::array();
    for (const Installation* inst : engine.rules().productive_candidates(ws, source, target))
      productive.push_back({{"installation", inst->id.value},
                            {"rule", inst->rule->name()},
                            {"context", describe(ws, inst->context)},
                            {"summary", inst->rule->summary()}});
    json adaptive = json::array();
    for (const ContextId& ctx : context_chain(ws, target))
      for (const Installation* inst : engine.rules().installed_at(ctx))
        if (inst->rule->family() == RuleFamily::Adaptive)
          adaptive.push_back({{"installation", inst->id.value},
                              {"rule", inst->rule->name()},
                              {"context", describe(ws, inst->context)},
                              {"summary", inst->rule->summary()}});
    return reply(200, json{{"productive", productive}, {"adaptive", adaptive}});
  }

  if (get && head == "context" && parts.size() == 2) {
    ContextId ctx = session_.resolve_context(query("path"));
    json mappings = json::array();
    for (const Mapping& m : engine.mappings().all()) {
      bool visible = ctx.is_global() || m.scope == ctx;
      if (!visible && !ctx.is_global()) {
        auto chain = context_chain(ws, ctx.ref());
        visible = std::find(chain.begin(), chain.end(), m.scope) != chain.end();
      }
      if (visible) mappings.push_back(mapping_json(ws, m));
    }
    json unresolved = json::array();
    for (const auto& row : engine.unresolved_report(ctx)) {
      json entry = ref_json(ws, row.reference);
      entry["foreign"] = row.foreign_path;
      if (row.stub) entry["stub"] = row.stub->node.value;
      unresolved.push_back(std::move(entry));
    }
    return reply(200, json{{"context", describe(ws, ctx)},
                           {"mappings", mappings},
                           {"unresolved", unresolved}});
  }

  if (get && head == "history" && parts.size() == 2) {
    json out = json::array();
    for (const auto& t : engine.history())
      out.push_back({{"transaction", t.id}, {"description", t.description}});
    return reply(200, out);
  }

  if (get && head == "log" && parts.size() == 2) {
    std::size_t since = 0;
    if (auto it = request.query.find("since"); it != request.query.end()) {
      try {
        since = std::stoul(it->second);
      } catch (const std::exception&) {
        throw HttpError(400, "BadRequest", "since must be a number");
      }
    }
    const auto& log = engine.log();
    json lines = json::array();
    for (std::size_t i = since; i < log.size(); ++i) lines.push_back(log[i]);
    return reply(200, json{{"lines", lines}, {"next", log.size()}});
  }

  if (post && (head == "produce" || head == "map") && parts.size() == 2)
    return run_directive(head, request.body, {});

  if (post && head == "choices" && parts.size() == 3) {
    auto it = pending_.find(parts[2]);
    if (it == pending_.end() || it->second.generation != generation_)
      throw HttpError(409, "StaleToken", "choice token " + parts[2] + " is not pending");
    Pending pending = std::move(it->second);
    pending_.erase(it);
    json answer = parse_body(request.body);
    if (answer.value("cancel", false)) {
      engine.append_log("abandoned " + pending.kind);
      return reply(200, json{{"status", "abandoned"}});
    }
    if (!answer.contains("answer") || !answer["answer"].is_number_unsigned())
      throw HttpError(400, "BadRequest", "missing non-negative 'answer'");
    pending.answers.push_back(answer["answer"].get<std::size_t>());
    return run_directive(pending.kind, pending.body, std::move(pending.answers));
  }

  if (post && head == "rollback" && parts.size() == 2) {
    json req = parse_body(request.body);
    std::uint64_t id = 0;
    if (req.contains("transaction")) {
      id = req["transaction"].get<std::uint64_t>();
      engine.rollback(id);
    } else {
      id = engine.rollback_last();
    }
    ++generation_;
    pending_.clear();
    return reply(200, json{{"status", "rolled_back"}, {"transaction", id}});
  }

  if (post && head == "export" && parts.size() == 2) {
    json req = parse_body(request.body);
    ModelId id = session_.model_id(required(req, "alias"));
    std::string dir = req.contains("dir") ? required(req, "dir") : export_dir_;
    auto path = engine.export_model(id, dir);
    return reply(200, json{{"path", path.string()}, {"text", print_model(ws, id)}});
  }

  throw HttpError(404, "NotFound", "no route " + request.method + " " + request.path);
}

bool HttpService::serve(const std::string& host, int port,
                        const std::function<void(int)>& on_ready) {
  server_ = std::make_unique<httplib::Server>();
  auto bridge = [this](const httplib::Request& req, httplib::Response& res) {
    ApiRequest api{req.method, req.path, {}, req.body};
    for (const auto& [key, value] : req.params) api.query[key] = value;
    ApiResponse out = handle(api);
    res.status = out.status;
    res.set_content(out.body, "application/json");
  };
  server_->Get(R"(/api/.*)", bridge);
  server_->Post(R"(/api/.*)", bridge);
  int bound = port == 0 ? server_->bind_to_any_port(host) : port;
  if (port != 0 && !server_->bind_to_port(host, port)) return false;
  if (bound < 0) return false;
  if (on_ready) on_ready(bound);
  return server_->listen_after_bind();
}

void HttpService::stop() {
  if (server_) server_->stop();
}

}  // namespace asgmig
