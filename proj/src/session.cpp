#include "asgmig/session.hpp"

#include <fstream>
#include <sstream>

#include "asgmig/builtin_rules.hpp"
#include "asgmig/errors.hpp"
#include "asgmig/graph_ops.hpp"

namespace asgmig {

namespace {

std::vector<std::string> words(std::string_view line) {
  std::istringstream in{std::string(line)};
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

[[noreturn]] void manifest_error(int line, const std::string& message) {
  throw MigrationError(ErrorCode::ScriptError,
                       "manifest line " + std::to_string(line) + ": " + message);
}

void parse_into(Manifest& out, std::string_view text, const std::filesystem::path& base,
                int depth) {
  if (depth > 8) manifest_error(0, "rules files nested too deeply");
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw.substr(0, raw.find('#'));
    auto w = words(line);
    if (w.empty()) continue;
    if (w[0] == "model") {
      if (w.size() != 6 || w[4] != "as")
        manifest_error(line_no, "expected: model <Dialect> <source|target> <path> as <alias>");
      ModelSpec spec;
      auto dialect = dialect_from_string(w[1]);
      if (!dialect) manifest_error(line_no, "unknown dialect '" + w[1] + "'");
      spec.dialect = *dialect;
      if (w[2] == "source") spec.role = ModelRole::Source;
      else if (w[2] == "target") spec.role = ModelRole::Target;
      else manifest_error(line_no, "role must be source or target");
      spec.path = base / w[3];
      spec.alias = w[5];
      spec.line = line_no;
      out.models.push_back(std::move(spec));
    } else if (w[0] == "install") {
      out.installs.push_back(parse_install(line.substr(line.find("install") + 7), line_no));
    } else if (w[0] == "rules") {
      if (w.size() != 2) manifest_error(line_no, "expected: rules <file>");
      std::filesystem::path path = base / w[1];
      parse_into(out, read_file(path), path.parent_path(), depth + 1);
    } else {
      manifest_error(line_no, "unknown entry '" + w[0] + "'");
    }
  }
}

}  // namespace

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw MigrationError(ErrorCode::ScriptError, "cannot read " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

InstallSpec parse_install(std::string_view text, int line) {
  auto w = words(text);
  InstallSpec spec;
  spec.line = line;
  if (w.size() < 3 || w[w.size() - 2] != "at")
    manifest_error(line, "expected: install <Rule> [key=value ...] at <context>");
  spec.rule = w[0];
  spec.context = w.back();
  for (std::size_t i = 1; i + 2 < w.size(); ++i) {
    auto eq = w[i].find('=');
    if (eq == std::string::npos || eq == 0)
      manifest_error(line, "rule parameter '" + w[i] + "' is not key=value");
    spec.params[w[i].substr(0, eq)] = w[i].substr(eq + 1);
  }
  return spec;
}

Manifest parse_manifest(std::string_view text, const std::filesystem::path& base_dir) {
  Manifest out;
  parse_into(out, text, base_dir, 0);
  return out;
}

Manifest load_manifest(const std::filesystem::path& path) {
  return parse_manifest(read_file(path), path.parent_path());
}

Session::Session(const Manifest& manifest)
    : ws_(std::make_unique<Workspace>()), engine_(std::make_unique<Engine>(*ws_)) {
  for (const ModelSpec& spec : manifest.models) {
    try {
      load_model(spec.alias, spec.dialect, spec.role, read_file(spec.path),
                 spec.path.stem().string());
    } catch (const ParseError& e) {
      throw ParseError(spec.path.filename().string() + ": " + e.what(), e.line(),
                       e.column());
    }
  }
  for (const InstallSpec& spec : manifest.installs) {
    try {
      install(spec);
    } catch (const MigrationError& e) {
      throw MigrationError(e.code(),
                           "manifest line " + std::to_string(spec.line) + ": " + e.what());
    }
  }
}

ModelId Session::load_model(const std::string& alias, Dialect dialect, ModelRole role,
                            std::string_view text, const std::string& default_module) {
  if (ws_->find_model(alias))
    throw MigrationError(ErrorCode::PreconditionFailed,
                         "model alias '" + alias + "' is already used");
  ParseOutcome outcome = parse_model(*ws_, alias, dialect, text, default_module);
  roles_[outcome.model] = role;
  unbound_[outcome.model] = std::move(outcome.unbound);
  return outcome.model;
}

InstallationId Session::install(const InstallSpec& spec) {
  return engine_->rules().install(*ws_, make_rule(spec.rule, spec.params),
                                  resolve_context(spec.context));
}

ModelRole Session::role(ModelId model) const {
  auto it = roles_.find(model);
  if (it == roles_.end())
    throw MigrationError(ErrorCode::UnknownModel, "unknown model id");
  return it->second;
}

const std::vector<UnboundName>& Session::unbound(ModelId model) const {
  auto it = unbound_.find(model);
  if (it == unbound_.end())
    throw MigrationError(ErrorCode::UnknownModel, "unknown model id");
  return it->second;
}

NodeRef Session::resolve(std::string_view qualified) const {
  return resolve_path(*ws_, qualified);
}

ContextId Session::resolve_context(std::string_view text) const {
  if (text == "global") return ContextId::global();
  NodeRef ref = resolve(text);
  if (!is_declaration(ws_->node(ref).kind))
    throw MigrationError(ErrorCode::UnknownContext,
                         "'" + std::string(text) + "' is not a declaration");
  return {ref.model, ref.node};
}

ModelId Session::model_id(std::string_view alias) const {
  const Model* model = ws_->find_model(alias);
  if (!model)
    throw MigrationError(ErrorCode::UnknownModel,
                         "no model named '" + std::string(alias) + "'");
  return model->id();
}

}  // namespace asgmig
