#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "asgmig/engine.hpp"
#include "asgmig/parse.hpp"

namespace asgmig {

enum class ModelRole { Source, Target };

struct ModelSpec {
  Dialect dialect = Dialect::MiniProc;
  ModelRole role = ModelRole::Source;
  std::filesystem::path path;
  std::string alias;
  int line = 0;
};

struct InstallSpec {
  std::string rule;
  RuleParams params;
  std::string context;  // "global" or "alias:path"
  int line = 0;
};

/// Session description:
///   model <Dialect> <source|target> <path> as <alias>
///   install <Rule> [key=value ...] at <global|alias:path>
///   rules <file>        (more install lines, path relative to this file)
/// Blank lines and '#' comments are ignored.
struct Manifest {
  std::vector<ModelSpec> models;
  std::vector<InstallSpec> installs;
};

Manifest parse_manifest(std::string_view text, const std::filesystem::path& base_dir);
Manifest load_manifest(const std::filesystem::path& path);
std::string read_file(const std::filesystem::path& path);

/// Parse one install line body ("Rule k=v at ctx") into a spec.
InstallSpec parse_install(std::string_view text, int line);

/// Models, rules and engine of one migration session.
class Session {
 public:
  explicit Session(const Manifest& manifest);
  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  Workspace& workspace() noexcept { return *ws_; }
  const Workspace& workspace() const noexcept { return *ws_; }
  Engine& engine() noexcept { return *engine_; }
  const Engine& engine() const noexcept { return *engine_; }

  ModelRole role(ModelId model) const;
  const std::vector<UnboundName>& unbound(ModelId model) const;

  /// Add a model from text (manifests use this too).
  ModelId load_model(const std::string& alias, Dialect dialect, ModelRole role,
                     std::string_view text, const std::string& default_module = "Main");
  InstallationId install(const InstallSpec& spec);

  NodeRef resolve(std::string_view qualified) const;
  ContextId resolve_context(std::string_view text) const;
  ModelId model_id(std::string_view alias) const;

 private:
  std::unique_ptr<Workspace> ws_;
  std::unique_ptr<Engine> engine_;
  std::map<ModelId, ModelRole> roles_;
  std::map<ModelId, std::vector<UnboundName>> unbound_;
};

}  // namespace asgmig
