// Command-line front end: replay a directive script or serve the HTTP API.
#include <unistd.h>

#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>

#include "asgmig/errors.hpp"
#include "asgmig/http_service.hpp"
#include "asgmig/script.hpp"
#include "asgmig/snapshot.hpp"

namespace {

/// Asks on stderr, reads an index from stdin.
class TerminalChooser final : public asgmig::Chooser {
 public:
  std::size_t choose(const asgmig::ChoicePrompt& prompt) override {
    std::cerr << (prompt.kind == asgmig::ChoicePrompt::Kind::Rule ? "choose a rule for "
                                                                   : "choose the receiver for ")
              << prompt.subject << "\n";
    for (std::size_t i = 0; i < prompt.options.size(); ++i)
      std::cerr << "  [" << i << "] " << prompt.options[i] << "\n";
    std::cerr << "> " << std::flush;
    std::size_t pick = 0;
    if (!(std::cin >> pick))
      throw asgmig::MigrationError(asgmig::ErrorCode::ChoiceAbandoned, "no answer on stdin");
    return pick;
  }
};

enum class Verbosity { Quiet, Info, Debug };

Verbosity verbosity_from_env() {
  const char* value = std::getenv("ASGMIG_LOG");
  if (!value) return Verbosity::Info;
  std::string v(value);
  if (v == "quiet" || v == "0") return Verbosity::Quiet;
  if (v == "debug" || v == "2") return Verbosity::Debug;
  return Verbosity::Info;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rule-based interactive migration engine"};
  std::string manifest_path;
  std::string script_path;
  int port = -1;
  std::string host = "127.0.0.1";
  std::string mode_name = "auto";
  std::string export_dir = ".";
  bool interactive = false;
  bool keep_going = false;
  app.add_option("--manifest", manifest_path, "Session manifest")->required();
  app.add_option("--script", script_path, "Directive script to replay");
  app.add_option("--serve", port, "Serve the HTTP API on this port (0 = any)");
  app.add_option("--host", host, "Address to bind when serving");
  app.add_option("--mode", mode_name, "Default lookup mode")
      ->check(CLI::IsMember({"auto", "choice", "debug"}));
  app.add_option("--export-dir", export_dir, "Directory for exported files");
  app.add_flag("--interactive", interactive, "Ask on the terminal when a script has no answer");
  app.add_flag("--keep-going", keep_going, "Continue after a failed command");
  CLI11_PARSE(app, argc, argv);

  const Verbosity verbosity = verbosity_from_env();
  try {
    asgmig::Session session(asgmig::load_manifest(manifest_path));
    if (verbosity != Verbosity::Quiet) {
      for (asgmig::ModelId id : session.workspace().model_ids())
        for (const auto& u : session.unbound(id))
          std::cerr << session.workspace().model(id).alias() << ":" << u.line << ":"
                    << u.column << ": unbound name '" << u.name << "'\n";
    }

    int status = 0;
    if (!script_path.empty()) {
      TerminalChooser terminal;
      asgmig::ScriptOptions options;
      options.default_mode = *asgmig::lookup_mode_from_string(mode_name);
      options.export_dir = export_dir;
      options.stop_on_error = !keep_going;
      if (interactive || isatty(STDIN_FILENO)) options.interactive = &terminal;
      auto commands = asgmig::parse_script(asgmig::read_file(script_path));
      auto report = asgmig::run_script(session, commands, options);
      if (verbosity != Verbosity::Quiet) std::cout << asgmig::render_report(session, report);
      if (verbosity == Verbosity::Debug)
        for (asgmig::ModelId id : session.workspace().model_ids())
          std::cout << "--- " << session.workspace().model(id).alias() << "\n"
                    << asgmig::snapshot(session.workspace(), id);
      if (!report.ok) status = 1;
      if (verbosity == Verbosity::Quiet && !report.ok) {
        const auto& last = report.outcomes.back();
        std::cerr << "line " << last.command.line << ": " << last.error_code << ": "
                  << last.message << "\n";
      }
    }

    if (port >= 0) {
      asgmig::HttpService service(session, export_dir);
      bool ok = service.serve(host, port, [&](int bound) {
        std::cerr << "listening on http://" << host << ":" << bound << "\n";
      });
      if (!ok) {
        std::cerr << "cannot listen on " << host << ":" << port << "\n";
        return 2;
      }
    }
    return status;
  } catch (const asgmig::MigrationError& e) {
    std::cerr << "error " << asgmig::to_string(e.code()) << ": " << e.what() << "\n";
    return 2;
  }
}
