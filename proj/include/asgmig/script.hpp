#pragma once

#include <deque>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "asgmig/session.hpp"

namespace asgmig {

/// One line of a directive script:
///   produce <src> -> <target> [mode=auto|choice|debug] [choose=i,j] [arg=k]
///   map <src> -> <target> [scope=<ctx>] [mode=...] [choose=...] [arg=...]
///   install <Rule> [key=value ...] at <ctx>
///   rollback [<txn>]
///   export <alias> [dir=<path>]
///   report [<ctx>]
struct ScriptCommand {
  int line = 0;
  std::string verb;
  std::vector<std::string> args;
  std::map<std::string, std::string> options;
  std::string text;
};

std::vector<ScriptCommand> parse_script(std::string_view text);

/// Answers prompts from a fixed list; rule choices and argument choices are
/// consumed separately. Falls through to `next` (if any) when exhausted.
class ScriptedChooser final : public Chooser {
 public:
  ScriptedChooser(std::vector<std::size_t> rules, std::vector<std::size_t> arguments,
                  Chooser* next = nullptr)
      : rules_(rules.begin(), rules.end()),
        arguments_(arguments.begin(), arguments.end()),
        next_(next) {}
  std::size_t choose(const ChoicePrompt& prompt) override;
  std::size_t asked() const noexcept { return asked_; }

 private:
  std::deque<std::size_t> rules_;
  std::deque<std::size_t> arguments_;
  Chooser* next_;
  std::size_t asked_ = 0;
};

struct ScriptOptions {
  LookupMode default_mode = LookupMode::Automatic;
  std::filesystem::path export_dir = ".";
  bool stop_on_error = true;
  Chooser* interactive = nullptr;  // consulted when scripted answers run out
};

struct CommandOutcome {
  ScriptCommand command;
  bool ok = true;
  std::string error_code;
  std::string message;
  std::optional<DirectiveResult> result;
  std::optional<std::filesystem::path> exported;
};

struct ScriptReport {
  std::vector<CommandOutcome> outcomes;
  bool ok = true;
};

/// Execute a script against a session.
ScriptReport run_script(Session& session, const std::vector<ScriptCommand>& commands,
                        const ScriptOptions& options = {});

/// Human-readable report: per-command results, unresolved census and
/// validation summary of every target model.
std::string render_report(const Session& session, const ScriptReport& report);

}  // namespace asgmig
