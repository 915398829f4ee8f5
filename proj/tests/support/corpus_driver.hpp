#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "asgmig/model.hpp"

namespace asgmig::testing {

struct CorpusSnippet {
  std::string name;  // file stem
  std::string text;
  std::vector<std::string> extra;  // "'! " lines: script commands run after the produces
};

std::vector<CorpusSnippet> load_corpus(const std::filesystem::path& dir);

/// Names after "src:" on every map line of a fixture file.
std::set<std::string> mapped_sources(const std::filesystem::path& map_file);

/// Library names the snippet's references point to, by walking the parsed
/// source model.
std::set<std::string> library_uses(const CorpusSnippet& snippet);

struct CorpusRun {
  bool directives_ok = false;
  std::string failure;           // first failed command, if any
  std::size_t violations = 0;    // validate() on the target after the run
  bool exported = false;
  std::string exported_text;
  bool reparsed = false;
  std::size_t reparse_unbound = 0;
  std::string reparse_error;
};

/// Migrate one snippet into a fresh target skeleton: shared rules, the
/// dialect's map fixture, one produce per module into Corpus, then the
/// snippet's own extra commands. Exports into a string and reparses it.
CorpusRun run_snippet(const CorpusSnippet& snippet, Dialect target, bool autowrap,
                      const std::filesystem::path& fixtures_dir);

}  // namespace asgmig::testing
