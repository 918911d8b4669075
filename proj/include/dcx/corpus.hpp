#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dcx {

enum class Role { customer, agent, portal_user };
enum class RoleMode { two_role, single_role };

std::string_view to_string(Role role);
std::string_view to_string(RoleMode mode);
std::optional<Role> role_from_string(std::string_view s);
std::optional<RoleMode> role_mode_from_string(std::string_view s);

/// One contiguous message by one speaker; the atomic scoring unit.
struct Utterance {
  std::string speaker_id;
  Role role = Role::customer;
  std::string text;
  std::optional<std::string> dialog_act;
  int index = 0;  // 0-based position within the dialog
};

/// Group of utterances in which each role speaks at least once, except for a
/// trailing partial turn (two-role mode); one utterance per turn in
/// single-role mode. Never empty.
struct Turn {
  std::vector<Utterance> utterances;

  std::size_t size() const { return utterances.size(); }
};

struct Dialog {
  std::string id;
  std::string domain;
  std::vector<Turn> turns;  // never empty

  int turn_count() const { return static_cast<int>(turns.size()); }
  std::size_t utterance_count() const;
};

struct Corpus {
  std::string domain;
  RoleMode role_mode = RoleMode::two_role;
  std::vector<Dialog> dialogs;

  /// Maximum number of turns over all dialogs. Requires a non-empty corpus.
  int max_turns() const;
};

struct CorpusStats {
  std::size_t n_dialogs = 0;
  double mean_turns_per_dialog = 0.0;
  double mean_utterances_per_turn = 0.0;
  double mean_words_per_utterance = 0.0;
};

struct ParseOptions {
  RoleMode role_mode = RoleMode::two_role;
  /// true: abort on the first bad record; false: skip bad records and count them.
  bool fail_fast = true;
};

struct ParseWarnings {
  std::size_t malformed_lines = 0;   // records skipped (skip mode only)
  std::size_t empty_dialogs = 0;     // dropped: zero utterances
  std::size_t empty_utterances = 0;  // kept but flagged: empty source text
  std::vector<std::string> messages;
};

struct ParseResult {
  Corpus corpus;
  ParseWarnings warnings;
};

/// Parses a JSON-Lines corpus, one dialog object per line:
///   {"id": str, "domain": str, "utterances":
///     [{"speaker": str, "role": "customer"|"agent"|"portal_user",
///       "text": str, "dialog_act": str?}]}
/// Turn boundaries are never stored; they are derived by segment_turns.
ParseResult parse_corpus(std::istream& in, const ParseOptions& opts);
ParseResult parse_corpus_file(const std::filesystem::path& path,
                              const ParseOptions& opts);

/// Writes the corpus back to JSON-Lines. parse -> serialize -> parse is the
/// identity on the data model.
void serialize_corpus(const Corpus& corpus, std::ostream& out);

/// Splits an index-ordered utterance stream into turns. Single-role mode makes
/// every utterance its own turn. Two-role mode keeps appending to the open
/// turn until both roles have spoken; the next utterance then starts a new
/// turn, so consecutive same-role utterances stay together and a trailing
/// one-role turn is retained.
std::vector<Turn> segment_turns(std::vector<Utterance> utterances,
                                RoleMode mode);

/// Dialog/turn/utterance/word means over the corpus. Word counts use the
/// lexicon tokenizer.
CorpusStats descriptive_stats(const Corpus& corpus);

}  // namespace dcx
