#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "dcx/corpus.hpp"
#include "dcx/lexicon.hpp"

#include "json.hpp"

namespace dcx {

struct ComplexityConfig {
  double w1 = 0.5;  // weight of the content component
  double w2 = 0.5;  // weight of the structure component
  double noise_score = 0.0;
  double empty_utterance_score = 0.0;
  std::map<std::string, double> da_weights;  // dialog-act tag -> weight in [0,1]
  double da_default_weight = 1.0;            // missing tag or missing entry

  /// Throws UsageError unless w1 + w2 = 1 and every field is within range.
  void validate() const;
};

/// Parses a dialog-act weight table: {"tag": weight, ..., "_default": weight}.
void apply_da_weights_json(const nlohmann::json& j, ComplexityConfig& config);

/// Word score: domain 1, common 0.5, stop 0, noise configurable (default 0).
double word_complexity(WordClass word_class, const ComplexityConfig& config);

/// Mean word score over all tokens of the utterance, stop and noise words
/// included in the denominator. Empty token list scores
/// config.empty_utterance_score.
double utterance_complexity(const Utterance& u, const Lexicon& lexicon,
                            const ComplexityConfig& config);

/// Mean utterance score within the turn.
double turn_complexity(const Turn& t, const Lexicon& lexicon,
                       const ComplexityConfig& config);

/// Dialog-act weighted turn score: sum of c(U) * weight(tag) over |T|.
/// With all weights 1 this equals turn_complexity exactly.
double weighted_turn_complexity(const Turn& t, const Lexicon& lexicon,
                                const ComplexityConfig& config);

struct ScoredUtterance {
  std::string dialog_id;
  int index = 0;
  double score = 0.0;
};

struct ScoredTurn {
  std::string dialog_id;
  int index = 0;
  double score = 0.0;
};

struct ScoredDialog {
  std::string dialog_id;
  double content = 0.0;    // mean turn complexity
  double structure = 0.0;  // turn count relative to the dataset maximum
  double score = 0.0;      // w1 * content + w2 * structure
  bool structure_clamped = false;
};

/// Combines mean turn complexity with relative dialog length. A dialog longer
/// than max_turns clamps the structure component to 1 and sets the flag, so
/// new dialogs can be scored against a historical maximum.
ScoredDialog dialog_complexity(const Dialog& d, const Lexicon& lexicon,
                               const ComplexityConfig& config, int max_turns);

struct LevelSet {
  bool utterance = true;
  bool turn = true;
  bool dialog = true;
};

struct Histogram {
  static constexpr int kBins = 20;  // uniform on [0, 1]
  std::array<std::uint64_t, kBins> bins{};

  void add(double score);
};

struct ComplexityReport {
  std::string domain;
  RoleMode role_mode = RoleMode::two_role;
  int max_turns = 1;  // dataset maximum used for the structure component
  bool da_weighted = false;
  LevelSet levels;

  std::vector<ScoredUtterance> utterances;
  std::vector<ScoredTurn> turns;
  std::vector<ScoredDialog> dialogs;

  double utterance_mean = 0.0;
  double turn_mean = 0.0;
  double dialog_mean = 0.0;

  Histogram utterance_hist;
  Histogram turn_hist;
  Histogram dialog_hist;
};

/// Scores every selected level of the corpus. The dataset maximum is taken
/// from this corpus. Turn scores apply the dialog-act weights (a no-op with
/// the default table); the dialog content component always uses the plain
/// turn average. Deterministic for any thread count.
ComplexityReport score_corpus(const Corpus& corpus, const Lexicon& lexicon,
                              const ComplexityConfig& config,
                              const LevelSet& levels = {}, int threads = 1);

nlohmann::json report_to_json(const ComplexityReport& report);
ComplexityReport report_from_json(const nlohmann::json& j);

/// CSV dump: unit_id,level,score,content,structure (content/structure only on
/// dialog rows).
void report_to_csv(const ComplexityReport& report, std::ostream& out);

}  // namespace dcx
