#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "dcx/corpus.hpp"

namespace dcx {

using WordSet = std::unordered_set<std::string>;

/// Word class of a token, in classification precedence order.
enum class WordClass { domain_specific, common_english, stop_word, noise };

std::string_view to_string(WordClass c);

/// The three word sets for one service domain. Sets may overlap in storage;
/// classification precedence (domain > common > stop) is applied at lookup.
struct Lexicon {
  std::string domain;
  double delta = 50.0;  // percentage cutoff used when domain_terms were extracted
  WordSet stop_words;
  WordSet common_words;
  WordSet domain_terms;
};

enum class ExtractionMethod { tf, tfidf };

std::string_view to_string(ExtractionMethod m);
ExtractionMethod extraction_method_from_string(std::string_view s);

/// Candidate domain terms ordered by score descending, ties broken by token
/// ascending. Scores are never negative.
struct TermRanking {
  std::vector<std::pair<std::string, double>> entries;
};

/// Lowercases, splits on whitespace and strips leading/trailing punctuation
/// from each token. Tokens that become empty are dropped; intra-token
/// punctuation (apostrophes, hyphens) is kept.
std::vector<std::string> tokenize(std::string_view text);

/// Number of tokens tokenize() would return, without materializing them.
std::size_t token_count(std::string_view text);

/// Lowercase + trim. Applied to every wordlist entry and lexicon token.
std::string normalize_token(std::string_view raw);

WordClass classify_word(std::string_view token, const Lexicon& lexicon);

/// Ranks the corpus vocabulary (stop words removed first) by the chosen
/// method. tf: corpus-wide token frequency. tfidf: frequency times
/// ln(n_dialogs / (1 + dialog frequency)), one dialog = one document,
/// negative scores clamped to zero.
TermRanking rank_terms(const Corpus& corpus, ExtractionMethod method,
                       const WordSet& stop_words);

/// Top delta percent (by count of distinct ranked terms, ceil) of the ranking.
std::vector<std::string> extract_domain_terms(const Corpus& corpus,
                                              ExtractionMethod method,
                                              double delta,
                                              const WordSet& stop_words);

/// Fraction of domain terms that are also common-English words. Lower means a
/// more specialized domain.
double domain_specialization(const Lexicon& lexicon);

/// Loads a one-token-per-line wordlist. '#' starts a comment; entries are
/// normalized and duplicates collapse.
WordSet load_wordlist(const std::filesystem::path& path);

std::pair<WordSet, WordSet> load_wordlists(const std::filesystem::path& stop_path,
                                           const std::filesystem::path& common_path);

}  // namespace dcx
