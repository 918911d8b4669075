#include "dcx/lexicon.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>

#include "dcx/errors.hpp"

namespace dcx {

std::string_view to_string(WordClass c) {
  switch (c) {
    case WordClass::domain_specific: return "domain_specific";
    case WordClass::common_english: return "common_english";
    case WordClass::stop_word: return "stop_word";
    case WordClass::noise: return "noise";
  }
  return "noise";
}

std::string_view to_string(ExtractionMethod m) {
  return m == ExtractionMethod::tf ? "tf" : "tfidf";
}

ExtractionMethod extraction_method_from_string(std::string_view s) {
  if (s == "tf") return ExtractionMethod::tf;
  if (s == "tfidf") return ExtractionMethod::tfidf;
  throw UsageError("unknown extraction method \"" + std::string(s) +
                   "\" (expected tf or tfidf)");
}

namespace {

bool is_space(unsigned char c) { return std::isspace(c) != 0; }
bool is_punct(unsigned char c) { return std::ispunct(c) != 0; }

char to_lower(unsigned char c) {
  return static_cast<char>(std::tolower(c));
}

/// Calls fn(token) for every token of text; tokens are already lowercased and
/// stripped of leading/trailing punctuation.
template <typename Fn>
void for_each_token(std::string_view text, Fn&& fn) {
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    while (i < n && is_space(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t j = i;
    while (j < n && !is_space(static_cast<unsigned char>(text[j]))) ++j;
    std::size_t lo = i;
    std::size_t hi = j;
    while (lo < hi && is_punct(static_cast<unsigned char>(text[lo]))) ++lo;
    while (hi > lo && is_punct(static_cast<unsigned char>(text[hi - 1]))) --hi;
    if (lo < hi) {
      std::string token;
      token.reserve(hi - lo);
      for (std::size_t k = lo; k < hi; ++k) {
        token.push_back(to_lower(static_cast<unsigned char>(text[k])));
      }
      fn(std::move(token));
    }
    i = j;
  }
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  for_each_token(text, [&](std::string t) { tokens.push_back(std::move(t)); });
  return tokens;
}

std::size_t token_count(std::string_view text) {
  std::size_t n = 0;
  for_each_token(text, [&](std::string) { ++n; });
  return n;
}

std::string normalize_token(std::string_view raw) {
  std::size_t lo = 0;
  std::size_t hi = raw.size();
  while (lo < hi && is_space(static_cast<unsigned char>(raw[lo]))) ++lo;
  while (hi > lo && is_space(static_cast<unsigned char>(raw[hi - 1]))) --hi;
  std::string out;
  out.reserve(hi - lo);
  for (std::size_t k = lo; k < hi; ++k) {
    out.push_back(to_lower(static_cast<unsigned char>(raw[k])));
  }
  return out;
}

WordClass classify_word(std::string_view token, const Lexicon& lexicon) {
  const std::string key(token);
  if (lexicon.domain_terms.count(key)) return WordClass::domain_specific;
  if (lexicon.common_words.count(key)) return WordClass::common_english;
  if (lexicon.stop_words.count(key)) return WordClass::stop_word;
  return WordClass::noise;
}

TermRanking rank_terms(const Corpus& corpus, ExtractionMethod method,
                       const WordSet& stop_words) {
  if (corpus.dialogs.empty()) {
    throw EmptyCorpusError("rank_terms: empty corpus");
  }

  // std::map keeps tokens in lexicographic order, which combined with a
  // stable sort by score yields the documented deterministic tie order.
  std::map<std::string, double> tf;
  std::map<std::string, std::size_t> df;

  for (const Dialog& d : corpus.dialogs) {
    WordSet seen_in_dialog;
    for (const Turn& t : d.turns) {
      for (const Utterance& u : t.utterances) {
        for_each_token(u.text, [&](std::string token) {
          if (stop_words.count(token)) return;
          tf[token] += 1.0;
          if (method == ExtractionMethod::tfidf) {
            seen_in_dialog.insert(std::move(token));
          }
        });
      }
    }
    for (const std::string& token : seen_in_dialog) df[token] += 1;
  }

  if (tf.empty()) {
    throw EmptyVocabularyError("rank_terms: no non-stop tokens in corpus");
  }

  TermRanking ranking;
  ranking.entries.reserve(tf.size());
  const double n_docs = static_cast<double>(corpus.dialogs.size());
  for (const auto& [token, freq] : tf) {
    double score = freq;
    if (method == ExtractionMethod::tfidf) {
      const double idf =
          std::log(n_docs / (1.0 + static_cast<double>(df[token])));
      score = std::max(0.0, freq * idf);
    }
    ranking.entries.emplace_back(token, score);
  }

  std::stable_sort(ranking.entries.begin(), ranking.entries.end(),
                   [](const auto& a, const auto& b) {
                     return a.second > b.second;
                   });
  return ranking;
}

std::vector<std::string> extract_domain_terms(const Corpus& corpus,
                                              ExtractionMethod method,
                                              double delta,
                                              const WordSet& stop_words) {
  if (!(delta > 0.0) || delta > 100.0) {
    throw UsageError("delta must lie in (0, 100]");
  }
  TermRanking ranking = rank_terms(corpus, method, stop_words);
  const std::size_t distinct = ranking.entries.size();
  const std::size_t keep = static_cast<std::size_t>(
      std::ceil(delta / 100.0 * static_cast<double>(distinct)));
  std::vector<std::string> terms;
  terms.reserve(keep);
  for (std::size_t i = 0; i < keep && i < distinct; ++i) {
    terms.push_back(ranking.entries[i].first);
  }
  return terms;
}

double domain_specialization(const Lexicon& lexicon) {
  if (lexicon.domain_terms.empty()) {
    throw DataError("domain_specialization: empty domain term set");
  }
  std::size_t overlap = 0;
  for (const std::string& term : lexicon.domain_terms) {
    if (lexicon.common_words.count(term)) ++overlap;
  }
  return static_cast<double>(overlap) /
         static_cast<double>(lexicon.domain_terms.size());
}

WordSet load_wordlist(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw UsageError("cannot open wordlist file: " + path.string());
  }
  WordSet words;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    std::string token = normalize_token(line);
    if (!token.empty()) words.insert(std::move(token));
  }
  return words;
}

std::pair<WordSet, WordSet> load_wordlists(
    const std::filesystem::path& stop_path,
    const std::filesystem::path& common_path) {
  return {load_wordlist(stop_path), load_wordlist(common_path)};
}

}  // namespace dcx
