#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "dcx/complexity.hpp"
#include "dcx/corpus.hpp"
#include "dcx/lexicon.hpp"
#include "dcx/rng.hpp"

namespace fix {

inline std::filesystem::path fixture_dir() { return DCX_FIXTURE_DIR; }
inline std::filesystem::path wordlist_dir() { return DCX_WORDLIST_DIR; }

/// Fresh scratch directory under the system temp root, wiped on reuse.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("dcx_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

inline dcx::Utterance utt(std::string text, dcx::Role role = dcx::Role::customer,
                          int index = 0,
                          std::optional<std::string> act = std::nullopt) {
  dcx::Utterance u;
  u.speaker_id = role == dcx::Role::agent ? "a1" : "c1";
  u.role = role;
  u.text = std::move(text);
  u.dialog_act = std::move(act);
  u.index = index;
  return u;
}

/// Dialog from (role, text) lines; indexes assigned in order, turns segmented.
inline dcx::Dialog dialog(std::string id,
                          std::vector<std::pair<dcx::Role, std::string>> lines,
                          dcx::RoleMode mode = dcx::RoleMode::two_role,
                          std::string domain = "test") {
  std::vector<dcx::Utterance> utts;
  int i = 0;
  for (auto& [role, text] : lines) utts.push_back(utt(text, role, i++));
  dcx::Dialog d;
  d.id = std::move(id);
  d.domain = std::move(domain);
  d.turns = dcx::segment_turns(std::move(utts), mode);
  return d;
}

inline dcx::Corpus corpus_of(std::vector<dcx::Dialog> dialogs,
                             dcx::RoleMode mode = dcx::RoleMode::two_role,
                             std::string domain = "test") {
  dcx::Corpus c;
  c.domain = std::move(domain);
  c.role_mode = mode;
  c.dialogs = std::move(dialogs);
  return c;
}

/// Small hand-built lexicon with one unambiguous token per class plus a few
/// spares. "x" is domain, "y" common, "z" stop, "q" noise.
inline dcx::Lexicon micro_lexicon() {
  dcx::Lexicon lex;
  lex.domain = "test";
  lex.stop_words = {"z", "the", "a", "to", "it", "is"};
  lex.common_words = {"y", "need", "help", "show", "me"};
  lex.domain_terms = {"x", "sudo", "adduser", "user", "group", "coke"};
  return lex;
}

struct TokenPools {
  std::vector<std::string> domain{"x", "sudo", "adduser", "user", "group", "coke"};
  std::vector<std::string> common{"y", "need", "help", "show", "me"};
  std::vector<std::string> stop{"z", "the", "a", "to", "it", "is"};
  std::vector<std::string> noise{"q", "zzkx", "qqvm", "xzzop"};
};

inline std::string random_text(dcx::Rng& rng, int n_tokens,
                               const TokenPools& pools = {}) {
  std::string out;
  for (int i = 0; i < n_tokens; ++i) {
    const std::vector<std::string>* pool = nullptr;
    switch (rng.next_below(4)) {
      case 0: pool = &pools.domain; break;
      case 1: pool = &pools.common; break;
      case 2: pool = &pools.stop; break;
      default: pool = &pools.noise; break;
    }
    if (!out.empty()) out += ' ';
    out += (*pool)[rng.next_below(pool->size())];
  }
  return out;
}

/// Random corpus over the micro-lexicon vocabulary. Utterance counts are
/// uniform in [min_utts, max_utts], token counts in [1, 12].
inline dcx::Corpus random_corpus(std::uint64_t seed, int n_dialogs, int min_utts,
                                 int max_utts,
                                 dcx::RoleMode mode = dcx::RoleMode::two_role) {
  dcx::Rng rng(seed);
  TokenPools pools;
  dcx::Corpus c;
  c.domain = "synthetic";
  c.role_mode = mode;
  for (int d = 0; d < n_dialogs; ++d) {
    const int n_utts =
        min_utts + static_cast<int>(rng.next_below(
                       static_cast<std::uint64_t>(max_utts - min_utts + 1)));
    std::vector<dcx::Utterance> utts;
    for (int i = 0; i < n_utts; ++i) {
      dcx::Role role = dcx::Role::portal_user;
      if (mode == dcx::RoleMode::two_role) {
        role = rng.next_below(2) == 0 ? dcx::Role::customer : dcx::Role::agent;
      }
      const int n_tokens = 1 + static_cast<int>(rng.next_below(12));
      utts.push_back(utt(random_text(rng, n_tokens), role, i));
    }
    dcx::Dialog dlg;
    dlg.id = "d" + std::to_string(d);
    dlg.domain = c.domain;
    dlg.turns = dcx::segment_turns(std::move(utts), mode);
    c.dialogs.push_back(std::move(dlg));
  }
  return c;
}

/// Utterance text whose complexity under micro_lexicon() is target to within
/// 1/(2*n_tokens): the right mix of domain ("x", score 1) and stop ("z", 0).
inline std::string text_with_complexity(double target, int n_tokens) {
  if (target < 0.0) target = 0.0;
  if (target > 1.0) target = 1.0;
  const int k = static_cast<int>(std::lround(target * n_tokens));
  std::string out;
  for (int i = 0; i < n_tokens; ++i) {
    if (!out.empty()) out += ' ';
    out += i < k ? "x" : "z";
  }
  return out;
}

/// Single-role corpus with dialogs_per_template dialogs per basket template.
/// Each dialog has turns_per_basket * |template| turns; turn complexities
/// track the template value for the turn's basket plus gaussian noise.
inline dcx::Corpus planted_corpus(std::uint64_t seed,
                                  const std::vector<std::vector<double>>& templates,
                                  int dialogs_per_template, int turns_per_basket,
                                  double noise_sd = 0.02, int tokens_per_turn = 200) {
  dcx::Rng rng(seed);
  dcx::Corpus c;
  c.domain = "planted";
  c.role_mode = dcx::RoleMode::single_role;
  int id = 0;
  for (std::size_t t = 0; t < templates.size(); ++t) {
    for (int d = 0; d < dialogs_per_template; ++d) {
      std::vector<dcx::Utterance> utts;
      int i = 0;
      for (double level : templates[t]) {
        for (int rep = 0; rep < turns_per_basket; ++rep) {
          const double value = level + noise_sd * rng.next_gaussian();
          utts.push_back(utt(text_with_complexity(value, tokens_per_turn),
                             dcx::Role::portal_user, i++));
        }
      }
      dcx::Dialog dlg;
      dlg.id = "p" + std::to_string(id++);
      dlg.domain = c.domain;
      dlg.turns = dcx::segment_turns(std::move(utts), dcx::RoleMode::single_role);
      c.dialogs.push_back(std::move(dlg));
    }
  }
  return c;
}

/// The six trajectory shapes used by the clustering tests.
inline std::vector<std::vector<double>> planted_templates() {
  return {{0.15, 0.15, 0.15, 0.15, 0.15}, {0.75, 0.75, 0.75, 0.75, 0.75},
          {0.10, 0.30, 0.50, 0.70, 0.90}, {0.90, 0.70, 0.50, 0.30, 0.10},
          {0.20, 0.50, 0.80, 0.50, 0.20}, {0.80, 0.50, 0.20, 0.50, 0.80}};
}

inline std::string corpus_to_jsonl(const dcx::Corpus& c) {
  std::ostringstream out;
  dcx::serialize_corpus(c, out);
  return out.str();
}

}  // namespace fix
