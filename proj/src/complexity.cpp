#include "dcx/complexity.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <thread>

#include "dcx/detail/format.hpp"
#include "dcx/errors.hpp"

namespace dcx {

using nlohmann::json;

namespace {

void check_unit(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw UsageError(std::string(name) + " must lie in [0, 1]");
  }
}

double lookup_score(const std::string& token, const Lexicon& lexicon,
                    const ComplexityConfig& config) {
  if (lexicon.domain_terms.count(token)) return 1.0;
  if (lexicon.common_words.count(token)) return 0.5;
  if (lexicon.stop_words.count(token)) return 0.0;
  return config.noise_score;
}

double da_weight(const Utterance& u, const ComplexityConfig& config) {
  if (!u.dialog_act) return config.da_default_weight;
  auto it = config.da_weights.find(*u.dialog_act);
  return it == config.da_weights.end() ? config.da_default_weight : it->second;
}

}  // namespace

void ComplexityConfig::validate() const {
  check_unit(w1, "w1");
  check_unit(w2, "w2");
  if (std::abs(w1 + w2 - 1.0) > 1e-9) {
    throw UsageError("w1 + w2 must equal 1");
  }
  check_unit(noise_score, "noise_score");
  check_unit(empty_utterance_score, "empty_utterance_score");
  check_unit(da_default_weight, "da_default_weight");
  for (const auto& [tag, w] : da_weights) {
    if (!(w >= 0.0 && w <= 1.0)) {
      throw UsageError("dialog-act weight for \"" + tag +
                       "\" must lie in [0, 1]");
    }
  }
}

void apply_da_weights_json(const json& j, ComplexityConfig& config) {
  if (!j.is_object()) {
    throw UsageError("dialog-act weight table must be a JSON object");
  }
  for (const auto& [tag, value] : j.items()) {
    if (!value.is_number()) {
      throw UsageError("dialog-act weight for \"" + tag + "\" must be a number");
    }
    const double w = value.get<double>();
    if (!(w >= 0.0 && w <= 1.0)) {
      throw UsageError("dialog-act weight for \"" + tag +
                       "\" must lie in [0, 1]");
    }
    if (tag == "_default") {
      config.da_default_weight = w;
    } else {
      config.da_weights[tag] = w;
    }
  }
}

double word_complexity(WordClass word_class, const ComplexityConfig& config) {
  switch (word_class) {
    case WordClass::domain_specific: return 1.0;
    case WordClass::common_english: return 0.5;
    case WordClass::stop_word: return 0.0;
    case WordClass::noise: return config.noise_score;
  }
  return config.noise_score;
}

double utterance_complexity(const Utterance& u, const Lexicon& lexicon,
                            const ComplexityConfig& config) {
  const std::vector<std::string> tokens = tokenize(u.text);
  if (tokens.empty()) return config.empty_utterance_score;
  double sum = 0.0;
  for (const std::string& token : tokens) {
    sum += lookup_score(token, lexicon, config);
  }
  return sum / static_cast<double>(tokens.size());
}

double turn_complexity(const Turn& t, const Lexicon& lexicon,
                       const ComplexityConfig& config) {
  if (t.utterances.empty()) throw DataError("turn_complexity: empty turn");
  double sum = 0.0;
  for (const Utterance& u : t.utterances) {
    sum += utterance_complexity(u, lexicon, config);
  }
  return sum / static_cast<double>(t.utterances.size());
}

double weighted_turn_complexity(const Turn& t, const Lexicon& lexicon,
                                const ComplexityConfig& config) {
  if (t.utterances.empty()) {
    throw DataError("weighted_turn_complexity: empty turn");
  }
  double sum = 0.0;
  for (const Utterance& u : t.utterances) {
    sum += utterance_complexity(u, lexicon, config) * da_weight(u, config);
  }
  return sum / static_cast<double>(t.utterances.size());
}

ScoredDialog dialog_complexity(const Dialog& d, const Lexicon& lexicon,
                               const ComplexityConfig& config, int max_turns) {
  if (max_turns <= 0) {
    throw UsageError("dialog_complexity: max_turns must be positive");
  }
  if (d.turns.empty()) {
    throw DataError("dialog_complexity: dialog \"" + d.id + "\" has no turns");
  }

  ScoredDialog scored;
  scored.dialog_id = d.id;

  double sum = 0.0;
  for (const Turn& t : d.turns) {
    sum += turn_complexity(t, lexicon, config);
  }
  scored.content = sum / static_cast<double>(d.turns.size());

  if (d.turn_count() > max_turns) {
    scored.structure = 1.0;
    scored.structure_clamped = true;
  } else {
    scored.structure =
        static_cast<double>(d.turn_count()) / static_cast<double>(max_turns);
  }
  scored.score = config.w1 * scored.content + config.w2 * scored.structure;
  return scored;
}

void Histogram::add(double score) {
  int bin = static_cast<int>(score * kBins);
  bin = std::clamp(bin, 0, kBins - 1);
  ++bins[static_cast<std::size_t>(bin)];
}

namespace {

/// Scores for one dialog, computed independently so dialogs can be processed
/// on any thread and merged in corpus order.
struct DialogScores {
  std::vector<double> utterances;
  std::vector<double> turns;
  ScoredDialog dialog;
};

DialogScores score_dialog(const Dialog& d, const Lexicon& lexicon,
                          const ComplexityConfig& config, int max_turns,
                          const LevelSet& levels) {
  DialogScores out;
  if (levels.utterance) {
    out.utterances.reserve(d.utterance_count());
    for (const Turn& t : d.turns) {
      for (const Utterance& u : t.utterances) {
        out.utterances.push_back(utterance_complexity(u, lexicon, config));
      }
    }
  }
  if (levels.turn) {
    out.turns.reserve(d.turns.size());
    for (const Turn& t : d.turns) {
      out.turns.push_back(weighted_turn_complexity(t, lexicon, config));
    }
  }
  if (levels.dialog) {
    out.dialog = dialog_complexity(d, lexicon, config, max_turns);
  }
  return out;
}

}  // namespace

ComplexityReport score_corpus(const Corpus& corpus, const Lexicon& lexicon,
                              const ComplexityConfig& config,
                              const LevelSet& levels, int threads) {
  if (corpus.dialogs.empty()) {
    throw EmptyCorpusError("score_corpus: empty corpus");
  }
  config.validate();

  ComplexityReport report;
  report.domain = corpus.domain;
  report.role_mode = corpus.role_mode;
  report.max_turns = corpus.max_turns();
  report.da_weighted =
      !config.da_weights.empty() || config.da_default_weight != 1.0;
  report.levels = levels;

  const std::size_t n = corpus.dialogs.size();
  std::vector<DialogScores> scores(n);

  const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers =
      std::min({static_cast<std::size_t>(std::max(1, threads)), hw, n});

  auto run_range = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      scores[i] = score_dialog(corpus.dialogs[i], lexicon, config,
                               report.max_turns, levels);
    }
  };

  if (workers <= 1) {
    run_range(0, n);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t lo = n * w / workers;
      const std::size_t hi = n * (w + 1) / workers;
      pool.emplace_back(run_range, lo, hi);
    }
    for (std::thread& t : pool) t.join();
  }

  double u_sum = 0.0;
  double t_sum = 0.0;
  double d_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Dialog& d = corpus.dialogs[i];
    DialogScores& s = scores[i];
    for (std::size_t j = 0; j < s.utterances.size(); ++j) {
      report.utterances.push_back(
          {d.id, static_cast<int>(j), s.utterances[j]});
      report.utterance_hist.add(s.utterances[j]);
      u_sum += s.utterances[j];
    }
    for (std::size_t j = 0; j < s.turns.size(); ++j) {
      report.turns.push_back({d.id, static_cast<int>(j), s.turns[j]});
      report.turn_hist.add(s.turns[j]);
      t_sum += s.turns[j];
    }
    if (levels.dialog) {
      report.dialog_hist.add(s.dialog.score);
      d_sum += s.dialog.score;
      report.dialogs.push_back(std::move(s.dialog));
    }
  }

  if (!report.utterances.empty()) {
    report.utterance_mean = u_sum / static_cast<double>(report.utterances.size());
  }
  if (!report.turns.empty()) {
    report.turn_mean = t_sum / static_cast<double>(report.turns.size());
  }
  if (!report.dialogs.empty()) {
    report.dialog_mean = d_sum / static_cast<double>(report.dialogs.size());
  }
  return report;
}

namespace {

json histogram_to_json(const Histogram& h) {
  json bins = json::array();
  for (std::uint64_t b : h.bins) bins.push_back(b);
  return bins;
}

Histogram histogram_from_json(const json& j) {
  Histogram h;
  if (j.size() != h.bins.size()) {
    throw DataError("report histogram must have " +
                    std::to_string(h.bins.size()) + " bins");
  }
  for (std::size_t i = 0; i < h.bins.size(); ++i) {
    h.bins[i] = j.at(i).get<std::uint64_t>();
  }
  return h;
}

}  // namespace

json report_to_json(const ComplexityReport& report) {
  json j;
  j["domain"] = report.domain;
  j["role_mode"] = std::string(to_string(report.role_mode));
  j["max_turns"] = report.max_turns;
  j["da_weighted"] = report.da_weighted;
  j["levels"] = {{"utterance", report.levels.utterance},
                 {"turn", report.levels.turn},
                 {"dialog", report.levels.dialog}};

  json utts = json::array();
  for (const ScoredUtterance& u : report.utterances) {
    utts.push_back({{"dialog_id", u.dialog_id},
                    {"index", u.index},
                    {"score", u.score}});
  }
  j["utterances"] = std::move(utts);

  json turns = json::array();
  for (const ScoredTurn& t : report.turns) {
    turns.push_back({{"dialog_id", t.dialog_id},
                     {"index", t.index},
                     {"score", t.score}});
  }
  j["turns"] = std::move(turns);

  json dialogs = json::array();
  for (const ScoredDialog& d : report.dialogs) {
    dialogs.push_back({{"dialog_id", d.dialog_id},
                       {"content", d.content},
                       {"structure", d.structure},
                       {"score", d.score},
                       {"structure_clamped", d.structure_clamped}});
  }
  j["dialogs"] = std::move(dialogs);

  j["means"] = {{"utterance", report.utterance_mean},
                {"turn", report.turn_mean},
                {"dialog", report.dialog_mean}};
  j["histograms"] = {{"utterance", histogram_to_json(report.utterance_hist)},
                     {"turn", histogram_to_json(report.turn_hist)},
                     {"dialog", histogram_to_json(report.dialog_hist)}};
  return j;
}

ComplexityReport report_from_json(const json& j) {
  ComplexityReport report;
  try {
    report.domain = j.at("domain").get<std::string>();
    const auto mode =
        role_mode_from_string(j.at("role_mode").get<std::string>());
    if (!mode) throw DataError("report: unknown role_mode");
    report.role_mode = *mode;
    report.max_turns = j.at("max_turns").get<int>();
    report.da_weighted = j.at("da_weighted").get<bool>();
    const json& levels = j.at("levels");
    report.levels.utterance = levels.at("utterance").get<bool>();
    report.levels.turn = levels.at("turn").get<bool>();
    report.levels.dialog = levels.at("dialog").get<bool>();

    for (const json& u : j.at("utterances")) {
      report.utterances.push_back({u.at("dialog_id").get<std::string>(),
                                   u.at("index").get<int>(),
                                   u.at("score").get<double>()});
    }
    for (const json& t : j.at("turns")) {
      report.turns.push_back({t.at("dialog_id").get<std::string>(),
                              t.at("index").get<int>(),
                              t.at("score").get<double>()});
    }
    for (const json& d : j.at("dialogs")) {
      ScoredDialog sd;
      sd.dialog_id = d.at("dialog_id").get<std::string>();
      sd.content = d.at("content").get<double>();
      sd.structure = d.at("structure").get<double>();
      sd.score = d.at("score").get<double>();
      sd.structure_clamped = d.at("structure_clamped").get<bool>();
      report.dialogs.push_back(std::move(sd));
    }

    const json& means = j.at("means");
    report.utterance_mean = means.at("utterance").get<double>();
    report.turn_mean = means.at("turn").get<double>();
    report.dialog_mean = means.at("dialog").get<double>();

    const json& hists = j.at("histograms");
    report.utterance_hist = histogram_from_json(hists.at("utterance"));
    report.turn_hist = histogram_from_json(hists.at("turn"));
    report.dialog_hist = histogram_from_json(hists.at("dialog"));
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed complexity report: ") + e.what());
  }
  return report;
}

void report_to_csv(const ComplexityReport& report, std::ostream& out) {
  using detail::csv_escape;
  using detail::format_double;

  out << "unit_id,level,score,content,structure\n";
  for (const ScoredUtterance& u : report.utterances) {
    out << csv_escape(u.dialog_id + ":u" + std::to_string(u.index))
        << ",utterance," << format_double(u.score) << ",,\n";
  }
  for (const ScoredTurn& t : report.turns) {
    out << csv_escape(t.dialog_id + ":t" + std::to_string(t.index)) << ",turn,"
        << format_double(t.score) << ",,\n";
  }
  for (const ScoredDialog& d : report.dialogs) {
    out << csv_escape(d.dialog_id) << ",dialog," << format_double(d.score)
        << ',' << format_double(d.content) << ','
        << format_double(d.structure) << '\n';
  }
}

}  // namespace dcx
