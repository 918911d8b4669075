#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dcx/analysis.hpp"
#include "dcx/complexity.hpp"
#include "dcx/corpus.hpp"
#include "dcx/detail/format.hpp"
#include "dcx/errors.hpp"
#include "dcx/evaluation.hpp"
#include "dcx/lexicon.hpp"
#include "dcx/profile.hpp"
#include "dcx/service.hpp"

#include "CLI11.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

#ifndef DCX_DEFAULT_WORDLIST_DIR
#define DCX_DEFAULT_WORDLIST_DIR ""
#endif

fs::path wordlist_dir() {
  if (const char* env = std::getenv("DC_WORDLIST_DIR"); env && *env) {
    return fs::path(env);
  }
  const fs::path bundled(DCX_DEFAULT_WORDLIST_DIR);
  if (bundled.empty()) {
    throw dcx::UsageError(
        "no bundled wordlists compiled in; set DC_WORDLIST_DIR");
  }
  return bundled;
}

fs::path ensure_out_dir(const std::string& out) {
  fs::path dir(out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw dcx::UsageError("cannot create output directory: " + out);
  }
  return dir;
}

void write_text(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw dcx::UsageError("cannot write file: " + path.string());
  }
  out << content;
  if (!out) {
    throw dcx::UsageError("failed writing file: " + path.string());
  }
  std::cout << "wrote " << path.string() << '\n';
}

void write_json_file(const fs::path& path, const json& j) {
  write_text(path, j.dump(2) + "\n");
}

json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw dcx::UsageError("cannot open file: " + path.string());
  }
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw dcx::DataError("malformed JSON in " + path.string() + ": " +
                         e.what());
  }
  return j;
}

std::pair<double, double> parse_trim(const std::string& trim) {
  const auto comma = trim.find(',');
  if (comma == std::string::npos) {
    throw dcx::UsageError("--trim expects LOW,HIGH (e.g. 15,85)");
  }
  try {
    std::size_t used = 0;
    const double low = std::stod(trim.substr(0, comma), &used);
    if (used != comma) throw std::invalid_argument(trim);
    const std::string rest = trim.substr(comma + 1);
    const double high = std::stod(rest, &used);
    if (used != rest.size()) throw std::invalid_argument(trim);
    return {low, high};
  } catch (const std::exception&) {
    throw dcx::UsageError("--trim expects two numbers LOW,HIGH, got \"" +
                          trim + "\"");
  }
}

struct CommonScoreFlags {
  std::string corpus_path;
  std::string lexicon_path;
  double w1 = -1.0;
  double w2 = -1.0;
  std::string da_weights_path;
  std::string out = ".";
  std::string format = "json";
};

void apply_config_overrides(const CLI::App& cmd, const CommonScoreFlags& flags,
                            dcx::ComplexityConfig& config) {
  const bool has_w1 = cmd.count("--w1") > 0;
  const bool has_w2 = cmd.count("--w2") > 0;
  if (has_w1 != has_w2) {
    throw dcx::UsageError("--w1 and --w2 must be given together");
  }
  if (has_w1) {
    config.w1 = flags.w1;
    config.w2 = flags.w2;
  }
  if (!flags.da_weights_path.empty()) {
    dcx::apply_da_weights_json(read_json_file(flags.da_weights_path), config);
  }
  config.validate();
}

struct LoadedProfile {
  dcx::DomainProfile profile;
  dcx::Corpus corpus;
};

LoadedProfile load_scoring_inputs(const CommonScoreFlags& flags,
                                  const CLI::App& cmd) {
  LoadedProfile loaded;
  loaded.profile = dcx::load_domain_profile(flags.lexicon_path);
  apply_config_overrides(cmd, flags, loaded.profile.config);
  dcx::ParseOptions opts;
  opts.role_mode = loaded.profile.role_mode;
  loaded.corpus = dcx::parse_corpus_file(flags.corpus_path, opts).corpus;
  return loaded;
}

// ---------------------------------------------------------------------------
// lexicon
// ---------------------------------------------------------------------------

struct LexiconFlags {
  std::string corpus_path;
  std::string method = "tf";
  double delta = 50.0;
  std::string role_mode = "two_role";
  double w1 = -1.0;
  double w2 = -1.0;
  std::string da_weights_path;
  std::string out = ".";
};

int run_lexicon(const CLI::App& cmd, const LexiconFlags& flags) {
  const auto mode = dcx::role_mode_from_string(flags.role_mode);
  if (!mode) {
    throw dcx::UsageError("--role-mode must be two_role or single_role");
  }
  if (!(flags.delta > 0.0) || flags.delta > 100.0) {
    throw dcx::UsageError("--delta must lie in (0, 100]");
  }
  const dcx::ExtractionMethod method =
      dcx::extraction_method_from_string(flags.method);

  dcx::ParseOptions opts;
  opts.role_mode = *mode;
  const dcx::Corpus corpus =
      dcx::parse_corpus_file(flags.corpus_path, opts).corpus;

  const fs::path lists = wordlist_dir();
  auto [stop_words, common_words] = dcx::load_wordlists(
      lists / "stopwords.txt", lists / "common_words.txt");

  dcx::DomainProfile profile;
  profile.lexicon.domain = corpus.domain;
  profile.lexicon.delta = flags.delta;
  profile.lexicon.stop_words = std::move(stop_words);
  profile.lexicon.common_words = std::move(common_words);
  const std::vector<std::string> terms = dcx::extract_domain_terms(
      corpus, method, flags.delta, profile.lexicon.stop_words);
  profile.lexicon.domain_terms.insert(terms.begin(), terms.end());
  profile.role_mode = *mode;
  profile.max_turns = corpus.max_turns();

  CommonScoreFlags config_holder;
  config_holder.w1 = flags.w1;
  config_holder.w2 = flags.w2;
  config_holder.da_weights_path = flags.da_weights_path;
  apply_config_overrides(cmd, config_holder, profile.config);

  const fs::path dir = ensure_out_dir(flags.out);
  const fs::path path = dir / (corpus.domain + ".json");
  dcx::save_domain_profile(profile, path);
  std::cout << "wrote " << path.string() << '\n';
  std::cout << "domain " << corpus.domain << ": "
            << profile.lexicon.domain_terms.size() << " domain terms, "
            << "specialization "
            << dcx::detail::format_double(
                   dcx::domain_specialization(profile.lexicon))
            << '\n';
  return 0;
}

// ---------------------------------------------------------------------------
// score
// ---------------------------------------------------------------------------

struct ScoreFlags : CommonScoreFlags {
  std::string levels = "utterance,turn,dialog";
  int threads = 1;
};

dcx::LevelSet parse_levels(const std::string& levels) {
  dcx::LevelSet set;
  set.utterance = set.turn = set.dialog = false;
  std::size_t start = 0;
  while (start <= levels.size()) {
    const std::size_t comma = levels.find(',', start);
    const std::string level =
        levels.substr(start, comma == std::string::npos ? std::string::npos
                                                        : comma - start);
    if (level == "utterance") {
      set.utterance = true;
    } else if (level == "turn") {
      set.turn = true;
    } else if (level == "dialog") {
      set.dialog = true;
    } else if (!level.empty()) {
      throw dcx::UsageError("unknown level \"" + level +
                            "\" (expected utterance, turn or dialog)");
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (!set.utterance && !set.turn && !set.dialog) {
    throw dcx::UsageError("--levels selected nothing");
  }
  return set;
}

int run_score(const CLI::App& cmd, const ScoreFlags& flags) {
  if (flags.threads < 1) {
    throw dcx::UsageError("--threads must be at least 1");
  }
  const dcx::LevelSet levels = parse_levels(flags.levels);
  LoadedProfile loaded = load_scoring_inputs(flags, cmd);

  const dcx::ComplexityReport report =
      dcx::score_corpus(loaded.corpus, loaded.profile.lexicon,
                        loaded.profile.config, levels, flags.threads);

  const fs::path dir = ensure_out_dir(flags.out);
  if (flags.format == "json") {
    write_json_file(dir / "report.json", dcx::report_to_json(report));
  } else if (flags.format == "csv") {
    std::ostringstream csv;
    dcx::report_to_csv(report, csv);
    write_text(dir / "report.csv", csv.str());
  } else {
    throw dcx::UsageError("--format must be json or csv");
  }
  return 0;
}

// ---------------------------------------------------------------------------
// profile (pairwise K-S between saved reports)
// ---------------------------------------------------------------------------

struct ProfileFlags {
  std::vector<std::string> reports;
  std::string out = ".";
  std::string format = "json";
};

int run_profile(const ProfileFlags& flags) {
  if (flags.reports.size() < 2) {
    throw dcx::UsageError("profile needs at least two report files");
  }

  struct Loaded {
    std::string label;
    dcx::ComplexityReport report;
  };
  std::vector<Loaded> loaded;
  loaded.reserve(flags.reports.size());
  for (const std::string& path : flags.reports) {
    loaded.push_back({path, dcx::report_from_json(read_json_file(path))});
  }

  auto level_scores = [](const dcx::ComplexityReport& r,
                         const std::string& level) {
    std::vector<double> scores;
    if (level == "utterance") {
      for (const auto& u : r.utterances) scores.push_back(u.score);
    } else if (level == "turn") {
      for (const auto& t : r.turns) scores.push_back(t.score);
    } else {
      for (const auto& d : r.dialogs) scores.push_back(d.score);
    }
    return scores;
  };

  json rows = json::array();
  std::ostringstream csv;
  csv << "report_a,report_b,level,statistic,p_value,n1,n2\n";
  for (std::size_t i = 0; i < loaded.size(); ++i) {
    for (std::size_t j2 = i + 1; j2 < loaded.size(); ++j2) {
      for (const char* level : {"utterance", "turn", "dialog"}) {
        const std::vector<double> a = level_scores(loaded[i].report, level);
        const std::vector<double> b = level_scores(loaded[j2].report, level);
        if (a.empty() || b.empty()) continue;
        const dcx::KsResult ks = dcx::ks_two_sample(a, b);
        rows.push_back({{"report_a", loaded[i].label},
                        {"report_b", loaded[j2].label},
                        {"level", level},
                        {"statistic", ks.statistic},
                        {"p_value", ks.p_value},
                        {"n1", ks.n1},
                        {"n2", ks.n2}});
        csv << dcx::detail::csv_escape(loaded[i].label) << ','
            << dcx::detail::csv_escape(loaded[j2].label) << ',' << level << ','
            << dcx::detail::format_double(ks.statistic) << ','
            << dcx::detail::format_double(ks.p_value) << ',' << ks.n1 << ','
            << ks.n2 << '\n';
      }
    }
  }

  const fs::path dir = ensure_out_dir(flags.out);
  if (flags.format == "json") {
    write_json_file(dir / "ks.json", json{{"pairs", std::move(rows)}});
  } else if (flags.format == "csv") {
    write_text(dir / "ks.csv", csv.str());
  } else {
    throw dcx::UsageError("--format must be json or csv");
  }
  return 0;
}

// ---------------------------------------------------------------------------
// cluster
// ---------------------------------------------------------------------------

struct ClusterFlags : CommonScoreFlags {
  int baskets = 5;
  int k = 6;
  std::string trim = "15,85";
  std::uint64_t seed = 0;
};

int run_cluster(const CLI::App& cmd, const ClusterFlags& flags) {
  if (flags.baskets < 1) throw dcx::UsageError("--baskets must be at least 1");
  if (flags.k < 1) throw dcx::UsageError("--k must be at least 1");
  const auto [low, high] = parse_trim(flags.trim);

  LoadedProfile loaded = load_scoring_inputs(flags, cmd);

  dcx::SignatureParams params;
  params.n_baskets = flags.baskets;
  params.k = flags.k;
  params.trim_low_pct = low;
  params.trim_high_pct = high;
  params.seed = flags.seed;
  const dcx::ProceduralSignature signature = dcx::procedural_signatures(
      loaded.corpus, loaded.profile.lexicon, loaded.profile.config, params);

  json j;
  j["n_baskets"] = signature.n_baskets;
  j["k"] = flags.k;
  j["inertia"] = signature.inertia;
  j["dialogs_clustered"] = signature.dialogs_clustered;
  j["dialogs_too_short"] = signature.dialogs_too_short;
  j["centroids"] = json(signature.centroids);
  json assignments = json::array();
  for (const auto& [id, cluster] : signature.assignments) {
    assignments.push_back({{"dialog_id", id}, {"cluster", cluster}});
  }
  j["assignments"] = std::move(assignments);

  std::ostringstream csv;
  csv << "cluster,basket,value\n";
  for (std::size_t c = 0; c < signature.centroids.size(); ++c) {
    for (std::size_t b = 0; b < signature.centroids[c].size(); ++b) {
      csv << c << ',' << b << ','
          << dcx::detail::format_double(signature.centroids[c][b]) << '\n';
    }
  }

  const fs::path dir = ensure_out_dir(flags.out);
  write_json_file(dir / "signature.json", j);
  write_text(dir / "centroids.csv", csv.str());
  return 0;
}

// ---------------------------------------------------------------------------
// roles
// ---------------------------------------------------------------------------

int run_roles(const CLI::App& cmd, const CommonScoreFlags& flags) {
  LoadedProfile loaded = load_scoring_inputs(flags, cmd);
  const dcx::RoleComplexityTable table = dcx::role_complexity(
      loaded.corpus, loaded.profile.lexicon, loaded.profile.config);

  const fs::path dir = ensure_out_dir(flags.out);
  if (flags.format == "json") {
    json rows = json::array();
    for (const auto& [role, stats] : table) {
      rows.push_back({{"role", std::string(dcx::to_string(role))},
                      {"n", stats.n},
                      {"mean", stats.mean}});
    }
    write_json_file(dir / "roles.json", json{{"roles", std::move(rows)}});
  } else if (flags.format == "csv") {
    std::ostringstream csv;
    csv << "role,n,mean\n";
    for (const auto& [role, stats] : table) {
      csv << dcx::to_string(role) << ',' << stats.n << ','
          << dcx::detail::format_double(stats.mean) << '\n';
    }
    write_text(dir / "roles.csv", csv.str());
  } else {
    throw dcx::UsageError("--format must be json or csv");
  }
  return 0;
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

struct SimulateFlags : CommonScoreFlags {
  std::string spec_path;
  std::uint64_t seed = 0;
};

int run_simulate(const CLI::App& cmd, const SimulateFlags& flags) {
  dcx::SimulationSpec spec =
      dcx::simulation_spec_from_json(read_json_file(flags.spec_path));
  if (cmd.count("--seed") > 0) spec.seed = flags.seed;

  LoadedProfile loaded = load_scoring_inputs(flags, cmd);
  const dcx::SimulationTable table = dcx::simulate_allocation(
      loaded.corpus, loaded.profile.lexicon, loaded.profile.config, spec);

  const fs::path dir = ensure_out_dir(flags.out);
  if (flags.format == "json") {
    write_json_file(dir / "simulation.json",
                    dcx::simulation_table_to_json(table));
  } else if (flags.format == "csv") {
    std::ostringstream csv;
    dcx::simulation_table_to_csv(table, csv);
    write_text(dir / "simulation.csv", csv.str());
  } else {
    throw dcx::UsageError("--format must be json or csv");
  }
  return 0;
}

// ---------------------------------------------------------------------------
// evaluate (agent ledgers)
// ---------------------------------------------------------------------------

struct EvaluateFlags {
  std::string ledger_path;
  std::string report_path;
  std::string out = ".";
  std::string format = "json";
};

int run_evaluate(const EvaluateFlags& flags) {
  std::ifstream in(flags.ledger_path);
  if (!in) {
    throw dcx::UsageError("cannot open ledger file: " + flags.ledger_path);
  }
  std::vector<dcx::AgentLedger> ledgers = dcx::parse_agent_ledgers_csv(in);

  bool have_complexity = false;
  if (!flags.report_path.empty()) {
    const dcx::ComplexityReport report =
        dcx::report_from_json(read_json_file(flags.report_path));
    std::map<std::string, double> by_id;
    for (const auto& d : report.dialogs) by_id[d.dialog_id] = d.score;
    for (dcx::AgentLedger& ledger : ledgers) {
      for (dcx::HandledDialog& h : ledger.handled) {
        auto it = by_id.find(h.dialog_id);
        if (it == by_id.end()) {
          throw dcx::DataError("report has no dialog \"" + h.dialog_id +
                               "\" named in the ledger");
        }
        h.complexity = it->second;
      }
    }
    have_complexity = true;
  }

  json rows = json::array();
  std::ostringstream csv;
  csv << "agent_id,dialogs,total_hours,omega1,omega2,omega3\n";
  for (const dcx::AgentLedger& ledger : ledgers) {
    const double w1 = dcx::omega1(ledger);
    const double w2 = dcx::omega2(ledger);
    json row{{"agent_id", ledger.agent_id},
             {"dialogs", ledger.handled.size()},
             {"total_hours", ledger.total_hours},
             {"omega1", w1},
             {"omega2", w2}};
    csv << dcx::detail::csv_escape(ledger.agent_id) << ','
        << ledger.handled.size() << ','
        << dcx::detail::format_double(ledger.total_hours) << ','
        << dcx::detail::format_double(w1) << ','
        << dcx::detail::format_double(w2) << ',';
    if (have_complexity) {
      const double w3 = dcx::omega3(ledger);
      row["omega3"] = w3;
      csv << dcx::detail::format_double(w3);
    } else {
      row["omega3"] = nullptr;
    }
    csv << '\n';
    rows.push_back(std::move(row));
  }

  const fs::path dir = ensure_out_dir(flags.out);
  if (flags.format == "json") {
    write_json_file(dir / "agents.json", json{{"agents", std::move(rows)}});
  } else if (flags.format == "csv") {
    write_text(dir / "agents.csv", csv.str());
  } else {
    throw dcx::UsageError("--format must be json or csv");
  }
  return 0;
}

// ---------------------------------------------------------------------------
// serve
// ---------------------------------------------------------------------------

struct ServeFlags {
  std::string config_path;
  std::string lexicon_dir;
  std::string host;
  int port = -1;
  std::size_t body_limit = 0;
};

dcx::ScoringServer* g_server = nullptr;

void handle_signal(int) {
  if (g_server) g_server->stop();
}

int run_serve(const ServeFlags& flags) {
  dcx::ServiceConfig config;
  if (!flags.config_path.empty()) {
    config = dcx::load_service_config(flags.config_path);
  } else if (!flags.lexicon_dir.empty()) {
    config.lexicon_dir = flags.lexicon_dir;
  } else {
    throw dcx::UsageError("serve needs --config FILE or --lexicons DIR");
  }
  if (!flags.host.empty()) config.bind_address = flags.host;
  if (flags.port >= 0) config.port = flags.port;
  if (flags.body_limit > 0) config.body_limit_bytes = flags.body_limit;

  dcx::DomainRegistry registry = dcx::DomainRegistry::load(config.lexicon_dir);
  std::cout << "loaded " << registry.size() << " domain(s) from "
            << config.lexicon_dir.string() << '\n';

  dcx::ScoringServer server(std::move(registry), config.body_limit_bytes);
  g_server = &server;
  std::signal(SIGINT, handle_signal);
  std::signal(SIGTERM, handle_signal);

  std::cout << "listening on " << config.bind_address << ':' << config.port
            << std::endl;
  const bool ok = server.listen(config.bind_address, config.port);
  g_server = nullptr;
  if (!ok) {
    std::cerr << "failed to listen on " << config.bind_address << ':'
              << config.port << '\n';
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dialog complexity toolkit: corpus scoring and analysis"};
  app.require_subcommand(1);

  LexiconFlags lexicon_flags;
  auto* lexicon = app.add_subcommand(
      "lexicon", "Build a domain lexicon from a corpus");
  lexicon->add_option("--corpus", lexicon_flags.corpus_path,
                      "Corpus JSONL file")->required();
  lexicon->add_option("--method", lexicon_flags.method,
                      "Term extraction method (tf or tfidf)");
  lexicon->add_option("--delta", lexicon_flags.delta,
                      "Top percentage of ranked terms to keep");
  lexicon->add_option("--role-mode", lexicon_flags.role_mode,
                      "two_role or single_role");
  lexicon->add_option("--w1", lexicon_flags.w1, "Content weight");
  lexicon->add_option("--w2", lexicon_flags.w2, "Structure weight");
  lexicon->add_option("--da-weights", lexicon_flags.da_weights_path,
                      "Dialog-act weight JSON file");
  lexicon->add_option("--out", lexicon_flags.out, "Output directory");

  ScoreFlags score_flags;
  auto* score = app.add_subcommand("score", "Score a corpus against a lexicon");
  score->add_option("--corpus", score_flags.corpus_path, "Corpus JSONL file")
      ->required();
  score->add_option("--lexicon", score_flags.lexicon_path, "Lexicon JSON file")
      ->required();
  score->add_option("--levels", score_flags.levels,
                    "Comma list of utterance,turn,dialog");
  score->add_option("--w1", score_flags.w1, "Content weight");
  score->add_option("--w2", score_flags.w2, "Structure weight");
  score->add_option("--da-weights", score_flags.da_weights_path,
                    "Dialog-act weight JSON file");
  score->add_option("--threads", score_flags.threads, "Worker thread count");
  score->add_option("--out", score_flags.out, "Output directory");
  score->add_option("--format", score_flags.format, "json or csv");

  ProfileFlags profile_flags;
  auto* profile = app.add_subcommand(
      "profile", "Pairwise K-S comparison of saved score reports");
  profile->add_option("reports", profile_flags.reports,
                      "Two or more report.json files")
      ->expected(-2);
  profile->add_option("--out", profile_flags.out, "Output directory");
  profile->add_option("--format", profile_flags.format, "json or csv");

  ClusterFlags cluster_flags;
  auto* cluster = app.add_subcommand(
      "cluster", "Extract procedural signatures via basket k-means");
  cluster->add_option("--corpus", cluster_flags.corpus_path,
                      "Corpus JSONL file")->required();
  cluster->add_option("--lexicon", cluster_flags.lexicon_path,
                      "Lexicon JSON file")->required();
  cluster->add_option("--baskets", cluster_flags.baskets, "Baskets per dialog");
  cluster->add_option("--k", cluster_flags.k, "Cluster count");
  cluster->add_option("--trim", cluster_flags.trim,
                      "Turn-count percentile trim LOW,HIGH");
  cluster->add_option("--seed", cluster_flags.seed, "Random seed");
  cluster->add_option("--w1", cluster_flags.w1, "Content weight");
  cluster->add_option("--w2", cluster_flags.w2, "Structure weight");
  cluster->add_option("--da-weights", cluster_flags.da_weights_path,
                      "Dialog-act weight JSON file");
  cluster->add_option("--out", cluster_flags.out, "Output directory");

  CommonScoreFlags roles_flags;
  auto* roles = app.add_subcommand(
      "roles", "Mean utterance complexity per speaker role");
  roles->add_option("--corpus", roles_flags.corpus_path, "Corpus JSONL file")
      ->required();
  roles->add_option("--lexicon", roles_flags.lexicon_path, "Lexicon JSON file")
      ->required();
  roles->add_option("--w1", roles_flags.w1, "Content weight");
  roles->add_option("--w2", roles_flags.w2, "Structure weight");
  roles->add_option("--da-weights", roles_flags.da_weights_path,
                    "Dialog-act weight JSON file");
  roles->add_option("--out", roles_flags.out, "Output directory");
  roles->add_option("--format", roles_flags.format, "json or csv");

  SimulateFlags simulate_flags;
  auto* simulate = app.add_subcommand(
      "simulate", "Allocation simulation with agent evaluation metrics");
  simulate->add_option("--corpus", simulate_flags.corpus_path,
                       "Corpus JSONL file")->required();
  simulate->add_option("--lexicon", simulate_flags.lexicon_path,
                       "Lexicon JSON file")->required();
  simulate->add_option("--spec", simulate_flags.spec_path,
                       "Simulation spec JSON file")->required();
  simulate->add_option("--seed", simulate_flags.seed, "Random seed override");
  simulate->add_option("--w1", simulate_flags.w1, "Content weight");
  simulate->add_option("--w2", simulate_flags.w2, "Structure weight");
  simulate->add_option("--da-weights", simulate_flags.da_weights_path,
                       "Dialog-act weight JSON file");
  simulate->add_option("--out", simulate_flags.out, "Output directory");
  simulate->add_option("--format", simulate_flags.format, "json or csv");

  EvaluateFlags evaluate_flags;
  auto* evaluate = app.add_subcommand(
      "evaluate", "Agent omega metrics from a handled-dialog ledger");
  evaluate->add_option("--ledger", evaluate_flags.ledger_path,
                       "Ledger CSV file")->required();
  evaluate->add_option("--report", evaluate_flags.report_path,
                       "Score report supplying dialog complexities");
  evaluate->add_option("--out", evaluate_flags.out, "Output directory");
  evaluate->add_option("--format", evaluate_flags.format, "json or csv");

  ServeFlags serve_flags;
  auto* serve = app.add_subcommand("serve", "HTTP scoring service");
  serve->add_option("--config", serve_flags.config_path,
                    "Service config JSON file");
  serve->add_option("--lexicons", serve_flags.lexicon_dir,
                    "Directory of lexicon JSON files");
  serve->add_option("--host", serve_flags.host, "Bind address");
  serve->add_option("--port", serve_flags.port, "Port");
  serve->add_option("--body-limit", serve_flags.body_limit,
                    "Request body size limit in bytes");

  try {
    app.parse(argc, argv);
    if (lexicon->parsed()) return run_lexicon(*lexicon, lexicon_flags);
    if (score->parsed()) return run_score(*score, score_flags);
    if (profile->parsed()) return run_profile(profile_flags);
    if (cluster->parsed()) return run_cluster(*cluster, cluster_flags);
    if (roles->parsed()) return run_roles(*roles, roles_flags);
    if (simulate->parsed()) return run_simulate(*simulate, simulate_flags);
    if (evaluate->parsed()) return run_evaluate(evaluate_flags);
    if (serve->parsed()) return run_serve(serve_flags);
    return 2;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 2;
  } catch (const dcx::UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const dcx::DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
