#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <unordered_set>
#include <string>
#include <vector>

#include "dcx/analysis.hpp"
#include "dcx/complexity.hpp"
#include "dcx/corpus.hpp"
#include "dcx/detail/format.hpp"
#include "dcx/evaluation.hpp"
#include "dcx/lexicon.hpp"
#include "dcx/profile.hpp"

#include "json.hpp"

#include "fixtures.hpp"

using namespace dcx;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code = -1;
  std::string out;
  std::string err;
};

CliResult run_cli(const std::string& args, const std::string& env = "") {
  static int counter = 0;
  const fs::path dir = fs::temp_directory_path();
  const std::string tag = std::to_string(counter++);
  const fs::path out_path = dir / ("dcx_cli_out_" + tag + ".txt");
  const fs::path err_path = dir / ("dcx_cli_err_" + tag + ".txt");
  std::string cmd;
  if (!env.empty()) cmd += env + " ";
  cmd += std::string(DCX_BIN_PATH) + " " + args + " > " + out_path.string() +
         " 2> " + err_path.string();
  const int status = std::system(cmd.c_str());
  CliResult result;
  if (WIFEXITED(status)) result.code = WEXITSTATUS(status);
  result.out = fix::read_file(out_path);
  result.err = fix::read_file(err_path);
  fs::remove(out_path);
  fs::remove(err_path);
  return result;
}

std::string fixture(const char* name) {
  return (fix::fixture_dir() / name).string();
}

/// Builds a lexicon profile for a fixture corpus through the CLI and returns
/// the profile path.
fs::path built_lexicon(const fs::path& dir, const char* corpus,
                       const std::string& extra = "") {
  auto res = run_cli("lexicon --corpus " + fixture(corpus) + " --out " +
                     dir.string() + (extra.empty() ? "" : " " + extra));
  REQUIRE(res.code == 0);
  const std::string domain = fs::path(corpus).stem().string();
  return dir / (domain + ".json");
}

std::size_t count_lines(const std::string& text) {
  std::size_t n = 0;
  for (char c : text) n += c == '\n';
  return n;
}

}  // namespace

TEST_CASE("top-level argument handling") {
  CHECK(run_cli("").code == 2);
  CHECK(run_cli("frobnicate").code == 2);
  CHECK(run_cli("score --corpus x").code == 2);
  CHECK(run_cli("score --no-such-flag").code == 2);
  auto help = run_cli("--help");
  CHECK(help.code == 0);
  CHECK(help.out.find("score") != std::string::npos);
}

TEST_CASE("lexicon builds a loadable domain profile") {
  auto dir = fix::scratch_dir("cli_lexicon");
  auto res = run_cli("lexicon --corpus " + fixture("hr.jsonl") +
                     " --delta 40 --out " + dir.string());
  REQUIRE(res.code == 0);
  CHECK(res.out.find("wrote ") != std::string::npos);
  CHECK(res.out.find("domain hr:") != std::string::npos);
  CHECK(res.out.find("specialization") != std::string::npos);

  const fs::path path = dir / "hr.json";
  REQUIRE(fs::exists(path));
  auto profile = load_domain_profile(path);
  CHECK(profile.lexicon.domain == "hr");
  CHECK(profile.lexicon.delta == 40.0);
  CHECK(profile.role_mode == RoleMode::two_role);

  auto corpus = parse_corpus_file(fixture("hr.jsonl"), {}).corpus;
  CHECK(profile.max_turns == corpus.max_turns());
  auto terms = extract_domain_terms(corpus, ExtractionMethod::tf, 40.0,
                                    profile.lexicon.stop_words);
  CHECK(profile.lexicon.domain_terms ==
        std::unordered_set<std::string>(terms.begin(), terms.end()));
  CHECK(res.out.find(std::to_string(terms.size()) + " domain terms") !=
        std::string::npos);
}

TEST_CASE("lexicon rejects bad flags") {
  auto dir = fix::scratch_dir("cli_lexicon_bad");
  const std::string base =
      "lexicon --corpus " + fixture("hr.jsonl") + " --out " + dir.string();
  CHECK(run_cli(base + " --delta 0").code == 2);
  CHECK(run_cli(base + " --delta 100.5").code == 2);
  CHECK(run_cli(base + " --role-mode both").code == 2);
  CHECK(run_cli(base + " --method bogus").code == 2);
  auto res = run_cli("lexicon --corpus " + dir.string() +
                     "/missing.jsonl --out " + dir.string());
  CHECK(res.code == 2);
  CHECK(res.err.find("error:") != std::string::npos);
}

TEST_CASE("DC_WORDLIST_DIR overrides the bundled lists") {
  auto dir = fix::scratch_dir("cli_wordlists");
  fix::write_file(dir / "stopwords.txt", "the\nz\n");
  fix::write_file(dir / "common_words.txt", "help\n");
  auto res = run_cli("lexicon --corpus " + fixture("hr.jsonl") + " --out " +
                         dir.string(),
                     "DC_WORDLIST_DIR=" + dir.string());
  REQUIRE(res.code == 0);
  auto profile = load_domain_profile(dir / "hr.json");
  CHECK(profile.lexicon.stop_words == std::unordered_set<std::string>{"the", "z"});
  CHECK(profile.lexicon.common_words == std::unordered_set<std::string>{"help"});
}

TEST_CASE("score emits the exact library report") {
  auto dir = fix::scratch_dir("cli_score");
  auto lexicon_path = built_lexicon(dir, "hr.jsonl");
  auto out = dir / "run1";
  auto res = run_cli("score --corpus " + fixture("hr.jsonl") + " --lexicon " +
                     lexicon_path.string() + " --out " + out.string());
  REQUIRE(res.code == 0);

  auto profile = load_domain_profile(lexicon_path);
  ParseOptions opts;
  opts.role_mode = profile.role_mode;
  auto corpus = parse_corpus_file(fixture("hr.jsonl"), opts).corpus;
  auto report =
      score_corpus(corpus, profile.lexicon, profile.config, LevelSet{}, 1);
  const std::string expected = report_to_json(report).dump(2) + "\n";
  CHECK(fix::read_file(out / "report.json") == expected);

  SUBCASE("reruns and thread counts do not change a byte") {
    int run = 0;
    for (const char* extra : {"", " --threads 7"}) {
      auto out2 = dir / ("rerun" + std::to_string(run++));
      auto res2 = run_cli("score --corpus " + fixture("hr.jsonl") +
                          " --lexicon " + lexicon_path.string() + " --out " +
                          out2.string() + extra);
      REQUIRE(res2.code == 0);
      CHECK(fix::read_file(out2 / "report.json") == expected);
    }
  }
}

TEST_CASE("score level filtering and formats") {
  auto dir = fix::scratch_dir("cli_score_levels");
  auto lexicon_path = built_lexicon(dir, "insurance.jsonl");
  const std::string base = "score --corpus " + fixture("insurance.jsonl") +
                           " --lexicon " + lexicon_path.string();

  auto csv_run = run_cli(base + " --format csv --out " + dir.string());
  REQUIRE(csv_run.code == 0);
  const std::string csv = fix::read_file(dir / "report.csv");
  CHECK(csv.rfind("unit_id,level,score,content,structure\n", 0) == 0);
  CHECK(csv.find(",utterance,") != std::string::npos);
  CHECK(csv.find(",turn,") != std::string::npos);
  CHECK(csv.find(",dialog,") != std::string::npos);

  auto only = dir / "dialog_only";
  REQUIRE(run_cli(base + " --levels dialog --format csv --out " +
                  only.string()).code == 0);
  std::istringstream lines(fix::read_file(only / "report.csv"));
  std::string line;
  std::getline(lines, line);
  std::size_t rows = 0;
  while (std::getline(lines, line)) {
    CHECK(line.find(",dialog,") != std::string::npos);
    ++rows;
  }
  auto corpus = parse_corpus_file(fixture("insurance.jsonl"), {}).corpus;
  CHECK(rows == corpus.dialogs.size());

  CHECK(run_cli(base + " --levels bogus --out " + dir.string()).code == 2);
  CHECK(run_cli(base + " --levels '' --out " + dir.string()).code == 2);
  CHECK(run_cli(base + " --format yaml --out " + dir.string()).code == 2);
  CHECK(run_cli(base + " --threads 0 --out " + dir.string()).code == 2);
}

TEST_CASE("score weight overrides") {
  auto dir = fix::scratch_dir("cli_score_weights");
  auto lexicon_path = built_lexicon(dir, "insurance.jsonl");
  const std::string base = "score --corpus " + fixture("insurance.jsonl") +
                           " --lexicon " + lexicon_path.string();

  CHECK(run_cli(base + " --w1 0.9 --out " + dir.string()).code == 2);
  CHECK(run_cli(base + " --w1 0.9 --w2 0.3 --out " + dir.string()).code == 2);

  auto out = dir / "blend";
  REQUIRE(run_cli(base + " --w1 0.7 --w2 0.3 --out " + out.string()).code == 0);
  auto profile = load_domain_profile(lexicon_path);
  profile.config.w1 = 0.7;
  profile.config.w2 = 0.3;
  auto corpus = parse_corpus_file(fixture("insurance.jsonl"), {}).corpus;
  auto report =
      score_corpus(corpus, profile.lexicon, profile.config, LevelSet{}, 1);
  CHECK(fix::read_file(out / "report.json") ==
        report_to_json(report).dump(2) + "\n");
}

TEST_CASE("profile runs pairwise distribution comparisons") {
  auto dir = fix::scratch_dir("cli_profile");
  auto hr_lex = built_lexicon(dir, "hr.jsonl");
  auto rest_lex = built_lexicon(dir, "restaurant.jsonl");
  auto hr_out = dir / "hr";
  auto rest_out = dir / "rest";
  REQUIRE(run_cli("score --corpus " + fixture("hr.jsonl") + " --lexicon " +
                  hr_lex.string() + " --out " + hr_out.string()).code == 0);
  REQUIRE(run_cli("score --corpus " + fixture("restaurant.jsonl") +
                  " --lexicon " + rest_lex.string() + " --out " +
                  rest_out.string()).code == 0);
  const std::string hr_report = (hr_out / "report.json").string();
  const std::string rest_report = (rest_out / "report.json").string();

  SUBCASE("two reports give one pair per level") {
    auto out = dir / "pairs";
    REQUIRE(run_cli("profile " + hr_report + " " + rest_report + " --out " +
                    out.string()).code == 0);
    auto j = json::parse(fix::read_file(out / "ks.json"));
    REQUIRE(j.at("pairs").size() == 3);
    for (const auto& row : j["pairs"]) {
      CHECK(row.at("report_a") == hr_report);
      CHECK(row.at("report_b") == rest_report);
      CHECK(row.at("statistic").get<double>() >= 0.0);
      CHECK(row.at("statistic").get<double>() <= 1.0);
      CHECK(row.at("n1").get<int>() > 0);
    }
  }
  SUBCASE("a report against itself is indistinguishable") {
    auto out = dir / "self";
    REQUIRE(run_cli("profile " + hr_report + " " + hr_report + " --out " +
                    out.string()).code == 0);
    for (const auto& row :
         json::parse(fix::read_file(out / "ks.json"))["pairs"]) {
      CHECK(row.at("statistic") == 0.0);
      CHECK(row.at("p_value") == 1.0);
    }
  }
  SUBCASE("three reports give three pairs") {
    auto out = dir / "triple";
    REQUIRE(run_cli("profile " + hr_report + " " + rest_report + " " +
                    hr_report + " --out " + out.string() +
                    " --format csv").code == 0);
    const std::string csv = fix::read_file(out / "ks.csv");
    CHECK(csv.rfind("report_a,report_b,level,statistic,p_value,n1,n2\n", 0) ==
          0);
    CHECK(count_lines(csv) == 1 + 9);
  }
  SUBCASE("disjoint score distributions max out the statistic") {
    auto lex = fix::micro_lexicon();
    auto lows = fix::corpus_of(
        {fix::dialog("lo0", {{Role::portal_user, "z the a"}},
                     RoleMode::single_role),
         fix::dialog("lo1", {{Role::portal_user, "to it is"}},
                     RoleMode::single_role)},
        RoleMode::single_role);
    auto highs = fix::corpus_of(
        {fix::dialog("hi0", {{Role::portal_user, "x sudo"}},
                     RoleMode::single_role),
         fix::dialog("hi1", {{Role::portal_user, "adduser user"}},
                     RoleMode::single_role)},
        RoleMode::single_role);
    const fs::path a = dir / "low.json";
    const fs::path b = dir / "high.json";
    fix::write_file(a, report_to_json(score_corpus(lows, lex, {}, {}, 1))
                           .dump(2) + "\n");
    fix::write_file(b, report_to_json(score_corpus(highs, lex, {}, {}, 1))
                           .dump(2) + "\n");
    auto out = dir / "disjoint";
    REQUIRE(run_cli("profile " + a.string() + " " + b.string() + " --out " +
                    out.string()).code == 0);
    for (const auto& row :
         json::parse(fix::read_file(out / "ks.json"))["pairs"]) {
      if (row.at("level") == "utterance") CHECK(row.at("statistic") == 1.0);
    }
  }
  SUBCASE("one report is not enough") {
    CHECK(run_cli("profile " + hr_report + " --out " + dir.string()).code ==
          2);
  }
}

TEST_CASE("cluster writes signatures and centroids") {
  auto dir = fix::scratch_dir("cli_cluster");
  auto templates = fix::planted_templates();
  templates.resize(3);
  auto corpus = fix::planted_corpus(11, templates, 12, 4);
  fix::write_file(dir / "corpus.jsonl", fix::corpus_to_jsonl(corpus));

  DomainProfile profile;
  profile.lexicon = fix::micro_lexicon();
  profile.role_mode = RoleMode::single_role;
  profile.max_turns = corpus.max_turns();
  save_domain_profile(profile, dir / "lex.json");

  const std::string base = "cluster --corpus " + (dir / "corpus.jsonl").string() +
                           " --lexicon " + (dir / "lex.json").string() +
                           " --baskets 5 --k 3 --seed 4";
  auto out = dir / "run1";
  REQUIRE(run_cli(base + " --out " + out.string()).code == 0);

  auto j = json::parse(fix::read_file(out / "signature.json"));
  CHECK(j.at("k") == 3);
  CHECK(j.at("n_baskets") == 5);
  CHECK(j.at("dialogs_clustered").get<int>() + j.at("dialogs_too_short").get<int>() ==
        36);
  REQUIRE(j.at("centroids").size() == 3);
  for (const auto& c : j["centroids"]) CHECK(c.size() == 5);
  CHECK(j.at("assignments").size() == j.at("dialogs_clustered").get<std::size_t>());

  const std::string csv = fix::read_file(out / "centroids.csv");
  CHECK(csv.rfind("cluster,basket,value\n", 0) == 0);
  CHECK(count_lines(csv) == 1 + 3 * 5);

  SUBCASE("same seed reruns are byte-identical") {
    auto out2 = dir / "run2";
    REQUIRE(run_cli(base + " --out " + out2.string()).code == 0);
    CHECK(fix::read_file(out2 / "signature.json") ==
          fix::read_file(out / "signature.json"));
    CHECK(fix::read_file(out2 / "centroids.csv") == csv);
  }
  SUBCASE("flag validation") {
    CHECK(run_cli(base + " --trim nonsense --out " + dir.string()).code == 2);
    CHECK(run_cli(base + " --trim 15 --out " + dir.string()).code == 2);
    auto no_baskets = "cluster --corpus " + (dir / "corpus.jsonl").string() +
                      " --lexicon " + (dir / "lex.json").string();
    CHECK(run_cli(no_baskets + " --baskets 0 --out " + dir.string()).code ==
          2);
    CHECK(run_cli(no_baskets + " --k 0 --out " + dir.string()).code == 2);
  }
}

TEST_CASE("roles splits complexity by speaker") {
  auto dir = fix::scratch_dir("cli_roles");
  auto lexicon_path = built_lexicon(dir, "hr.jsonl");
  REQUIRE(run_cli("roles --corpus " + fixture("hr.jsonl") + " --lexicon " +
                  lexicon_path.string() + " --out " + dir.string()).code == 0);
  auto j = json::parse(fix::read_file(dir / "roles.json"));
  REQUIRE(j.at("roles").size() == 2);
  for (const auto& row : j["roles"]) {
    CHECK((row.at("role") == "customer" || row.at("role") == "agent"));
    CHECK(row.at("n").get<int>() > 0);
    CHECK(row.at("mean").get<double>() >= 0.0);
    CHECK(row.at("mean").get<double>() <= 1.0);
  }

  auto csv_out = dir / "csv";
  REQUIRE(run_cli("roles --corpus " + fixture("hr.jsonl") + " --lexicon " +
                  lexicon_path.string() + " --format csv --out " +
                  csv_out.string()).code == 0);
  CHECK(fix::read_file(csv_out / "roles.csv").rfind("role,n,mean\n", 0) == 0);

  auto single_lex = built_lexicon(dir, "ubuntu.jsonl", "--role-mode single_role");
  auto res = run_cli("roles --corpus " + fixture("ubuntu.jsonl") +
                     " --lexicon " + single_lex.string() + " --out " +
                     dir.string());
  CHECK(res.code == 2);
  CHECK(res.err.find("two-role") != std::string::npos);
}

TEST_CASE("simulate allocates the corpus under both policies") {
  auto dir = fix::scratch_dir("cli_simulate");
  auto lexicon_path = built_lexicon(dir, "hr.jsonl");
  fix::write_file(dir / "spec.json",
                  json{{"agents", json::array({json{{"dialogs", 10},
                                                    {"hours", 20.0}},
                                               json{{"dialogs", 8},
                                                    {"hours", 16.0}}})},
                       {"seed", 5}}
                      .dump());
  const std::string base = "simulate --corpus " + fixture("hr.jsonl") +
                           " --lexicon " + lexicon_path.string() + " --spec " +
                           (dir / "spec.json").string();

  auto out = dir / "run1";
  REQUIRE(run_cli(base + " --out " + out.string()).code == 0);

  auto profile = load_domain_profile(lexicon_path);
  auto corpus = parse_corpus_file(fixture("hr.jsonl"), {}).corpus;
  SimulationSpec spec;
  spec.agents = {{10, 20.0}, {8, 16.0}};
  spec.seed = 5;
  auto table =
      simulate_allocation(corpus, profile.lexicon, profile.config, spec);
  CHECK(fix::read_file(out / "simulation.json") ==
        simulation_table_to_json(table).dump(2) + "\n");

  SUBCASE("spec seed and --seed override agree") {
    auto out2 = dir / "override";
    fix::write_file(dir / "spec0.json",
                    json{{"agents", json::array({json{{"dialogs", 10},
                                                      {"hours", 20.0}},
                                                 json{{"dialogs", 8},
                                                      {"hours", 16.0}}})}}
                        .dump());
    REQUIRE(run_cli("simulate --corpus " + fixture("hr.jsonl") +
                    " --lexicon " + lexicon_path.string() + " --spec " +
                    (dir / "spec0.json").string() + " --seed 5 --out " +
                    out2.string()).code == 0);
    CHECK(fix::read_file(out2 / "simulation.json") ==
          fix::read_file(out / "simulation.json"));
  }
  SUBCASE("csv format") {
    auto out2 = dir / "csv";
    REQUIRE(run_cli(base + " --format csv --out " + out2.string()).code == 0);
    const std::string csv = fix::read_file(out2 / "simulation.csv");
    CHECK(csv.rfind("policy,agent_id,dialogs,hours,omega1,omega2,omega3\n",
                    0) == 0);
    CHECK(count_lines(csv) == 1 + 4);
  }
  SUBCASE("dialog count mismatches are usage errors") {
    fix::write_file(dir / "short.json",
                    json{{"agents", json::array({json{{"dialogs", 3},
                                                      {"hours", 6.0}}})}}
                        .dump());
    auto res = run_cli("simulate --corpus " + fixture("hr.jsonl") +
                       " --lexicon " + lexicon_path.string() + " --spec " +
                       (dir / "short.json").string() + " --out " +
                       dir.string());
    CHECK(res.code == 2);
    CHECK(res.err.find("18") != std::string::npos);
  }
  SUBCASE("bad spec files") {
    fix::write_file(dir / "broken.json", "{nope");
    CHECK(run_cli("simulate --corpus " + fixture("hr.jsonl") + " --lexicon " +
                  lexicon_path.string() + " --spec " +
                  (dir / "broken.json").string() + " --out " +
                  dir.string()).code == 1);
    fix::write_file(dir / "empty.json", "{}");
    CHECK(run_cli("simulate --corpus " + fixture("hr.jsonl") + " --lexicon " +
                  lexicon_path.string() + " --spec " +
                  (dir / "empty.json").string() + " --out " +
                  dir.string()).code == 2);
  }
}

TEST_CASE("evaluate computes agent metrics from a ledger") {
  auto dir = fix::scratch_dir("cli_evaluate");
  auto lexicon_path = built_lexicon(dir, "hr.jsonl");
  auto corpus = parse_corpus_file(fixture("hr.jsonl"), {}).corpus;
  REQUIRE(corpus.dialogs.size() >= 4);
  const std::string d0 = corpus.dialogs[0].id;
  const std::string d1 = corpus.dialogs[1].id;
  const std::string d2 = corpus.dialogs[2].id;
  const std::string d3 = corpus.dialogs[3].id;

  std::ostringstream ledger;
  ledger << "agent_id,dialog_id,csat,duration_hours\n";
  ledger << "alice," << d0 << ",0.9,2.0\n";
  ledger << "alice," << d1 << ",0.7,1.0\n";
  ledger << "bob," << d2 << ",0.8,3.0\n";
  ledger << "bob," << d3 << ",1.0,1.0\n";
  fix::write_file(dir / "ledger.csv", ledger.str());

  SUBCASE("without a report omega3 stays null") {
    auto out = dir / "bare";
    REQUIRE(run_cli("evaluate --ledger " + (dir / "ledger.csv").string() +
                    " --out " + out.string()).code == 0);
    auto j = json::parse(fix::read_file(out / "agents.json"));
    REQUIRE(j.at("agents").size() == 2);
    CHECK(j["agents"][0].at("agent_id") == "alice");
    CHECK(j["agents"][0].at("dialogs") == 2);
    CHECK(j["agents"][0].at("omega1").get<double>() == 0.8);
    CHECK(j["agents"][0].at("omega3").is_null());
    CHECK(j["agents"][1].at("agent_id") == "bob");
  }
  SUBCASE("a score report supplies complexities for omega3") {
    auto score_out = dir / "scores";
    REQUIRE(run_cli("score --corpus " + fixture("hr.jsonl") + " --lexicon " +
                    lexicon_path.string() + " --out " +
                    score_out.string()).code == 0);
    auto out = dir / "full";
    REQUIRE(run_cli("evaluate --ledger " + (dir / "ledger.csv").string() +
                    " --report " + (score_out / "report.json").string() +
                    " --out " + out.string() + " --format csv").code == 0);
    const std::string csv = fix::read_file(out / "agents.csv");
    CHECK(csv.rfind("agent_id,dialogs,total_hours,omega1,omega2,omega3\n",
                    0) == 0);
    CHECK(count_lines(csv) == 1 + 2);

    auto profile = load_domain_profile(lexicon_path);
    auto report =
        score_corpus(corpus, profile.lexicon, profile.config, LevelSet{}, 1);
    std::map<std::string, double> by_id;
    for (const auto& d : report.dialogs) by_id[d.dialog_id] = d.score;
    AgentLedger alice;
    alice.agent_id = "alice";
    alice.handled = {{d0, by_id.at(d0), 0.9, 2.0}, {d1, by_id.at(d1), 0.7, 1.0}};
    alice.total_hours = 3.0;
    std::ostringstream expected;
    expected << "alice,2,3,"
             << detail::format_double(omega1(alice)) << ','
             << detail::format_double(omega2(alice)) << ','
             << detail::format_double(omega3(alice)) << '\n';
    CHECK(csv.find(expected.str()) != std::string::npos);
  }
  SUBCASE("ledger ids missing from the report fail") {
    auto score_out = dir / "scores2";
    REQUIRE(run_cli("score --corpus " + fixture("hr.jsonl") + " --lexicon " +
                    lexicon_path.string() + " --out " +
                    score_out.string()).code == 0);
    fix::write_file(dir / "ghost.csv",
                    "agent_id,dialog_id,csat,duration_hours\n"
                    "alice,no-such-dialog,0.9,1.0\n");
    auto res = run_cli("evaluate --ledger " + (dir / "ghost.csv").string() +
                       " --report " + (score_out / "report.json").string() +
                       " --out " + dir.string());
    CHECK(res.code == 1);
    CHECK(res.err.find("no-such-dialog") != std::string::npos);
  }
  SUBCASE("missing ledger file") {
    CHECK(run_cli("evaluate --ledger " + (dir / "nope.csv").string() +
                  " --out " + dir.string()).code == 2);
  }
}

TEST_CASE("serve needs a config source") {
  auto res = run_cli("serve");
  CHECK(res.code == 2);
  CHECK(res.err.find("serve needs") != std::string::npos);
}

TEST_CASE("exit codes separate usage and data errors") {
  auto dir = fix::scratch_dir("cli_exit_codes");
  auto lexicon_path = built_lexicon(dir, "hr.jsonl");
  fix::write_file(dir / "broken.jsonl", "this is not json\n");
  auto res = run_cli("score --corpus " + (dir / "broken.jsonl").string() +
                     " --lexicon " + lexicon_path.string() + " --out " +
                     dir.string());
  CHECK(res.code == 1);
  CHECK(res.err.rfind("error:", 0) == 0);

  CHECK(run_cli("score --corpus " + fixture("hr.jsonl") + " --lexicon " +
                (dir / "missing.json").string() + " --out " +
                dir.string()).code == 2);
}
