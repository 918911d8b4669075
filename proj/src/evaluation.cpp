#include "dcx/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>

#include "dcx/detail/format.hpp"
#include "dcx/errors.hpp"
#include "dcx/rng.hpp"

namespace dcx {

using nlohmann::json;

void AgentLedger::validate() const {
  if (agent_id.empty()) throw DataError("ledger has an empty agent id");
  if (handled.empty()) {
    throw DataError("agent \"" + agent_id + "\" handled no dialogs");
  }
  if (!(total_hours > 0.0)) {
    throw DataError("agent \"" + agent_id + "\" has non-positive total hours");
  }
  double sum = 0.0;
  for (const HandledDialog& h : handled) {
    if (!(h.duration_hours > 0.0)) {
      throw DataError("dialog \"" + h.dialog_id +
                      "\" has a non-positive duration");
    }
    if (h.csat < 0.0 || h.csat > 1.0) {
      throw DataError("dialog \"" + h.dialog_id + "\" csat outside [0, 1]");
    }
    if (h.complexity && (*h.complexity < 0.0 || *h.complexity > 1.0)) {
      throw DataError("dialog \"" + h.dialog_id +
                      "\" complexity outside [0, 1]");
    }
    sum += h.duration_hours;
  }
  if (sum > total_hours * (1.0 + 1e-9) + 1e-12) {
    throw DataError("agent \"" + agent_id +
                    "\" durations exceed total hours (" +
                    detail::format_double(sum) + " > " +
                    detail::format_double(total_hours) + ")");
  }
}

double omega1(const AgentLedger& ledger) {
  if (ledger.handled.empty()) {
    throw DataError("omega1: agent \"" + ledger.agent_id +
                    "\" handled no dialogs");
  }
  double sum = 0.0;
  for (const HandledDialog& h : ledger.handled) sum += h.csat;
  return sum / static_cast<double>(ledger.handled.size());
}

double omega2(const AgentLedger& ledger) {
  if (!(ledger.total_hours > 0.0)) {
    throw DataError("omega2: agent \"" + ledger.agent_id +
                    "\" has non-positive total hours");
  }
  double sum = 0.0;
  for (const HandledDialog& h : ledger.handled) {
    sum += h.csat * h.duration_hours;
  }
  return sum / ledger.total_hours;
}

double omega3(const AgentLedger& ledger) {
  if (!(ledger.total_hours > 0.0)) {
    throw DataError("omega3: agent \"" + ledger.agent_id +
                    "\" has non-positive total hours");
  }
  double sum = 0.0;
  for (const HandledDialog& h : ledger.handled) {
    if (!h.complexity) {
      throw DataError("omega3: dialog \"" + h.dialog_id +
                      "\" has no complexity score");
    }
    sum += *h.complexity * h.csat * h.duration_hours;
  }
  return sum / ledger.total_hours;
}

namespace {

std::vector<std::string> split_csv_row(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c != '\r') {
      field.push_back(c);
    }
  }
  fields.push_back(std::move(field));
  return fields;
}

double parse_field_double(const std::string& s, const char* what,
                          std::size_t line_no) {
  try {
    std::size_t consumed = 0;
    const double v = std::stod(s, &consumed);
    if (consumed != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw DataError("ledger line " + std::to_string(line_no) + ": bad " +
                    what + " value \"" + s + "\"");
  }
}

}  // namespace

std::vector<AgentLedger> parse_agent_ledgers_csv(std::istream& in) {
  std::vector<AgentLedger> ledgers;
  std::map<std::string, std::size_t> index;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::vector<std::string> fields = split_csv_row(line);
    if (line_no == 1 && !fields.empty() && fields[0] == "agent_id") continue;
    if (fields.size() != 4) {
      throw DataError("ledger line " + std::to_string(line_no) +
                      ": expected 4 fields, got " +
                      std::to_string(fields.size()));
    }

    HandledDialog h;
    h.dialog_id = fields[1];
    h.csat = parse_field_double(fields[2], "csat", line_no);
    h.duration_hours = parse_field_double(fields[3], "duration_hours", line_no);

    auto [it, inserted] = index.emplace(fields[0], ledgers.size());
    if (inserted) {
      AgentLedger ledger;
      ledger.agent_id = fields[0];
      ledgers.push_back(std::move(ledger));
    }
    AgentLedger& ledger = ledgers[it->second];
    ledger.total_hours += h.duration_hours;
    ledger.handled.push_back(std::move(h));
  }

  if (ledgers.empty()) throw DataError("ledger file has no rows");
  for (const AgentLedger& ledger : ledgers) ledger.validate();
  return ledgers;
}

std::string_view to_string(AllocationPolicy p) {
  return p == AllocationPolicy::random ? "random" : "ascending_complexity";
}

void SimulationSpec::validate() const {
  if (agents.empty()) throw UsageError("simulation spec lists no agents");
  for (std::size_t i = 0; i < agents.size(); ++i) {
    if (agents[i].dialog_count == 0) {
      throw UsageError("simulation agent " + std::to_string(i + 1) +
                       " has a zero dialog count");
    }
    if (!(agents[i].total_hours > 0.0)) {
      throw UsageError("simulation agent " + std::to_string(i + 1) +
                       " has non-positive hours");
    }
  }
  if (policies.empty()) throw UsageError("simulation spec lists no policies");
  if (csat_constant < 0.0 || csat_constant > 1.0) {
    throw UsageError("csat constant must lie in [0, 1]");
  }
}

SimulationSpec simulation_spec_from_json(const json& j) {
  if (!j.is_object()) {
    throw UsageError("simulation spec must be a JSON object");
  }
  SimulationSpec spec;
  try {
    for (const json& agent : j.at("agents")) {
      AgentSpec a;
      a.dialog_count = agent.at("dialogs").get<std::size_t>();
      a.total_hours = agent.at("hours").get<double>();
      spec.agents.push_back(a);
    }
    if (auto it = j.find("policies"); it != j.end()) {
      spec.policies.clear();
      for (const json& p : *it) {
        const std::string name = p.get<std::string>();
        if (name == "random") {
          spec.policies.push_back(AllocationPolicy::random);
        } else if (name == "ascending_complexity") {
          spec.policies.push_back(AllocationPolicy::ascending_complexity);
        } else {
          throw UsageError("unknown allocation policy \"" + name + "\"");
        }
      }
    }
    spec.csat_constant = j.value("csat_constant", spec.csat_constant);
    spec.seed = j.value("seed", spec.seed);
  } catch (const json::exception& e) {
    throw UsageError(std::string("malformed simulation spec: ") + e.what());
  }
  spec.validate();
  return spec;
}

json simulation_spec_to_json(const SimulationSpec& spec) {
  json agents = json::array();
  for (const AgentSpec& a : spec.agents) {
    agents.push_back({{"dialogs", a.dialog_count}, {"hours", a.total_hours}});
  }
  json policies = json::array();
  for (AllocationPolicy p : spec.policies) {
    policies.push_back(std::string(to_string(p)));
  }
  return json{{"agents", std::move(agents)},
              {"policies", std::move(policies)},
              {"csat_constant", spec.csat_constant},
              {"seed", spec.seed}};
}

SimulationTable simulate_allocation(const Corpus& corpus, const Lexicon& lexicon,
                                    const ComplexityConfig& config,
                                    const SimulationSpec& spec) {
  spec.validate();
  if (corpus.dialogs.empty()) {
    throw EmptyCorpusError("simulate_allocation: empty corpus");
  }

  std::size_t required = 0;
  for (const AgentSpec& a : spec.agents) required += a.dialog_count;
  if (required != corpus.dialogs.size()) {
    throw UsageError("simulation needs exactly " + std::to_string(required) +
                     " dialogs, corpus has " +
                     std::to_string(corpus.dialogs.size()));
  }

  struct DialogFacts {
    std::size_t corpus_index = 0;
    double complexity = 0.0;
    std::size_t word_count = 0;
  };

  const int max_turns = corpus.max_turns();
  std::vector<DialogFacts> facts(corpus.dialogs.size());
  for (std::size_t i = 0; i < corpus.dialogs.size(); ++i) {
    const Dialog& d = corpus.dialogs[i];
    facts[i].corpus_index = i;
    facts[i].complexity =
        dialog_complexity(d, lexicon, config, max_turns).score;
    std::size_t words = 0;
    for (const Turn& t : d.turns) {
      for (const Utterance& u : t.utterances) words += token_count(u.text);
    }
    facts[i].word_count = words;
  }

  SimulationTable table;
  for (AllocationPolicy policy : spec.policies) {
    std::vector<std::size_t> order(facts.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    if (policy == AllocationPolicy::random) {
      Rng rng(spec.seed);
      rng.shuffle(order);
    } else {
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (facts[a].complexity != facts[b].complexity) {
          return facts[a].complexity < facts[b].complexity;
        }
        return corpus.dialogs[a].id < corpus.dialogs[b].id;
      });
    }

    std::size_t cursor = 0;
    for (std::size_t ai = 0; ai < spec.agents.size(); ++ai) {
      const AgentSpec& aspec = spec.agents[ai];
      AgentLedger ledger;
      ledger.agent_id = "agent" + std::to_string(ai + 1);
      ledger.total_hours = aspec.total_hours;

      std::size_t agent_words = 0;
      for (std::size_t d = 0; d < aspec.dialog_count; ++d) {
        agent_words += facts[order[cursor + d]].word_count;
      }
      if (agent_words == 0) {
        throw DataError("simulation: agent " + ledger.agent_id +
                        " drew only word-free dialogs");
      }

      for (std::size_t d = 0; d < aspec.dialog_count; ++d) {
        const DialogFacts& f = facts[order[cursor + d]];
        HandledDialog h;
        h.dialog_id = corpus.dialogs[f.corpus_index].id;
        h.complexity = f.complexity;
        h.csat = spec.csat_constant;
        h.duration_hours = aspec.total_hours *
                           static_cast<double>(f.word_count) /
                           static_cast<double>(agent_words);
        ledger.handled.push_back(std::move(h));
      }
      cursor += aspec.dialog_count;

      SimulationRow row;
      row.policy = policy;
      row.agent_id = ledger.agent_id;
      row.dialogs = ledger.handled.size();
      row.hours = ledger.total_hours;
      row.omega1 = omega1(ledger);
      row.omega2 = omega2(ledger);
      row.omega3 = omega3(ledger);
      table.rows.push_back(std::move(row));
    }
  }
  return table;
}

json simulation_table_to_json(const SimulationTable& table) {
  json rows = json::array();
  for (const SimulationRow& r : table.rows) {
    rows.push_back({{"policy", std::string(to_string(r.policy))},
                    {"agent_id", r.agent_id},
                    {"dialogs", r.dialogs},
                    {"hours", r.hours},
                    {"omega1", r.omega1},
                    {"omega2", r.omega2},
                    {"omega3", r.omega3}});
  }
  return json{{"rows", std::move(rows)}};
}

void simulation_table_to_csv(const SimulationTable& table, std::ostream& out) {
  using detail::csv_escape;
  using detail::format_double;

  out << "policy,agent_id,dialogs,hours,omega1,omega2,omega3\n";
  for (const SimulationRow& r : table.rows) {
    out << to_string(r.policy) << ',' << csv_escape(r.agent_id) << ','
        << r.dialogs << ',' << format_double(r.hours) << ','
        << format_double(r.omega1) << ',' << format_double(r.omega2) << ','
        << format_double(r.omega3) << '\n';
  }
}

}  // namespace dcx
