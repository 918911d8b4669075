#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dcx/complexity.hpp"
#include "dcx/corpus.hpp"
#include "dcx/lexicon.hpp"

#include "json.hpp"

namespace dcx {

/// One dialog handled by an agent: its complexity score, the customer
/// satisfaction rating and the handling time in hours.
struct HandledDialog {
  std::string dialog_id;
  std::optional<double> complexity;  // in [0,1] when present
  double csat = 0.0;                 // in [0,1]
  double duration_hours = 0.0;       // > 0
};

struct AgentLedger {
  std::string agent_id;
  std::vector<HandledDialog> handled;
  double total_hours = 0.0;  // >= sum of durations; slack is idle time

  void validate() const;  // throws DataError on violated invariants
};

/// Plain mean satisfaction rating.
double omega1(const AgentLedger& ledger);

/// Satisfaction weighted by the share of total time spent per dialog.
double omega2(const AgentLedger& ledger);

/// Satisfaction weighted by complexity and time share. Requires a complexity
/// on every handled dialog.
double omega3(const AgentLedger& ledger);

/// Reads `agent_id,dialog_id,csat,duration_hours` rows (header optional) into
/// one ledger per agent, total_hours = sum of that agent's durations.
std::vector<AgentLedger> parse_agent_ledgers_csv(std::istream& in);

enum class AllocationPolicy { random, ascending_complexity };

std::string_view to_string(AllocationPolicy p);

struct AgentSpec {
  std::size_t dialog_count = 0;
  double total_hours = 0.0;
};

enum class DurationModel { proportional_to_words };

struct SimulationSpec {
  std::vector<AgentSpec> agents;
  std::vector<AllocationPolicy> policies = {
      AllocationPolicy::random, AllocationPolicy::ascending_complexity};
  double csat_constant = 0.9;
  std::uint64_t seed = 0;
  DurationModel duration_model = DurationModel::proportional_to_words;

  void validate() const;  // throws UsageError
};

SimulationSpec simulation_spec_from_json(const nlohmann::json& j);
nlohmann::json simulation_spec_to_json(const SimulationSpec& spec);

struct SimulationRow {
  AllocationPolicy policy = AllocationPolicy::random;
  std::string agent_id;
  std::size_t dialogs = 0;
  double hours = 0.0;
  double omega1 = 0.0;
  double omega2 = 0.0;
  double omega3 = 0.0;
};

struct SimulationTable {
  std::vector<SimulationRow> rows;  // policy-major, agents in spec order
};

/// Scores every dialog, allocates them to agents under each policy and
/// evaluates the agents. Random allocation shuffles with the spec seed and
/// deals counts in order; ascending allocation sorts by dialog score (ties by
/// id) and deals contiguous blocks. Per-dialog durations fill each agent's
/// hours proportionally to dialog word counts. The dialog count of the spec
/// must equal the corpus size.
SimulationTable simulate_allocation(const Corpus& corpus, const Lexicon& lexicon,
                                    const ComplexityConfig& config,
                                    const SimulationSpec& spec);

nlohmann::json simulation_table_to_json(const SimulationTable& table);
void simulation_table_to_csv(const SimulationTable& table, std::ostream& out);

}  // namespace dcx
