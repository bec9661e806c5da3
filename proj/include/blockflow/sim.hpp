#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "blockflow/agent.hpp"
#include "blockflow/config.hpp"

namespace blockflow {

struct ExperimentConfig {
  std::string name = "custom";
  int n_agents = 5;
  int rounds = 1;
  double epsilon = 1.0;
  double alpha = 0.1;
  double eta = 0.5;
  int epochs = 400;
  double bond = 100.0;           // currency units per agent
  int64_t refund_num = 0;        // 0/0 = default 1/(rounds+1)
  int64_t refund_den = 0;
  int64_t rows = 10000;          // synthetic source rows
  uint64_t seed = 1;
  std::vector<double> rel_sizes;            // empty = equal shards
  std::map<int, AgentStrategy> strategies;  // by agent index; absent = honest
  std::vector<std::pair<int, int>> blocked; // directed fetch blocks (from, to)
};

std::string account_name(int index, int n_agents);

// Config file mapping. Recognized keys: agents, rounds, epsilon, alpha, eta,
// epochs, bond, rows, seed, refund_num, refund_den, sizes (comma list),
// strategy.<i> = honest|random_data|inverted_labels|fabricator|miss:<stage>,
// colluders (comma list of indices), blocked (comma list of from>to pairs).
ExperimentConfig config_from_kv(const KeyValues& kv);
nlohmann::ordered_json config_to_json(const ExperimentConfig& cfg);

struct RunOutput {
  nlohmann::ordered_json report;
  std::vector<nlohmann::ordered_json> txlog;
  std::vector<nlohmann::ordered_json> ledger;
};

// Deterministic full protocol run; the report is a pure function of cfg.
RunOutput run_experiment(const ExperimentConfig& cfg);

// Writes report.json, scores.csv, summary.csv, txlog.jsonl, ledger.csv.
void write_outputs(const RunOutput& out, const std::string& dir);

struct SuiteResult {
  nlohmann::ordered_json report;
  bool pass = false;
};

// Desk-scale analogues of the four protocol experiments plus the gas table.
// seed = 0 selects the pinned default. Writes suite outputs under out_dir
// (pass an empty string to skip writing).
SuiteResult run_suite(const std::string& id, const std::string& out_dir,
                      uint64_t seed = 0);

}  // namespace blockflow
