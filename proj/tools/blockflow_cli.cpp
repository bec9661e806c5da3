#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "blockflow/contract.hpp"
#include "blockflow/dataset.hpp"
#include "blockflow/scoring.hpp"
#include "blockflow/sim.hpp"

using namespace blockflow;

static std::string micro_str(Micro v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%lld.%06lld", (long long)(v / kMicroOne),
                (long long)(v % kMicroOne));
  return buf;
}

static int cmd_run(const std::string& config, int64_t seed,
                   const std::string& out) {
  KeyValues kv = KeyValues::parse_file(config);
  ExperimentConfig cfg = config_from_kv(kv);
  if (seed >= 0) cfg.seed = (uint64_t)seed;
  RunOutput ro = run_experiment(cfg);
  write_outputs(ro, out);
  std::cout << "wrote " << out << "/report.json\n";
  return 0;
}

static int cmd_suite(const std::string& id, uint64_t seed,
                     const std::string& out) {
  SuiteResult res = run_suite(id, out, seed);
  std::cout << res.report["summary"].dump(2) << "\n";
  if (!res.pass) {
    std::cerr << "suite " << id << ": criterion FAILED\n";
    return 2;
  }
  std::cout << "suite " << id << ": criterion passed\n";
  return 0;
}

static int cmd_score(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open matrix file: " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty()) continue;
    std::vector<double> row;
    for (const auto& cell : split(line, ',')) row.push_back(std::stod(trim(cell)));
    rows.push_back(row);
  }
  ScoreMatrix sm = ScoreMatrix::from_doubles(rows);
  ScoreBreakdown b = contract_scores_fixed_point(sm);
  std::cout << "agent,m,m_prime,d,d_prime,p\n";
  for (size_t k = 0; k < b.p.size(); ++k)
    std::cout << k << "," << micro_str(b.m[k]) << ","
              << micro_str(b.m_scaled[k]) << "," << micro_str(b.d[k]) << ","
              << micro_str(b.d_scaled[k]) << "," << micro_str(b.p[k]) << "\n";
  return 0;
}

static int cmd_gen_data(int64_t rows, uint64_t seed) {
  RawTable raw = make_synth_raw(rows, seed);
  for (size_t c = 0; c < raw.col_names.size(); ++c)
    std::cout << raw.col_names[c] << (c + 1 < raw.col_names.size() ? "," : "\n");
  for (const auto& row : raw.rows)
    for (size_t c = 0; c < row.size(); ++c)
      std::cout << row[c] << (c + 1 < row.size() ? "," : "\n");
  return 0;
}

int main(int argc, char** argv) {
  CLI::App app{"deterministic accountable federated learning simulator"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run one experiment from a config file");
  std::string run_config, run_out;
  int64_t run_seed = -1;
  run->add_option("--config", run_config, "key=value config file")->required();
  run->add_option("--seed", run_seed, "master seed (overrides the config)");
  run->add_option("--out", run_out, "output directory")->required();

  auto* suite = app.add_subcommand("suite", "run a pinned experiment suite");
  std::string suite_id, suite_out;
  uint64_t suite_seed = 0;
  suite->add_option("id", suite_id, "exp1|exp2|exp3|exp4|gas")->required();
  suite->add_option("--out", suite_out, "output directory")->required();
  suite->add_option("--seed", suite_seed, "override the pinned suite seed");

  auto* score = app.add_subcommand("score", "score a matrix CSV (row = evaluator)");
  std::string score_matrix;
  score->add_option("--matrix", score_matrix, "CSV of scores in [0,1]")->required();

  auto* gas = app.add_subcommand("gas", "evaluate the per-agent gas formula");
  int64_t gas_n = 0, gas_r = 0;
  gas->add_option("--agents", gas_n, "number of agents")->required();
  gas->add_option("--rounds", gas_r, "number of rounds")->required();

  auto* gen = app.add_subcommand("gen-data", "print a synthetic dataset CSV");
  int64_t gen_rows = 0;
  uint64_t gen_seed = 0;
  gen->add_option("--rows", gen_rows, "row count")->required();
  gen->add_option("--seed", gen_seed, "generator seed")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(run_config, run_seed, run_out);
    if (*suite) return cmd_suite(suite_id, suite_seed, suite_out);
    if (*score) return cmd_score(score_matrix);
    if (*gas) {
      std::cout << gas_estimate(gas_n, gas_r) << "\n";
      return 0;
    }
    if (*gen) return cmd_gen_data(gen_rows, gen_seed);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
