#include <filesystem>
#include <fstream>
#include <set>

#include "doctest.h"

#include "blockflow/agent.hpp"
#include "blockflow/rng.hpp"
#include "blockflow/sim.hpp"

using namespace blockflow;

static std::vector<Shard> shards_for(int n, int64_t rows, uint64_t seed) {
  Dataset full = make_synth(rows, split_seed(seed, "synth"));
  return partition(full, n, seed).first;
}

// The per-stage loop run_experiment uses, for tests that need the contract.
static void run_rounds(Contract& c, Store& s, std::vector<Agent>& agents) {
  for (int r = 1; r <= c.config().rounds; ++r) {
    for (auto& a : agents)
      if (c.is_active(a.account())) a.act_train(c, s, r);
    c.advance_clock(c.stage_deadline());
    for (auto& a : agents)
      if (c.is_active(a.account())) a.act_retrieve_fetch(c, s, r);
    for (auto& a : agents)
      if (c.is_active(a.account())) a.act_retrieve_report(c, s, r);
    c.advance_clock(c.stage_deadline());
    for (auto& a : agents)
      if (c.is_active(a.account())) a.act_evaluate(c, s, r);
    c.advance_clock(c.stage_deadline());
    for (auto& a : agents)
      if (c.is_active(a.account())) a.act_reveal(c, r);
    c.advance_clock(c.stage_deadline());
    c.compute_round();
    for (auto& a : agents)
      if (c.is_active(a.account())) a.act_aggregate(c, s, r);
  }
}

TEST_CASE("strategy names") {
  CHECK(strategy_name({StrategyKind::Honest, {}, Stage::Train}) == "honest");
  CHECK(strategy_name({StrategyKind::RandomData, {}, Stage::Train}) ==
        "random_data");
  CHECK(strategy_name({StrategyKind::InvertedLabels, {}, Stage::Train}) ==
        "inverted_labels");
  CHECK(strategy_name({StrategyKind::ScoreFabricator, {"x"}, Stage::Train}) ==
        "fabricator");
  CHECK(strategy_name({StrategyKind::DeadlineMisser, {}, Stage::EvalReveal}) ==
        "miss:eval_reveal");
}

TEST_CASE("strategies transform only the shard") {
  auto shards = shards_for(2, 300, 1);
  HyperParams hp;
  Agent honest("h", 0, shards[0], {}, hp, 7);
  CHECK(honest.shard().train.y == shards[0].train.y);
  CHECK(honest.shard().d_i == shards[0].d_i);

  Agent inv("i", 0, shards[0], {StrategyKind::InvertedLabels, {}, Stage::Train},
            hp, 7);
  CHECK((inv.shard().train.y + shards[0].train.y).isOnes());
  CHECK(inv.shard().train.X == shards[0].train.X);

  Agent rnd("r", 0, shards[0], {StrategyKind::RandomData, {}, Stage::Train},
            hp, 7);
  CHECK(rnd.shard().d_i == shards[0].d_i);
  CHECK(rnd.shard().train.cols() == shards[0].train.cols());
  CHECK(rnd.shard().train.y != shards[0].train.y);

  CHECK_THROWS(Agent("f", 0, shards[0],
                     {StrategyKind::ScoreFabricator, {}, Stage::Train}, hp, 7));
}

TEST_CASE("account names pad to the roster width") {
  CHECK(account_name(0, 1) == "agent00");
  CHECK(account_name(3, 20) == "agent03");
  CHECK(account_name(19, 20) == "agent19");
  CHECK(account_name(7, 150) == "agent007");
}

TEST_CASE("experiment config parses from key=value text") {
  KeyValues kv = KeyValues::parse_text(
      "# comment\n"
      "agents = 5\n"
      "rounds = 3\n"
      "epsilon = 0.25\n"
      "sizes = 1, 2, 2, 4, 4\n"
      "colluders = 0, 1\n"
      "strategy.0 = fabricator\n"
      "strategy.1 = fabricator\n"
      "strategy.2 = miss:eval_reveal\n"
      "strategy.3 = inverted_labels\n"
      "blocked = 0>1, 4>2\n"
      "seed = 99\n"
      "bond = 50\n"
      "rows = 2000\n");
  ExperimentConfig cfg = config_from_kv(kv);
  CHECK(cfg.n_agents == 5);
  CHECK(cfg.rounds == 3);
  CHECK(cfg.epsilon == 0.25);
  CHECK(cfg.rel_sizes == std::vector<double>{1, 2, 2, 4, 4});
  CHECK(cfg.seed == 99);
  CHECK(cfg.bond == 50.0);
  CHECK(cfg.rows == 2000);
  REQUIRE(cfg.strategies.count(0) == 1);
  CHECK(cfg.strategies.at(0).kind == StrategyKind::ScoreFabricator);
  CHECK(cfg.strategies.at(0).colluders ==
        std::set<Account>{"agent00", "agent01"});
  CHECK(cfg.strategies.at(2).kind == StrategyKind::DeadlineMisser);
  CHECK(cfg.strategies.at(2).miss_stage == Stage::EvalReveal);
  CHECK(cfg.strategies.at(3).kind == StrategyKind::InvertedLabels);
  CHECK(cfg.strategies.count(4) == 0);
  CHECK(cfg.blocked ==
        std::vector<std::pair<int, int>>{{0, 1}, {4, 2}});

  CHECK_THROWS(config_from_kv(
      KeyValues::parse_text("agents = 2\nstrategy.5 = honest\n")));
  CHECK_THROWS(config_from_kv(
      KeyValues::parse_text("agents = 2\nstrategy.0 = bogus\n")));
  CHECK_THROWS(config_from_kv(
      KeyValues::parse_text("agents = 2\nblocked = 1-0\n")));
}

TEST_CASE("config validation rejects impossible runs") {
  ExperimentConfig cfg;
  cfg.rows = 20;
  CHECK_THROWS(run_experiment(cfg));
  cfg = ExperimentConfig{};
  cfg.n_agents = 0;
  CHECK_THROWS(run_experiment(cfg));
  cfg = ExperimentConfig{};
  cfg.rel_sizes = {1.0, 2.0};  // wrong length for 5 agents
  CHECK_THROWS(run_experiment(cfg));
  cfg = ExperimentConfig{};
  cfg.blocked = {{0, 9}};
  CHECK_THROWS(run_experiment(cfg));
}

TEST_CASE("single agent gets the whole pool back") {
  ExperimentConfig cfg;
  cfg.n_agents = 1;
  cfg.rows = 900;
  cfg.epochs = 60;
  cfg.seed = 3;
  RunOutput out = run_experiment(cfg);
  const auto& rep = out.report;
  CHECK(rep["final"]["stage"] == "finished");
  CHECK(rep["rounds"][0]["p"] == nlohmann::ordered_json::array({kMicroOne}));
  CHECK(rep["final"]["payouts"]["agent00"].get<Micro>() == 100 * kMicroOne);
  CHECK(rep["final"]["pool"].get<Micro>() == 0);
  CHECK(rep["final"]["conserved"] == true);
  CHECK(rep["final"]["model_hashes"].size() == 1);
  CHECK(rep["final"]["model_hashes"]["agent00"].get<std::string>().size() == 64);
  CHECK(rep["gas_estimate"] == 1051008);

  auto dir = std::filesystem::temp_directory_path() / "bf_run_out";
  std::filesystem::remove_all(dir);
  write_outputs(out, dir.string());
  for (const char* f : {"report.json", "scores.csv", "summary.csv",
                        "txlog.jsonl", "ledger.csv"})
    CHECK(std::filesystem::exists(dir / f));
  std::ifstream sc(dir / "scores.csv");
  std::string header, line;
  std::getline(sc, header);
  CHECK(header == "round,agent,m,m_prime,d,d_prime,p,payout");
  std::getline(sc, line);
  auto parts = split(line, ',');
  REQUIRE(parts.size() == 8);
  CHECK(parts[0] == "1");
  CHECK(parts[1] == "0");
  CHECK(parts[6] == "1.000000");  // p
  std::filesystem::remove_all(dir);
}

TEST_CASE("train misser forfeits and survivors share one model") {
  ExperimentConfig cfg;
  cfg.n_agents = 5;
  cfg.rows = 1500;
  cfg.epochs = 60;
  cfg.seed = 5;
  cfg.strategies[2] = {StrategyKind::DeadlineMisser, {}, Stage::Train};
  RunOutput out = run_experiment(cfg);
  const auto& rep = out.report;
  REQUIRE(rep["final"]["eliminated"].size() == 1);
  CHECK(rep["final"]["eliminated"][0]["account"] == "agent02");
  CHECK(rep["final"]["eliminated"][0]["reason"] == "train_deadline");
  CHECK(rep["final"]["eliminated"][0]["round"] == 1);
  CHECK(rep["rounds"][0]["active"].size() == 4);
  CHECK(rep["final"]["conserved"] == true);
  const auto& hashes = rep["final"]["model_hashes"];
  REQUIRE(hashes.size() == 4);
  std::set<std::string> distinct;
  for (const auto& [a, h] : hashes.items()) distinct.insert(h.get<std::string>());
  CHECK(distinct.size() == 1);
}

TEST_CASE("fabricator ring shows in the matrix and is zeroed") {
  const int n = 5;
  auto shards = shards_for(n, 2000, 11);
  std::set<Account> ring = {account_name(0, n), account_name(1, n)};
  HyperParams hp;
  hp.epochs = 60;
  std::vector<Agent> agents;
  for (int i = 0; i < n; ++i) {
    AgentStrategy st;
    if (i < 2) st = {StrategyKind::ScoreFabricator, ring, Stage::Train};
    agents.emplace_back(account_name(i, n), i, std::move(shards[(size_t)i]),
                        st, hp, 11);
  }
  ContractConfig ccfg;
  ccfg.rounds = 1;
  for (int i = 0; i < n; ++i) ccfg.allowlist.push_back(account_name(i, n));
  Contract c(ccfg);
  Store s;
  for (auto& a : agents) c.enroll(a.account(), ccfg.bond);
  run_rounds(c, s, agents);

  const RoundResult& rr = c.round_result(1);
  REQUIRE(rr.active.size() == 5);
  for (int e : {0, 1}) {
    CHECK(rr.matrix.s[(size_t)e] ==
          std::vector<Micro>{kMicroOne, kMicroOne, 0, 0, 0});
    CHECK(rr.scores.p[(size_t)e] == 0);  // deviation >= 1/2 from honest medians
  }
  for (int h : {2, 3, 4}) CHECK(rr.scores.p[(size_t)h] > 0);

  // commit digests are all distinct: fresh salts hide equal scores
  std::set<std::string> digests;
  int commits = 0;
  for (const auto& e : c.txlog()) {
    if (e["op"] != "commit_score") continue;
    ++commits;
    digests.insert(e["args"]["digest"].get<std::string>());
  }
  CHECK(commits == 25);
  CHECK(digests.size() == 25);
  CHECK(c.conserved());
}

TEST_CASE("blocked source falls back to a re-hosted copy") {
  ExperimentConfig cfg;
  cfg.n_agents = 3;
  cfg.rows = 450;
  cfg.epochs = 25;
  cfg.seed = 9;
  cfg.blocked = {{1, 0}};  // agent01 cannot reach agent00 directly
  RunOutput out = run_experiment(cfg);
  CHECK(out.report["final"]["eliminated"].empty());
  CHECK(out.report["final"]["model_hashes"].size() == 3);
}

TEST_CASE("an isolated agent fails the retrieval majority") {
  ExperimentConfig cfg;
  cfg.n_agents = 3;
  cfg.rows = 450;
  cfg.epochs = 25;
  cfg.seed = 9;
  cfg.blocked = {{1, 0}, {1, 2}};
  RunOutput out = run_experiment(cfg);
  REQUIRE(out.report["final"]["eliminated"].size() == 1);
  CHECK(out.report["final"]["eliminated"][0]["account"] == "agent01");
  CHECK(out.report["final"]["eliminated"][0]["reason"] == "retrieval_majority");
  CHECK(out.report["final"]["conserved"] == true);
}

TEST_CASE("late fetch covers models first obtained by a late re-hoster") {
  // agents 0 and 1 cannot reach 3 or 4; agent 2's second-pass fetch of model 3
  // lands after 0 and 1 already retried, so only the evaluation-time retry
  // (through agent 2's re-hosted copy) lets them score and aggregate it.
  ExperimentConfig cfg;
  cfg.n_agents = 5;
  cfg.rows = 2000;
  cfg.epochs = 60;
  cfg.seed = 13;
  cfg.blocked = {{0, 3}, {0, 4}, {1, 3}, {1, 4}, {2, 3}};
  RunOutput out = run_experiment(cfg);
  const auto& rep = out.report;
  CHECK(rep["final"]["eliminated"].empty());
  for (const auto& p : rep["rounds"][0]["p"]) CHECK(p.get<Micro>() > 0);
  const auto& hashes = rep["final"]["model_hashes"];
  REQUIRE(hashes.size() == 5);
  std::set<std::string> distinct;
  for (const auto& [a, h] : hashes.items()) distinct.insert(h.get<std::string>());
  CHECK(distinct.size() == 1);
}

TEST_CASE("honest majority is safe across randomized configs") {
  Rng rng(2026);
  const StrategyKind kinds[] = {StrategyKind::RandomData,
                                StrategyKind::InvertedLabels,
                                StrategyKind::ScoreFabricator};
  const Stage misses[] = {Stage::Train, Stage::Retrieve, Stage::EvalCommit,
                          Stage::EvalReveal};
  for (int it = 0; it < 50; ++it) {
    int n = 3 + (int)rng.bounded(4);
    int max_m = (n - 1) / 2;
    int m = (int)rng.bounded((uint64_t)max_m + 1);
    ExperimentConfig cfg;
    cfg.n_agents = n;
    cfg.rounds = 1 + (int)rng.bounded(2);
    cfg.rows = 1500;
    cfg.epochs = 60;
    cfg.epsilon = 1.0 + rng.uniform01();
    cfg.seed = rng.next_u64();
    std::set<Account> ring;
    for (int i = 0; i < m; ++i) ring.insert(account_name(i, n));
    for (int i = 0; i < m; ++i) {
      AgentStrategy st;
      uint64_t pick = rng.bounded(4);
      if (pick < 3) {
        st.kind = kinds[pick];
        if (st.kind == StrategyKind::ScoreFabricator) st.colluders = ring;
      } else {
        st.kind = StrategyKind::DeadlineMisser;
        st.miss_stage = misses[rng.bounded(4)];
      }
      cfg.strategies[i] = st;
    }
    CAPTURE(it);
    CAPTURE(n);
    CAPTURE(m);
    RunOutput out = run_experiment(cfg);
    const auto& rep = out.report;
    CHECK(rep["final"]["conserved"] == true);
    std::set<std::string> adversaries;
    for (int i = 0; i < m; ++i) adversaries.insert(account_name(i, n));
    for (const auto& e : rep["final"]["eliminated"])
      CHECK(adversaries.count(e["account"].get<std::string>()) == 1);
    Micro hon = 0, adv = 0;
    for (const auto& [a, v] : rep["final"]["payouts"].items())
      (adversaries.count(a) ? adv : hon) += v.get<Micro>();
    CHECK(hon > adv);
  }
}

TEST_CASE("at the threat boundary the run still completes") {
  ExperimentConfig cfg;
  cfg.n_agents = 4;
  cfg.rows = 450;
  cfg.epochs = 25;
  cfg.seed = 17;
  std::set<Account> ring = {account_name(0, 4), account_name(1, 4)};
  for (int i = 0; i < 2; ++i)
    cfg.strategies[i] = {StrategyKind::ScoreFabricator, ring, Stage::Train};
  RunOutput out = run_experiment(cfg);  // M = N/2: no guarantee, no crash
  CHECK(out.report["final"]["stage"] == "finished");
  CHECK(out.report["final"]["conserved"] == true);
}

TEST_CASE("a malformed blob gets its poster cut at retrieval") {
  const int n = 4;
  auto shards = shards_for(n, 600, 19);
  HyperParams hp;
  hp.epochs = 30;
  std::vector<Agent> agents;
  for (int i = 1; i < n; ++i)
    agents.emplace_back(account_name(i, n), i, std::move(shards[(size_t)i]),
                        AgentStrategy{}, hp, 19);
  ContractConfig ccfg;
  ccfg.rounds = 1;
  for (int i = 0; i < n; ++i) ccfg.allowlist.push_back(account_name(i, n));
  Contract c(ccfg);
  Store s;
  c.enroll("agent00", ccfg.bond);
  for (auto& a : agents) c.enroll(a.account(), ccfg.bond);
  // agent00 posts bytes that are not a model and then goes silent
  ContentAddress junk = s.put("agent00", {'j', 'u', 'n', 'k', '!'});
  c.submit_model_address("agent00", junk);
  run_rounds(c, s, agents);
  CHECK_FALSE(c.is_active("agent00"));
  bool found = false;
  for (const auto& e : c.eliminations())
    if (e.account == "agent00" && e.reason == "retrieval_majority") found = true;
  CHECK(found);
  CHECK(c.active_accounts().size() == 3);
  CHECK(c.stage() == Stage::Finished);
  CHECK(c.conserved());
}

TEST_CASE("a single survivor aggregates to its own model") {
  const int n = 2;
  auto shards = shards_for(n, 900, 23);
  HyperParams hp;
  hp.epochs = 60;
  std::vector<Agent> agents;
  agents.emplace_back(account_name(0, n), 0, std::move(shards[0]),
                      AgentStrategy{StrategyKind::DeadlineMisser, {},
                                    Stage::EvalCommit},
                      hp, 23);
  agents.emplace_back(account_name(1, n), 1, std::move(shards[1]),
                      AgentStrategy{}, hp, 23);
  ContractConfig ccfg;
  ccfg.rounds = 1;
  ccfg.allowlist = {"agent00", "agent01"};
  Contract c(ccfg);
  Store s;
  for (auto& a : agents) c.enroll(a.account(), ccfg.bond);
  run_rounds(c, s, agents);
  CHECK(c.active_accounts() == std::vector<Account>{"agent01"});
  CHECK(c.round_result(1).scores.p == std::vector<Micro>{kMicroOne});
  // the aggregate of one model is that model, byte for byte
  auto blob = s.get("agent01", c.address_of(1, "agent01"));
  CHECK(serialize_model(agents[1].model()) == blob);
}

TEST_CASE("reports are a pure function of the config") {
  ExperimentConfig cfg;
  cfg.n_agents = 4;
  cfg.rounds = 2;
  cfg.rows = 450;
  cfg.epochs = 25;
  cfg.seed = 31;
  cfg.strategies[0] = {StrategyKind::InvertedLabels, {}, Stage::Train};
  RunOutput a = run_experiment(cfg);
  RunOutput b = run_experiment(cfg);
  CHECK(a.report.dump() == b.report.dump());
  CHECK(a.txlog.size() == b.txlog.size());
  cfg.seed = 32;
  RunOutput c = run_experiment(cfg);
  CHECK(a.report.dump() != c.report.dump());
}
