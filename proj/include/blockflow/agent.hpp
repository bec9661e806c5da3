#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "blockflow/contract.hpp"
#include "blockflow/dataset.hpp"
#include "blockflow/model.hpp"
#include "blockflow/store.hpp"

namespace blockflow {

enum class StrategyKind {
  Honest,
  RandomData,       // trains on marginally resampled data
  InvertedLabels,   // trains with labels flipped
  ScoreFabricator,  // evaluates 1.0 for colluders, 0.0 for everyone else
  DeadlineMisser,   // skips every action of one stage
};

struct AgentStrategy {
  StrategyKind kind = StrategyKind::Honest;
  std::set<Account> colluders;      // ScoreFabricator only; includes self
  Stage miss_stage = Stage::Train;  // DeadlineMisser only
};

std::string strategy_name(const AgentStrategy& s);

// One protocol client. Strategies differ only where the protocol text says
// they do: RandomData/InvertedLabels transform the shard at construction,
// ScoreFabricator replaces evaluation, DeadlineMisser skips a stage.
class Agent {
 public:
  Agent(Account account, int index, Shard shard, AgentStrategy strat,
        HyperParams hp, uint64_t master_seed);

  const Account& account() const { return account_; }
  int index() const { return index_; }
  const AgentStrategy& strategy() const { return strat_; }
  const Shard& shard() const { return shard_; }

  void act_train(Contract& c, Store& s, int round);
  // Retrieval runs in two passes: everyone fetches (re-sharing what they got,
  // D24), then everyone retries failures and files the validity report. This
  // realizes the peer-fallback scheme independent of agent ordering.
  void act_retrieve_fetch(Contract& c, Store& s, int round);
  void act_retrieve_report(Contract& c, Store& s, int round);
  // Evaluation and aggregation retry any still-missing model against the
  // store first: a model that passed the majority test is re-hosted by every
  // agent that marked it valid, so it is normally obtainable by now even if
  // the original holder never was. A model missing despite that scores 0.0;
  // an unobtainable aggregate input leaves the current model in place.
  void act_evaluate(Contract& c, Store& s, int round);
  void act_reveal(Contract& c, int round);
  void act_aggregate(const Contract& c, Store& s, int round);

  // Shared model: zeros before round 1 (D25), the weighted average after
  // each completed round.
  const ModelWeights& model() const { return model_; }
  const std::map<Account, ModelWeights>& retrieved() const {
    return retrieved_;
  }
  // F1 on the agent's entire shard (D23).
  double evaluate(const ModelWeights& m) const;

 private:
  bool misses(Stage s) const {
    return strat_.kind == StrategyKind::DeadlineMisser &&
           strat_.miss_stage == s;
  }
  bool fetch_model(const Contract& c, Store& s, int round, const Account& k);

  Account account_;
  int index_;
  Shard shard_;  // post strategy transform
  Dataset eval_all_;
  AgentStrategy strat_;
  HyperParams hp_;
  uint64_t master_;
  Eigen::Index dim_;
  ModelWeights model_;
  std::map<Account, std::vector<uint8_t>> blobs_;
  std::map<Account, ModelWeights> retrieved_;
  std::set<Account> pending_;
  std::map<Account, Micro> scores_;
  std::map<Account, Salt> salts_;  // held from commit until reveal
};

}  // namespace blockflow
