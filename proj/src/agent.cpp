#include "blockflow/agent.hpp"

#include <algorithm>

#include "blockflow/rng.hpp"
#include "blockflow/scoring.hpp"

namespace blockflow {

std::string strategy_name(const AgentStrategy& s) {
  switch (s.kind) {
    case StrategyKind::Honest: return "honest";
    case StrategyKind::RandomData: return "random_data";
    case StrategyKind::InvertedLabels: return "inverted_labels";
    case StrategyKind::ScoreFabricator: return "fabricator";
    case StrategyKind::DeadlineMisser:
      return std::string("miss:") + stage_name(s.miss_stage);
  }
  return "?";
}

Agent::Agent(Account account, int index, Shard shard, AgentStrategy strat,
             HyperParams hp, uint64_t master_seed)
    : account_(std::move(account)),
      index_(index),
      strat_(std::move(strat)),
      hp_(hp),
      master_(master_seed) {
  if (strat_.kind == StrategyKind::ScoreFabricator && strat_.colluders.empty())
    throw std::invalid_argument("fabricator needs a non-empty colluding set");
  switch (strat_.kind) {
    case StrategyKind::InvertedLabels:
      shard_ = invert_labels(shard);
      break;
    case StrategyKind::RandomData: {
      Dataset all = shard_all(shard);
      Dataset synth = synthesize_random(
          all, all.rows(), split_seed(master_, "synthesize", (uint64_t)index_));
      int64_t n = synth.rows(), n_val = n / 5;
      std::vector<int64_t> tr, va;
      for (int64_t i = 0; i < n - n_val; ++i) tr.push_back(i);
      for (int64_t i = n - n_val; i < n; ++i) va.push_back(i);
      shard_ = Shard{take_rows(synth, tr), take_rows(synth, va), n};
      break;
    }
    default:
      shard_ = std::move(shard);
  }
  eval_all_ = shard_all(shard_);
  dim_ = shard_.train.cols();
  model_ = ModelWeights::zeros(dim_);
}

double Agent::evaluate(const ModelWeights& m) const {
  return f1_eval(m, eval_all_);
}

void Agent::act_train(Contract& c, Store& s, int round) {
  if (misses(Stage::Train)) return;
  ModelWeights w = train_logistic(shard_, model_, hp_,
                                  split_seed(master_, "train", (uint64_t)round,
                                             (uint64_t)index_));
  w = add_dp_noise(w, shard_.d_i, hp_.alpha, hp_.epsilon,
                   split_seed(master_, "dp", (uint64_t)round, (uint64_t)index_));
  ContentAddress addr = s.put(account_, serialize_model(w));
  c.submit_model_address(account_, addr);
}

bool Agent::fetch_model(const Contract& c, Store& s, int round,
                        const Account& k) {
  if (retrieved_.count(k)) return true;
  if (!c.has_address(round, k)) return false;
  std::vector<uint8_t> bytes;
  try {
    bytes = s.get(account_, c.address_of(round, k));
  } catch (const StoreError&) {
    return false;
  }
  blobs_[k] = bytes;
  s.put(account_, bytes);  // D24: re-host everything fetched
  if (auto m = deserialize_model(bytes, dim_)) {
    retrieved_[k] = *m;
    return true;
  }
  return false;
}

void Agent::act_retrieve_fetch(Contract& c, Store& s, int round) {
  blobs_.clear();
  retrieved_.clear();
  pending_.clear();
  if (misses(Stage::Retrieve)) return;
  for (const Account& k : c.active_accounts())
    if (!fetch_model(c, s, round, k)) pending_.insert(k);
}

void Agent::act_retrieve_report(Contract& c, Store& s, int round) {
  if (misses(Stage::Retrieve)) return;
  for (const Account& k : pending_) fetch_model(c, s, round, k);
  pending_.clear();
  std::set<Account> valid;
  for (const auto& [k, m] : retrieved_) valid.insert(k);
  c.report_valid(account_, valid);
}

void Agent::act_evaluate(Contract& c, Store& s, int round) {
  if (misses(Stage::EvalCommit)) return;
  scores_.clear();
  salts_.clear();
  Rng rng(split_seed(master_, "salt", (uint64_t)round, (uint64_t)index_));
  for (const Account& k : c.active_accounts()) {
    double sc;
    if (strat_.kind == StrategyKind::ScoreFabricator) {
      sc = strat_.colluders.count(k) ? 1.0 : 0.0;
    } else {
      sc = fetch_model(c, s, round, k) ? f1_eval(retrieved_.at(k), eval_all_)
                                       : 0.0;
    }
    Micro ms = to_micro(sc);
    Salt salt{};
    std::vector<uint8_t> b = rng.bytes(salt.size());
    std::copy(b.begin(), b.end(), salt.begin());
    scores_[k] = ms;
    salts_[k] = salt;
    c.commit_score(account_, k, score_commitment(ms, salt));
  }
}

void Agent::act_reveal(Contract& c, int round) {
  (void)round;
  if (misses(Stage::EvalReveal)) return;
  for (const auto& [k, ms] : scores_) c.reveal_score(account_, k, ms, salts_.at(k));
  salts_.clear();
}

void Agent::act_aggregate(const Contract& c, Store& s, int round) {
  const RoundResult& r = c.round_result(round);
  if (r.active.empty()) return;
  for (const Account& a : r.active)
    if (!fetch_model(c, s, round, a))
      return;  // unobtainable update: keep the current model
  std::vector<ModelWeights> models;
  models.reserve(r.active.size());
  for (const Account& a : r.active) models.push_back(retrieved_.at(a));
  model_ = weighted_average(models, r.scores.p);
}

}  // namespace blockflow
