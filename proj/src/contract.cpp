#include "blockflow/contract.hpp"

#include <algorithm>
#include <fstream>

namespace blockflow {

const char* stage_name(Stage s) {
  switch (s) {
    case Stage::Train: return "train";
    case Stage::Retrieve: return "retrieve";
    case Stage::EvalCommit: return "eval_commit";
    case Stage::EvalReveal: return "eval_reveal";
    case Stage::ComputeScore: return "compute_score";
    case Stage::Finished: return "finished";
  }
  return "?";
}

Digest score_commitment(Micro score, const Salt& salt) {
  std::string enc = std::to_string(score);
  std::vector<uint8_t> buf(enc.begin(), enc.end());
  buf.push_back('|');
  buf.insert(buf.end(), salt.begin(), salt.end());
  return sha256(buf.data(), buf.size());
}

int64_t gas_estimate(int64_t n_agents, int64_t n_rounds) {
  if (n_agents < 1 || n_rounds < 1)
    throw std::invalid_argument("gas_estimate: need n >= 1 and r >= 1");
  return 31913 * n_agents + 542045 * n_rounds + 477050 * n_agents * n_rounds;
}

Contract::Contract(const ContractConfig& cfg) : cfg_(cfg) {
  if (cfg_.rounds < 1) throw ContractError("deploy: rounds must be >= 1");
  if (cfg_.allowlist.empty()) throw ContractError("deploy: empty allowlist");
  for (int64_t t : cfg_.stage_ticks)
    if (t <= 0) throw ContractError("deploy: stage durations must be positive");
  if (cfg_.bond <= 0) throw ContractError("deploy: bond must be positive");
  if (cfg_.refund_den == 0) {
    cfg_.refund_num = 1;
    cfg_.refund_den = cfg_.rounds + 1;
  }
  if (cfg_.refund_num < 0 || cfg_.refund_den <= 0 ||
      cfg_.refund_num > cfg_.refund_den)
    throw ContractError("deploy: refund fraction must be in [0,1]");
  stage_ = Stage::Train;
  stage_deadline_ = cfg_.stage_ticks[0];
}

void Contract::require(bool cond, const std::string& msg) {
  if (!cond) throw ContractError(msg);
}

void Contract::op(const std::string& name, nlohmann::ordered_json args,
                  int64_t bytes, const std::function<void()>& body) {
  gas_used_ += cfg_.gas_base + cfg_.gas_per_byte * bytes;
  nlohmann::ordered_json entry;
  entry["clock"] = clock_;
  entry["round"] = round_;
  entry["op"] = name;
  entry["args"] = std::move(args);
  try {
    body();
    entry["ok"] = true;
  } catch (const std::exception& e) {
    entry["ok"] = false;
    entry["error"] = e.what();
    entry["stage"] = stage_name(stage_);
    entry["gas_used"] = gas_used_;
    txlog_.push_back(std::move(entry));
    throw;
  }
  entry["stage"] = stage_name(stage_);
  entry["gas_used"] = gas_used_;
  txlog_.push_back(std::move(entry));
}

bool Contract::is_active(const Account& a) const {
  return enrolled_.count(a) > 0 && eliminated_.count(a) == 0;
}

std::vector<Account> Contract::active_accounts() const {
  std::vector<Account> out;
  for (const auto& a : enrolled_)
    if (!eliminated_.count(a)) out.push_back(a);
  return out;  // std::set iteration is already sorted
}

void Contract::eliminate(const Account& a, const std::string& reason) {
  if (eliminated_.count(a)) return;
  eliminated_.insert(a);
  elims_.push_back({a, round_, reason});
  nlohmann::ordered_json row;
  row["event"] = "forfeit";
  row["round"] = round_;
  row["clock"] = clock_;
  row["account"] = a;
  row["amount"] = 0;  // bond already pooled; the claim is lost, not the money
  row["pool"] = pool_;
  row["note"] = reason;
  ledger_.push_back(std::move(row));
}

void Contract::enter_stage(Stage s) {
  stage_ = s;
  if (s != Stage::Finished)
    stage_deadline_ += cfg_.stage_ticks[static_cast<size_t>(s)];
}

void Contract::enroll(const Account& account, Micro amount) {
  op("enroll", {{"account", account}, {"amount", amount}}, 32, [&] {
    require(round_ == 1 && stage_ == Stage::Train && clock_ < stage_deadline_,
            "enroll: enrollment closed");
    require(std::find(cfg_.allowlist.begin(), cfg_.allowlist.end(), account) !=
                cfg_.allowlist.end(),
            "enroll: account not on allowlist");
    require(!enrolled_.count(account), "enroll: already enrolled");
    require(amount == cfg_.bond, "enroll: amount must equal the bond");
    enrolled_.insert(account);
    pool_ += amount;
    initial_total_ += amount;
    nlohmann::ordered_json row;
    row["event"] = "enroll";
    row["round"] = round_;
    row["clock"] = clock_;
    row["account"] = account;
    row["amount"] = amount;
    row["pool"] = pool_;
    row["note"] = "";
    ledger_.push_back(std::move(row));
  });
}

void Contract::submit_model_address(const Account& account,
                                    const ContentAddress& addr) {
  op("submit_model_address", {{"account", account}, {"addr", addr.hex()}}, 32,
     [&] {
       require(stage_ == Stage::Train, "submit: not in Train stage");
       require(is_active(account), "submit: account not active");
       require(clock_ < stage_deadline_, "submit: past deadline");
       addresses_[{round_, account}] = addr;  // D16: resubmission overwrites
     });
}

void Contract::report_valid(const Account& account,
                            const std::set<Account>& valid_set) {
  nlohmann::ordered_json jset = nlohmann::ordered_json::array();
  for (const auto& a : valid_set) jset.push_back(a);
  op("report_valid", {{"account", account}, {"valid", jset}},
     32 * (int64_t)valid_set.size(), [&] {
       require(stage_ == Stage::Retrieve, "report_valid: not in Retrieve stage");
       require(is_active(account), "report_valid: account not active");
       require(clock_ < stage_deadline_, "report_valid: past deadline");
       for (const auto& a : valid_set)
         require(enrolled_.count(a) > 0, "report_valid: unknown account " + a);
       reports_[{round_, account}] = valid_set;  // D16
     });
}

void Contract::commit_score(const Account& evaluator, const Account& target,
                            const Digest& digest) {
  op("commit_score",
     {{"evaluator", evaluator}, {"target", target}, {"digest", to_hex(digest)}},
     32, [&] {
       require(stage_ == Stage::EvalCommit, "commit: not in EvalCommit stage");
       require(is_active(evaluator), "commit: evaluator not active");
       require(is_active(target), "commit: target not active");
       require(clock_ < stage_deadline_, "commit: past deadline");
       commitments_[{round_, evaluator, target}] = digest;  // D16
     });
}

void Contract::reveal_score(const Account& evaluator, const Account& target,
                            Micro score, const Salt& salt) {
  op("reveal_score",
     {{"evaluator", evaluator}, {"target", target}, {"score", score}}, 48, [&] {
       require(stage_ == Stage::EvalReveal, "reveal: not in EvalReveal stage");
       require(is_active(evaluator), "reveal: evaluator not active");
       require(clock_ < stage_deadline_, "reveal: past deadline");
       auto it = commitments_.find({round_, evaluator, target});
       require(it != commitments_.end(), "reveal: no prior commitment");
       require(score >= 0 && score <= kMicroOne, "reveal: score out of range");
       if (score_commitment(score, salt) != it->second) {
         reveal_failed_.insert(evaluator);  // D17: eliminated at stage close
         throw ContractError("reveal: digest mismatch");
       }
       revealed_[{round_, evaluator, target}] = score;
     });
}

// Deadline closures. N for the majority test is the active count at stage
// start, which no mid-stage operation can change.
void Contract::close_stage(bool auto_close) {
  std::vector<Account> active = active_accounts();
  std::vector<Account> cut;
  switch (stage_) {
    case Stage::Train:
      for (const auto& a : active)
        if (!addresses_.count({round_, a})) cut.push_back(a);
      for (const auto& a : cut) eliminate(a, "train_deadline");
      enter_stage(Stage::Retrieve);
      break;
    case Stage::Retrieve:
      do_finalize_retrieval();
      break;
    case Stage::EvalCommit: {
      for (const auto& e : active) {
        bool complete = true;
        for (const auto& t : active)
          if (!commitments_.count({round_, e, t})) complete = false;
        if (!complete) cut.push_back(e);
      }
      for (const auto& a : cut) eliminate(a, "commit_deadline");
      enter_stage(Stage::EvalReveal);
      break;
    }
    case Stage::EvalReveal: {
      for (const auto& e : active)
        if (reveal_failed_.count(e)) cut.push_back(e);
      for (const auto& a : cut) eliminate(a, "reveal_mismatch");
      std::vector<Account> still = active_accounts();
      cut.clear();
      for (const auto& e : still) {
        bool complete = true;
        for (const auto& t : still)
          if (!revealed_.count({round_, e, t})) complete = false;
        if (!complete) cut.push_back(e);
      }
      for (const auto& a : cut) eliminate(a, "reveal_deadline");
      reveal_failed_.clear();
      enter_stage(Stage::ComputeScore);
      break;
    }
    case Stage::ComputeScore:
      if (!results_.count(round_)) do_compute_round();
      break;
    case Stage::Finished:
      break;
  }
  nlohmann::ordered_json entry;
  entry["clock"] = clock_;
  entry["round"] = round_;
  entry["op"] = "stage_close";
  entry["args"] = {{"auto", auto_close}};
  entry["ok"] = true;
  entry["stage"] = stage_name(stage_);
  entry["gas_used"] = gas_used_;
  txlog_.push_back(std::move(entry));
}

void Contract::finalize_retrieval() {
  op("finalize_retrieval", nlohmann::ordered_json::object(), 0, [&] {
    require(stage_ == Stage::Retrieve, "finalize_retrieval: wrong stage");
    require(clock_ >= stage_deadline_, "finalize_retrieval: called early");
    do_finalize_retrieval();
  });
}

void Contract::do_finalize_retrieval() {
  std::vector<Account> active = active_accounts();
  int64_t n = (int64_t)active.size();
  std::vector<Account> cut;
  for (const auto& k : active) {
    // v_k: models k marked valid; z_k: agents marking k valid. Self always
    // counts on both sides (D15).
    int64_t v = 0, z = 0;
    auto rk = reports_.find({round_, k});
    for (const auto& j : active) {
      if (j == k || (rk != reports_.end() && rk->second.count(j))) ++v;
      if (j == k) {
        ++z;
      } else {
        auto rj = reports_.find({round_, j});
        if (rj != reports_.end() && rj->second.count(k)) ++z;
      }
    }
    if (2 * v <= n || 2 * z <= n) cut.push_back(k);
  }
  for (const auto& a : cut) eliminate(a, "retrieval_majority");
  enter_stage(Stage::EvalCommit);
}

void Contract::compute_round() {
  op("compute_round", nlohmann::ordered_json::object(), 0, [&] {
    require(stage_ == Stage::ComputeScore, "compute_round: called early");
    do_compute_round();
  });
}

void Contract::do_compute_round() {
  std::vector<Account> active = active_accounts();
  RoundResult res;
  res.round = round_;
  res.active = active;

  if (!active.empty()) {
    size_t n = active.size();
    ScoreMatrix sm;
    sm.n = (int)n;
    sm.s.assign(n, std::vector<Micro>(n, 0));
    for (size_t a = 0; a < n; ++a)
      for (size_t k = 0; k < n; ++k)
        sm.s[a][k] = revealed_.at({round_, active[a], active[k]});
    res.matrix = sm;
    res.scores = contract_scores_fixed_point(sm);

    Micro round_pool = pool_ * cfg_.refund_num / cfg_.refund_den;
    res.round_pool = round_pool;
    Micro sum_p = 0;
    for (Micro p : res.scores.p) sum_p += p;
    Micro paid_total = 0;
    for (size_t k = 0; k < n; ++k) {
      Micro pay = sum_p > 0 ? round_pool * res.scores.p[k] / sum_p
                            : round_pool / (Micro)n;  // D14
      res.payouts[active[k]] = pay;
      payouts_[active[k]] += pay;
      paid_total += pay;
      nlohmann::ordered_json row;
      row["event"] = "payout";
      row["round"] = round_;
      row["clock"] = clock_;
      row["account"] = active[k];
      row["amount"] = pay;
      row["pool"] = pool_ - paid_total;
      row["note"] = "";
      ledger_.push_back(std::move(row));
    }
    pool_ -= paid_total;  // division dust stays in the pool
  }
  results_[round_] = res;

  if (round_ == cfg_.rounds) {
    if (!active.empty()) {
      Micro share = pool_ / (Micro)active.size();
      for (const auto& a : active) {
        payouts_[a] += share;
        pool_ -= share;
        nlohmann::ordered_json row;
        row["event"] = "final_refund";
        row["round"] = round_;
        row["clock"] = clock_;
        row["account"] = a;
        row["amount"] = share;
        row["pool"] = pool_;
        row["note"] = "";
        ledger_.push_back(std::move(row));
      }
    }
    enter_stage(Stage::Finished);
  } else {
    round_ += 1;
    enter_stage(Stage::Train);
  }
}

void Contract::advance_clock(int64_t now) {
  op("advance_clock", {{"now", now}}, 0, [&] {
    require(now >= clock_, "advance_clock: time moving backwards");
    while (stage_ != Stage::Finished && now >= stage_deadline_) {
      clock_ = stage_deadline_;
      close_stage(true);
    }
    clock_ = std::max(clock_, now);
  });
}

ContentAddress Contract::address_of(int round, const Account& account) const {
  auto it = addresses_.find({round, account});
  if (it == addresses_.end())
    throw ContractError("address_of: no submission for " + account);
  return it->second;
}

bool Contract::has_address(int round, const Account& account) const {
  return addresses_.count({round, account}) > 0;
}

const RoundResult& Contract::round_result(int round) const {
  auto it = results_.find(round);
  if (it == results_.end())
    throw ContractError("round_result: round not computed");
  return it->second;
}

Micro Contract::payout_of(const Account& a) const {
  auto it = payouts_.find(a);
  return it == payouts_.end() ? 0 : it->second;
}

bool Contract::conserved() const {
  Micro paid = 0;
  for (const auto& [a, v] : payouts_) paid += v;
  return pool_ + paid == initial_total_;
}

void Contract::write_txlog(const std::string& path) const {
  std::ofstream out(path, std::ios::trunc);
  for (const auto& e : txlog_) out << e.dump() << "\n";
}

void Contract::write_ledger_csv(const std::string& path) const {
  std::ofstream out(path, std::ios::trunc);
  out << "event,round,clock,account,amount,pool,note\n";
  for (const auto& r : ledger_)
    out << r["event"].get<std::string>() << "," << r["round"] << ","
        << r["clock"] << "," << r["account"].get<std::string>() << ","
        << r["amount"] << "," << r["pool"] << ","
        << r["note"].get<std::string>() << "\n";
}

}  // namespace blockflow
