#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "json.hpp"

#include "blockflow/hash.hpp"
#include "blockflow/scoring.hpp"
#include "blockflow/store.hpp"

namespace blockflow {

struct ContractError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Stage { Train, Retrieve, EvalCommit, EvalReveal, ComputeScore, Finished };
const char* stage_name(Stage s);

using Salt = std::array<uint8_t, 32>;

// Commitment digest: SHA-256 of the decimal micro-unit score, '|', then the
// 32-byte salt. Bit-exact so independent clients interoperate.
Digest score_commitment(Micro score, const Salt& salt);

// Per-agent gas cost fitted in the protocol's source evaluation:
// gas(N,R) = 31913 N + 542045 R + 477050 N R.
int64_t gas_estimate(int64_t n_agents, int64_t n_rounds);

struct ContractConfig {
  int rounds = 1;
  std::vector<Account> allowlist;
  Micro bond = 100 * kMicroOne;
  std::array<int64_t, 5> stage_ticks = {10, 10, 10, 10, 10};  // Train..ComputeScore
  int64_t refund_num = 0;  // 0,0 = default 1/(rounds+1)
  int64_t refund_den = 0;
  int64_t gas_base = 21000;   // abstract meter, not a protocol claim
  int64_t gas_per_byte = 68;
};

struct Elimination {
  Account account;
  int round;
  std::string reason;  // train_deadline | retrieval_majority | commit_deadline
                       // | reveal_deadline | reveal_mismatch
};

struct RoundResult {
  int round = 0;
  std::vector<Account> active;  // sorted; matrix order
  ScoreMatrix matrix;           // revealed scores, row = evaluator
  ScoreBreakdown scores;
  std::map<Account, Micro> payouts;
  Micro round_pool = 0;
};

// Single deterministic state machine: enrollment, bonds, five stages per
// round with strict deadlines, commit-reveal verification, elimination,
// pro-rata payouts, and an abstract gas meter. All mutations are serialized;
// a logical integer clock advances only via advance_clock.
class Contract {
 public:
  explicit Contract(const ContractConfig& cfg);

  void enroll(const Account& account, Micro amount);
  void submit_model_address(const Account& account, const ContentAddress& addr);
  void report_valid(const Account& account, const std::set<Account>& valid_set);
  void finalize_retrieval();
  void commit_score(const Account& evaluator, const Account& target,
                    const Digest& digest);
  void reveal_score(const Account& evaluator, const Account& target,
                    Micro score, const Salt& salt);
  void compute_round();
  void advance_clock(int64_t now);

  // Inspection
  Stage stage() const { return stage_; }
  int round() const { return round_; }
  int64_t clock() const { return clock_; }
  int64_t stage_deadline() const { return stage_deadline_; }
  bool is_active(const Account& a) const;
  std::vector<Account> active_accounts() const;  // sorted
  const std::set<Account>& eliminated() const { return eliminated_; }
  const std::vector<Elimination>& eliminations() const { return elims_; }
  ContentAddress address_of(int round, const Account& account) const;
  bool has_address(int round, const Account& account) const;
  const RoundResult& round_result(int round) const;
  Micro pool() const { return pool_; }
  Micro initial_total() const { return initial_total_; }
  Micro payout_of(const Account& a) const;
  int64_t gas_used() const { return gas_used_; }
  const ContractConfig& config() const { return cfg_; }

  // Audit artifacts
  const std::vector<nlohmann::ordered_json>& txlog() const { return txlog_; }
  const std::vector<nlohmann::ordered_json>& ledger_rows() const {
    return ledger_;
  }
  void write_txlog(const std::string& path) const;
  void write_ledger_csv(const std::string& path) const;
  bool conserved() const;  // pool + all payouts == all enrolled bonds

 private:
  void require(bool cond, const std::string& msg);
  void op(const std::string& name, nlohmann::ordered_json args, int64_t bytes,
          const std::function<void()>& body);
  void eliminate(const Account& a, const std::string& reason);
  void enter_stage(Stage s);
  void close_stage(bool auto_close);
  void do_finalize_retrieval();
  void do_compute_round();

  ContractConfig cfg_;
  int round_ = 1;
  Stage stage_ = Stage::Train;
  int64_t clock_ = 0;
  int64_t stage_deadline_ = 0;
  std::set<Account> enrolled_;
  std::set<Account> eliminated_;
  std::vector<Elimination> elims_;
  std::map<std::pair<int, Account>, ContentAddress> addresses_;
  std::map<std::pair<int, Account>, std::set<Account>> reports_;
  std::map<std::tuple<int, Account, Account>, Digest> commitments_;
  std::map<std::tuple<int, Account, Account>, Micro> revealed_;
  std::set<Account> reveal_failed_;
  Micro pool_ = 0;
  Micro initial_total_ = 0;
  std::map<Account, Micro> payouts_;
  std::map<int, RoundResult> results_;
  int64_t gas_used_ = 0;
  std::vector<nlohmann::ordered_json> txlog_;
  std::vector<nlohmann::ordered_json> ledger_;  // money flow rows
};

}  // namespace blockflow
