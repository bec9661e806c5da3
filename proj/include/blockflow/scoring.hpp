#pragma once
#include <cstdint>
#include <vector>

#include "blockflow/model.hpp"

namespace blockflow {

// Fixed-point micro-units: 1_000_000 represents 1.0.
using Micro = int64_t;
inline constexpr Micro kMicroOne = 1'000'000;

Micro to_micro(double x);        // round half away from zero, clamped to [0,1]
double from_micro(Micro x);

struct ScoreMatrix {
  int n = 0;
  std::vector<std::vector<Micro>> s;  // s[a][k]: a's report on k's model

  static ScoreMatrix from_doubles(const std::vector<std::vector<double>>& v);
  void validate() const;  // square, entries in [0, kMicroOne]
};

// All fields micro-units; t/t_prime indexed [a][k].
struct ScoreBreakdown {
  std::vector<Micro> m, m_scaled;
  std::vector<std::vector<Micro>> t, t_prime;
  std::vector<Micro> d, d_scaled, p;
};

// Floating-point reference: per-stage double arithmetic, with every field
// rounded to the micro grid before later stages consume it.
ScoreBreakdown contribution_scores(const ScoreMatrix& s);

// Contract route: integer arithmetic only, every division rounds half away
// from zero. Agrees with the reference within 2 micro-units per field.
ScoreBreakdown contract_scores_fixed_point(const ScoreMatrix& s);

// sum(p_k w_k)/sum(p_k); sum p = 0 falls back to the unweighted mean (D11).
ModelWeights weighted_average(const std::vector<ModelWeights>& models,
                              const std::vector<Micro>& p);

// Integer division rounding half away from zero; denominator must be > 0.
Micro round_div(Micro num, Micro den);

}  // namespace blockflow
