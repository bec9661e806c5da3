#include "blockflow/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace blockflow {

Micro to_micro(double x) {
  if (x < 0) x = 0;
  if (x > 1) x = 1;
  return std::llround(x * static_cast<double>(kMicroOne));
}

double from_micro(Micro x) {
  return static_cast<double>(x) / static_cast<double>(kMicroOne);
}

ScoreMatrix ScoreMatrix::from_doubles(
    const std::vector<std::vector<double>>& v) {
  ScoreMatrix sm;
  sm.n = static_cast<int>(v.size());
  sm.s.resize(v.size());
  for (size_t a = 0; a < v.size(); ++a) {
    sm.s[a].reserve(v[a].size());
    for (double x : v[a]) sm.s[a].push_back(to_micro(x));
  }
  sm.validate();
  return sm;
}

void ScoreMatrix::validate() const {
  if (n < 1) throw std::invalid_argument("score matrix must have n >= 1");
  if (s.size() != static_cast<size_t>(n))
    throw std::invalid_argument("score matrix not square");
  for (const auto& row : s) {
    if (row.size() != static_cast<size_t>(n))
      throw std::invalid_argument("score matrix not square");
    for (Micro v : row)
      if (v < 0 || v > kMicroOne)
        throw std::invalid_argument("score entry out of range");
  }
}

Micro round_div(Micro num, Micro den) {
  if (den <= 0) throw std::invalid_argument("round_div: nonpositive denominator");
  if (num >= 0) return (2 * num + den) / (2 * den);
  return -((2 * -num + den) / (2 * den));
}

ScoreBreakdown contract_scores_fixed_point(const ScoreMatrix& sm) {
  sm.validate();
  const size_t n = sm.s.size();
  const Micro half = kMicroOne / 2;
  ScoreBreakdown b;

  b.m.resize(n);
  for (size_t k = 0; k < n; ++k) {
    std::vector<Micro> col(n);
    for (size_t a = 0; a < n; ++a) col[a] = sm.s[a][k];
    std::sort(col.begin(), col.end());
    b.m[k] = n % 2 ? col[n / 2] : round_div(col[n / 2 - 1] + col[n / 2], 2);
  }
  Micro maxm = *std::max_element(b.m.begin(), b.m.end());
  b.m_scaled.resize(n);
  for (size_t k = 0; k < n; ++k)
    b.m_scaled[k] = maxm > 0 ? round_div(b.m[k] * kMicroOne, maxm) : 0;  // D10

  b.t.assign(n, std::vector<Micro>(n));
  b.t_prime.assign(n, std::vector<Micro>(n));
  b.d.resize(n);
  for (size_t a = 0; a < n; ++a) {
    Micro worst = kMicroOne;
    for (size_t k = 0; k < n; ++k) {
      Micro t = std::abs(sm.s[a][k] - b.m[k]);
      b.t[a][k] = t;
      Micro tp = t >= half ? 0 : round_div((half - t) * kMicroOne, half + t);
      b.t_prime[a][k] = tp;
      worst = std::min(worst, tp);
    }
    b.d[a] = worst;
  }
  Micro maxd = *std::max_element(b.d.begin(), b.d.end());
  b.d_scaled.resize(n);
  b.p.resize(n);
  for (size_t k = 0; k < n; ++k) {
    b.d_scaled[k] = maxd > 0 ? round_div(b.d[k] * kMicroOne, maxd) : 0;  // D10
    b.p[k] = std::min(b.m_scaled[k], b.d_scaled[k]);
  }
  return b;
}

// Every published field lives on the micro grid and each later stage reads
// the rounded field, mirroring the contract pipeline. Each field is one
// correctly-rounded IEEE division of integer-valued operands (all < 2^53)
// followed by llround, so this route and the integer route can only part
// ways when an exact quotient sits within one double ulp of a half-micro
// boundary; quotients of integers with denominators <= 10^6 never do.
ScoreBreakdown contribution_scores(const ScoreMatrix& sm) {
  sm.validate();
  const size_t n = sm.s.size();
  const double half = 0.5 * kMicroOne, one = kMicroOne;

  ScoreBreakdown b;
  b.m.resize(n);
  for (size_t k = 0; k < n; ++k) {
    std::vector<double> col(n);
    for (size_t a = 0; a < n; ++a) col[a] = static_cast<double>(sm.s[a][k]);
    std::sort(col.begin(), col.end());
    double med = n % 2 ? col[n / 2] : 0.5 * (col[n / 2 - 1] + col[n / 2]);
    b.m[k] = std::llround(med);
  }
  double maxm =
      static_cast<double>(*std::max_element(b.m.begin(), b.m.end()));
  b.m_scaled.resize(n);
  for (size_t k = 0; k < n; ++k)
    b.m_scaled[k] =
        maxm > 0 ? std::llround(static_cast<double>(b.m[k]) * one / maxm)
                 : 0;  // D10

  b.t.assign(n, std::vector<Micro>(n));
  b.t_prime.assign(n, std::vector<Micro>(n));
  b.d.resize(n);
  for (size_t a = 0; a < n; ++a) {
    Micro worst = kMicroOne;
    for (size_t k = 0; k < n; ++k) {
      double t = std::abs(static_cast<double>(sm.s[a][k] - b.m[k]));
      b.t[a][k] = std::llround(t);
      Micro tp = t >= half ? 0 : std::llround((half - t) * one / (half + t));
      b.t_prime[a][k] = tp;
      worst = std::min(worst, tp);
    }
    b.d[a] = worst;
  }
  double maxd =
      static_cast<double>(*std::max_element(b.d.begin(), b.d.end()));
  b.d_scaled.resize(n);
  b.p.resize(n);
  for (size_t k = 0; k < n; ++k) {
    b.d_scaled[k] =
        maxd > 0 ? std::llround(static_cast<double>(b.d[k]) * one / maxd)
                 : 0;  // D10
    b.p[k] = std::min(b.m_scaled[k], b.d_scaled[k]);
  }
  return b;
}

ModelWeights weighted_average(const std::vector<ModelWeights>& models,
                              const std::vector<Micro>& p) {
  if (models.empty() || models.size() != p.size())
    throw std::invalid_argument("weighted_average: size mismatch");
  Eigen::Index dim = models[0].w.size();
  for (const auto& m : models)
    if (m.w.size() != dim)
      throw std::invalid_argument("weighted_average: dimension mismatch");
  double total = 0;
  for (Micro v : p) total += static_cast<double>(v);
  ModelWeights out = ModelWeights::zeros(dim);
  if (total > 0) {
    for (size_t i = 0; i < models.size(); ++i) {
      double wt = static_cast<double>(p[i]) / total;
      out.w += wt * models[i].w;
      out.bias += wt * models[i].bias;
    }
  } else {  // D11
    double wt = 1.0 / static_cast<double>(models.size());
    for (const auto& m : models) {
      out.w += wt * m.w;
      out.bias += wt * m.bias;
    }
  }
  return out;
}

}  // namespace blockflow
