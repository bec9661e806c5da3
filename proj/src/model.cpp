#include "blockflow/model.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>

#include "blockflow/rng.hpp"

namespace blockflow {

bool ModelWeights::finite() const {
  return w.allFinite() && std::isfinite(bias);
}

static Eigen::ArrayXd sigmoid(const Eigen::ArrayXd& z) {
  // Split by sign for stability at large |z|.
  return (z >= 0).select(1.0 / (1.0 + (-z).exp()),
                         z.exp() / (1.0 + z.exp()));
}

static Eigen::ArrayXd log1pexp(const Eigen::ArrayXd& z) {
  return (z > 0).select(z + (1.0 + (-z).exp()).log(), (1.0 + z.exp()).log());
}

double logistic_objective(const ModelWeights& m, const Dataset& ds,
                          double alpha) {
  if (ds.rows() == 0) throw std::invalid_argument("empty dataset");
  Eigen::ArrayXd z = (ds.X * m.w).array() + m.bias;
  // loss = mean( log1pexp(z) - y*z )
  double loss = (log1pexp(z) - ds.y.array() * z).mean();
  return loss + 0.5 * alpha * (m.w.squaredNorm() + m.bias * m.bias);
}

std::pair<Eigen::VectorXd, double> logistic_gradient(const ModelWeights& m,
                                                     const Dataset& ds,
                                                     double alpha) {
  if (ds.rows() == 0) throw std::invalid_argument("empty dataset");
  double n = static_cast<double>(ds.rows());
  Eigen::ArrayXd z = (ds.X * m.w).array() + m.bias;
  Eigen::VectorXd resid = (sigmoid(z) - ds.y.array()).matrix();
  Eigen::VectorXd gw = ds.X.transpose() * resid / n + alpha * m.w;
  double gb = resid.mean() + alpha * m.bias;
  return {std::move(gw), gb};
}

ModelWeights train_logistic(const Shard& shard, const ModelWeights& init,
                            const HyperParams& hp, uint64_t /*seed*/) {
  const Dataset& ds = shard.train;
  if (ds.rows() == 0) throw std::invalid_argument("empty training split");
  if (init.w.size() != ds.X.cols())
    throw std::invalid_argument("init dimension mismatch");
  ModelWeights m = init;
  for (int e = 0; e < hp.epochs; ++e) {
    auto [gw, gb] = logistic_gradient(m, ds, hp.alpha);
    m.w -= hp.eta * gw;
    m.bias -= hp.eta * gb;
    if (!m.finite()) throw std::runtime_error("divergent training (non-finite)");
  }
  return m;
}

Eigen::VectorXd predict(const ModelWeights& m, const Eigen::MatrixXd& X) {
  if (m.w.size() != X.cols()) throw std::invalid_argument("dimension mismatch");
  Eigen::ArrayXd z = (X * m.w).array() + m.bias;
  return (z >= 0).cast<double>();
}

double f1_eval(const ModelWeights& m, const Dataset& ds) {
  if (ds.rows() == 0) throw std::invalid_argument("empty dataset");
  Eigen::VectorXd pred = predict(m, ds.X);
  double tp = 0, fp = 0, fn = 0;
  for (Eigen::Index i = 0; i < ds.rows(); ++i) {
    bool p = pred(i) > 0.5, a = ds.y(i) > 0.5;
    if (p && a) ++tp;
    else if (p && !a) ++fp;
    else if (!p && a) ++fn;
  }
  double denom = 2 * tp + fp + fn;
  if (denom == 0) {
    // D7: no positives anywhere; perfect iff no positive labels existed.
    return (ds.y.array() > 0.5).any() ? 0.0 : 1.0;
  }
  return 2 * tp / denom;
}

ModelWeights add_dp_noise(const ModelWeights& m, int64_t d, double alpha,
                          double epsilon, uint64_t seed) {
  if (d < 1 || alpha <= 0 || epsilon <= 0)
    throw std::invalid_argument("d, alpha, epsilon must be positive");
  double lambda = 2.0 / (static_cast<double>(d) * alpha * epsilon);
  Rng rng(seed);
  ModelWeights out = m;
  for (Eigen::Index i = 0; i < out.w.size(); ++i) out.w(i) += rng.laplace(lambda);
  out.bias += rng.laplace(lambda);
  return out;
}

static void push_le_u64(std::vector<uint8_t>& buf, uint64_t v) {
  for (int i = 0; i < 8; ++i) buf.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

static void push_le_double(std::vector<uint8_t>& buf, double v) {
  uint64_t bits;
  std::memcpy(&bits, &v, 8);
  push_le_u64(buf, bits);
}

std::vector<uint8_t> serialize_model(const ModelWeights& m) {
  std::vector<uint8_t> buf;
  uint64_t count = static_cast<uint64_t>(m.w.size()) + 1;
  buf.reserve(8 + 8 * count);
  push_le_u64(buf, count);
  for (Eigen::Index i = 0; i < m.w.size(); ++i) push_le_double(buf, m.w(i));
  push_le_double(buf, m.bias);
  return buf;
}

std::optional<ModelWeights> deserialize_model(const std::vector<uint8_t>& b,
                                              Eigen::Index expected_dim) {
  if (b.size() < 8) return std::nullopt;
  uint64_t count = 0;
  for (int i = 0; i < 8; ++i) count |= static_cast<uint64_t>(b[static_cast<size_t>(i)]) << (8 * i);
  if (count < 1 || count > (1u << 20)) return std::nullopt;
  if (b.size() != 8 + 8 * count) return std::nullopt;
  auto read_double = [&b](uint64_t slot) {
    uint64_t bits = 0;
    size_t off = 8 + 8 * slot;
    for (int i = 0; i < 8; ++i) bits |= static_cast<uint64_t>(b[off + static_cast<size_t>(i)]) << (8 * i);
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
  };
  ModelWeights m;
  m.w.resize(static_cast<Eigen::Index>(count - 1));
  for (uint64_t i = 0; i + 1 < count; ++i) m.w(static_cast<Eigen::Index>(i)) = read_double(i);
  m.bias = read_double(count - 1);
  if (!m.finite()) return std::nullopt;
  if (expected_dim >= 0 && m.w.size() != expected_dim) return std::nullopt;
  return m;
}

}  // namespace blockflow
