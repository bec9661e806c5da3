#pragma once
#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <vector>

#include "blockflow/dataset.hpp"

namespace blockflow {

struct ModelWeights {
  Eigen::VectorXd w;
  double bias = 0.0;

  static ModelWeights zeros(Eigen::Index dim) {
    return ModelWeights{Eigen::VectorXd::Zero(dim), 0.0};
  }
  bool finite() const;
};

struct HyperParams {
  double alpha = 0.1;  // L2 coefficient
  double eta = 0.5;    // learning rate
  int epochs = 400;
  double epsilon = 1.0;  // DP privacy loss
};

// Objective g(w) = mean logistic loss + (alpha/2)(|w|^2 + bias^2).
double logistic_objective(const ModelWeights& m, const Dataset& ds,
                          double alpha);
// Analytic gradient of g; returned as (d/dw, d/dbias).
std::pair<Eigen::VectorXd, double> logistic_gradient(const ModelWeights& m,
                                                     const Dataset& ds,
                                                     double alpha);

// Full-batch gradient descent (D6). The seed parameter is part of the
// interface but unused: no randomness is consumed.
ModelWeights train_logistic(const Shard& shard, const ModelWeights& init,
                            const HyperParams& hp, uint64_t seed);

// label = 1 iff sigmoid(w.x + bias) >= 0.5, i.e. w.x + bias >= 0 (D5).
Eigen::VectorXd predict(const ModelWeights& m, const Eigen::MatrixXd& X);

// F1 of the positive class; TP=FP=FN=0 resolves per D7.
double f1_eval(const ModelWeights& m, const Dataset& ds);

// Adds Laplace(0, 2/(d*alpha*epsilon)) to every coordinate including bias.
ModelWeights add_dp_noise(const ModelWeights& m, int64_t d, double alpha,
                          double epsilon, uint64_t seed);

// Byte form: u64 little-endian count, then count little-endian doubles,
// bias last.
std::vector<uint8_t> serialize_model(const ModelWeights& m);
// Fails (nullopt) on truncation, trailing bytes, non-finite values, or a
// dimension other than expected_dim (pass -1 to accept any dimension).
std::optional<ModelWeights> deserialize_model(const std::vector<uint8_t>& b,
                                              Eigen::Index expected_dim);

}  // namespace blockflow
