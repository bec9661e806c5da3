#pragma once
#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace blockflow {

enum class ColumnKind { Continuous, Categorical, Label };

// Pre-preprocessing tabular form; cells are strings as ingested from CSV.
struct RawTable {
  std::vector<std::string> col_names;
  std::vector<ColumnKind> kinds;  // exactly one Label column
  std::vector<std::vector<std::string>> rows;
};

struct Dataset {
  Eigen::MatrixXd X;  // rows x features, every entry in [0,1]
  Eigen::VectorXd y;  // 0/1 labels
  std::vector<std::string> feature_names;

  Eigen::Index rows() const { return X.rows(); }
  Eigen::Index cols() const { return X.cols(); }
};

struct Shard {
  Dataset train;
  Dataset validate;
  int64_t d_i = 0;  // train + validate row count (Laplace scale divisor)
};

// One-hot categoricals, global min-max for continuous (D1/D2), label mapping:
// the lexicographically smaller of the two label values becomes 0.
Dataset preprocess(const RawTable& raw);

// Row subset / concatenation helpers.
Dataset take_rows(const Dataset& ds, const std::vector<int64_t>& idx);
Dataset concat_rows(const Dataset& a, const Dataset& b);
// Entire shard (train+validate), the evaluation dataset per D23.
Dataset shard_all(const Shard& s);

// test = floor(rows/3) of the seed-shuffled order; remainder split into
// (near-)equal shards, each 80/20 train/validate.
std::pair<std::vector<Shard>, Dataset> partition(const Dataset& ds,
                                                 int n_agents, uint64_t seed);

// Shard row counts proportional to relative_sizes, largest-remainder rounding.
std::pair<std::vector<Shard>, Dataset> weighted_partition(
    const Dataset& ds, const std::vector<double>& relative_sizes,
    uint64_t seed);

Shard invert_labels(const Shard& s);

// Each column drawn independently from its empirical marginal in reference;
// labels drawn from the label marginal.
Dataset synthesize_random(const Dataset& reference, int64_t n_rows,
                          uint64_t seed);

// Built-in synthetic source (D4): 5 class-shifted Gaussian features plus two
// categorical features, 40% positive labels.
RawTable make_synth_raw(int64_t rows, uint64_t seed);
Dataset make_synth(int64_t rows, uint64_t seed);

// CSV ingestion: header row expected, rows containing "?" dropped (D3).
RawTable read_csv(const std::string& path, const std::vector<ColumnKind>& kinds);
void write_csv(const RawTable& raw, const std::string& path);

}  // namespace blockflow
