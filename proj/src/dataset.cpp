#include "blockflow/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "blockflow/rng.hpp"

namespace blockflow {

static void validate_raw(const RawTable& raw) {
  if (raw.rows.empty()) throw std::invalid_argument("empty table");
  if (raw.col_names.size() != raw.kinds.size())
    throw std::invalid_argument("schema/name size mismatch");
  int labels = 0;
  for (auto k : raw.kinds)
    if (k == ColumnKind::Label) ++labels;
  if (labels != 1) throw std::invalid_argument("exactly one label column required");
  for (const auto& r : raw.rows)
    if (r.size() != raw.kinds.size())
      throw std::invalid_argument("row width mismatch");
}

Dataset preprocess(const RawTable& raw) {
  validate_raw(raw);
  const size_t ncol = raw.kinds.size();
  const size_t nrow = raw.rows.size();

  // Pass 1: per-column stats.
  std::vector<double> lo(ncol, 0.0), hi(ncol, 0.0);
  std::vector<std::vector<std::string>> cats(ncol);
  size_t label_col = 0;
  for (size_t c = 0; c < ncol; ++c) {
    if (raw.kinds[c] == ColumnKind::Continuous) {
      double mn = std::numeric_limits<double>::infinity();
      double mx = -mn;
      for (const auto& r : raw.rows) {
        double v = std::stod(r[c]);
        if (!std::isfinite(v)) throw std::invalid_argument("non-finite cell");
        mn = std::min(mn, v);
        mx = std::max(mx, v);
      }
      lo[c] = mn;
      hi[c] = mx;
    } else {
      std::set<std::string> seen;
      for (const auto& r : raw.rows) seen.insert(r[c]);
      cats[c].assign(seen.begin(), seen.end());
      if (raw.kinds[c] == ColumnKind::Label) {
        label_col = c;
        if (cats[c].size() > 2)
          throw std::invalid_argument("label column must be binary");
      }
    }
  }

  // Feature layout: columns in table order, categoricals expanded in place.
  std::vector<std::string> names;
  std::vector<size_t> offset(ncol, 0);
  size_t width = 0;
  for (size_t c = 0; c < ncol; ++c) {
    offset[c] = width;
    if (raw.kinds[c] == ColumnKind::Continuous) {
      names.push_back(raw.col_names[c]);
      width += 1;
    } else if (raw.kinds[c] == ColumnKind::Categorical) {
      for (const auto& v : cats[c]) names.push_back(raw.col_names[c] + "=" + v);
      width += cats[c].size();
    }
  }

  Dataset ds;
  ds.X = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(nrow),
                               static_cast<Eigen::Index>(width));
  ds.y = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(nrow));
  ds.feature_names = std::move(names);

  for (size_t i = 0; i < nrow; ++i) {
    for (size_t c = 0; c < ncol; ++c) {
      const std::string& cell = raw.rows[i][c];
      if (raw.kinds[c] == ColumnKind::Continuous) {
        double range = hi[c] - lo[c];
        double v = range > 0 ? (std::stod(cell) - lo[c]) / range : 0.0;  // D1
        ds.X(static_cast<Eigen::Index>(i),
             static_cast<Eigen::Index>(offset[c])) = v;
      } else if (raw.kinds[c] == ColumnKind::Categorical) {
        auto it = std::lower_bound(cats[c].begin(), cats[c].end(), cell);
        size_t j = static_cast<size_t>(it - cats[c].begin());
        ds.X(static_cast<Eigen::Index>(i),
             static_cast<Eigen::Index>(offset[c] + j)) = 1.0;
      } else {
        // Lexicographically smaller label value maps to 0.
        ds.y(static_cast<Eigen::Index>(i)) =
            (cats[label_col].size() == 2 && cell == cats[label_col][1]) ? 1.0
                                                                        : 0.0;
      }
    }
  }
  return ds;
}

Dataset take_rows(const Dataset& ds, const std::vector<int64_t>& idx) {
  Dataset out;
  out.feature_names = ds.feature_names;
  out.X.resize(static_cast<Eigen::Index>(idx.size()), ds.X.cols());
  out.y.resize(static_cast<Eigen::Index>(idx.size()));
  for (size_t i = 0; i < idx.size(); ++i) {
    out.X.row(static_cast<Eigen::Index>(i)) = ds.X.row(idx[i]);
    out.y(static_cast<Eigen::Index>(i)) = ds.y(idx[i]);
  }
  return out;
}

Dataset concat_rows(const Dataset& a, const Dataset& b) {
  if (a.X.cols() != b.X.cols()) throw std::invalid_argument("width mismatch");
  Dataset out;
  out.feature_names = a.feature_names;
  out.X.resize(a.X.rows() + b.X.rows(), a.X.cols());
  out.X << a.X, b.X;
  out.y.resize(a.y.size() + b.y.size());
  out.y << a.y, b.y;
  return out;
}

Dataset shard_all(const Shard& s) { return concat_rows(s.train, s.validate); }

static Shard split_shard(const Dataset& ds, const std::vector<int64_t>& idx) {
  int64_t rows = static_cast<int64_t>(idx.size());
  int64_t v = rows / 5;  // floor(20%)
  if (v == 0 && rows >= 5) v = 1;
  std::vector<int64_t> tr(idx.begin(), idx.end() - v);
  std::vector<int64_t> va(idx.end() - v, idx.end());
  Shard s;
  s.train = take_rows(ds, tr);
  s.validate = take_rows(ds, va);
  s.d_i = rows;
  return s;
}

static std::pair<std::vector<Shard>, Dataset> partition_counts(
    const Dataset& ds, const std::vector<int64_t>& shard_counts,
    uint64_t seed) {
  int64_t n = ds.rows();
  std::vector<int64_t> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  Rng rng(split_seed(seed, "partition"));
  rng.shuffle(order);

  int64_t test_n = n / 3;
  Dataset test = take_rows(
      ds, std::vector<int64_t>(order.begin(), order.begin() + test_n));

  std::vector<Shard> shards;
  int64_t pos = test_n;
  for (int64_t c : shard_counts) {
    std::vector<int64_t> idx(order.begin() + pos, order.begin() + pos + c);
    shards.push_back(split_shard(ds, idx));
    pos += c;
  }
  return {std::move(shards), std::move(test)};
}

std::pair<std::vector<Shard>, Dataset> partition(const Dataset& ds,
                                                 int n_agents, uint64_t seed) {
  if (n_agents < 1) throw std::invalid_argument("n_agents must be >= 1");
  int64_t rest = ds.rows() - ds.rows() / 3;
  int64_t base = rest / n_agents;
  if (base < 5) throw std::invalid_argument("too few rows per shard");
  std::vector<int64_t> counts(static_cast<size_t>(n_agents), base);
  for (int64_t i = 0; i < rest % n_agents; ++i) counts[static_cast<size_t>(i)]++;
  return partition_counts(ds, counts, seed);
}

std::pair<std::vector<Shard>, Dataset> weighted_partition(
    const Dataset& ds, const std::vector<double>& relative_sizes,
    uint64_t seed) {
  if (relative_sizes.empty())
    throw std::invalid_argument("empty relative sizes");
  double total = 0;
  for (double s : relative_sizes) {
    if (s <= 0) throw std::invalid_argument("relative sizes must be positive");
    total += s;
  }
  int64_t rest = ds.rows() - ds.rows() / 3;
  size_t n = relative_sizes.size();
  // Largest-remainder apportionment; remainder ties resolved by lower index.
  std::vector<int64_t> counts(n);
  std::vector<std::pair<double, size_t>> frac(n);
  int64_t used = 0;
  for (size_t i = 0; i < n; ++i) {
    double q = relative_sizes[i] / total * static_cast<double>(rest);
    counts[i] = static_cast<int64_t>(std::floor(q));
    used += counts[i];
    frac[i] = {q - std::floor(q), i};
  }
  std::sort(frac.begin(), frac.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  for (int64_t k = 0; k < rest - used; ++k) counts[frac[static_cast<size_t>(k)].second]++;
  for (int64_t c : counts)
    if (c < 1) throw std::invalid_argument("a shard would receive no rows");
  return partition_counts(ds, counts, seed);
}

Shard invert_labels(const Shard& s) {
  Shard out = s;
  out.train.y = Eigen::VectorXd::Ones(s.train.y.size()) - s.train.y;
  out.validate.y = Eigen::VectorXd::Ones(s.validate.y.size()) - s.validate.y;
  return out;
}

Dataset synthesize_random(const Dataset& reference, int64_t n_rows,
                          uint64_t seed) {
  if (reference.rows() == 0) throw std::invalid_argument("empty reference");
  if (n_rows <= 0) throw std::invalid_argument("n_rows must be positive");
  Rng rng(split_seed(seed, "synthesize"));
  uint64_t nref = static_cast<uint64_t>(reference.rows());
  Dataset out;
  out.feature_names = reference.feature_names;
  out.X.resize(n_rows, reference.X.cols());
  out.y.resize(n_rows);
  for (Eigen::Index c = 0; c < reference.X.cols(); ++c)
    for (Eigen::Index i = 0; i < n_rows; ++i)
      out.X(i, c) = reference.X(static_cast<Eigen::Index>(rng.bounded(nref)), c);
  for (Eigen::Index i = 0; i < n_rows; ++i)
    out.y(i) = reference.y(static_cast<Eigen::Index>(rng.bounded(nref)));
  return out;
}

RawTable make_synth_raw(int64_t rows, uint64_t seed) {
  if (rows <= 0) throw std::invalid_argument("rows must be positive");
  Rng rng(split_seed(seed, "synth"));
  static const double mu1[5] = {2.2, -1.8, 1.5, 1.0, 0.5};
  static const std::vector<double> pa1 = {0.7, 0.2, 0.1};
  static const std::vector<double> pa0 = {0.1, 0.2, 0.7};
  static const std::vector<double> pb1 = {0.8, 0.2};
  static const std::vector<double> pb0 = {0.2, 0.8};

  RawTable raw;
  raw.col_names = {"c1", "c2", "c3", "c4", "c5", "catA", "catB", "label"};
  raw.kinds = {ColumnKind::Continuous,  ColumnKind::Continuous,
               ColumnKind::Continuous,  ColumnKind::Continuous,
               ColumnKind::Continuous,  ColumnKind::Categorical,
               ColumnKind::Categorical, ColumnKind::Label};
  raw.rows.reserve(static_cast<size_t>(rows));
  char buf[32];
  for (int64_t i = 0; i < rows; ++i) {
    bool pos = rng.uniform01() < 0.4;
    std::vector<std::string> row;
    row.reserve(8);
    for (int j = 0; j < 5; ++j) {
      double v = rng.normal() + (pos ? mu1[j] : 0.0);
      std::snprintf(buf, sizeof(buf), "%.17g", v);
      row.emplace_back(buf);
    }
    size_t a = rng.choice(pos ? pa1 : pa0);
    size_t b = rng.choice(pos ? pb1 : pb0);
    row.push_back("a" + std::to_string(a));
    row.push_back("b" + std::to_string(b));
    row.push_back(pos ? "1" : "0");
    raw.rows.push_back(std::move(row));
  }
  return raw;
}

Dataset make_synth(int64_t rows, uint64_t seed) {
  return preprocess(make_synth_raw(rows, seed));
}

RawTable read_csv(const std::string& path,
                  const std::vector<ColumnKind>& kinds) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  RawTable raw;
  raw.kinds = kinds;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      // Trim surrounding spaces (Adult CSV uses ", " separators).
      size_t b = cell.find_first_not_of(' ');
      size_t e = cell.find_last_not_of(' ');
      cells.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
    }
    if (header) {
      raw.col_names = cells;
      header = false;
      continue;
    }
    bool missing = false;
    for (const auto& c : cells)
      if (c == "?") missing = true;
    if (missing) continue;  // D3
    raw.rows.push_back(std::move(cells));
  }
  return raw;
}

void write_csv(const RawTable& raw, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  for (size_t c = 0; c < raw.col_names.size(); ++c)
    out << (c ? "," : "") << raw.col_names[c];
  out << "\n";
  for (const auto& r : raw.rows) {
    for (size_t c = 0; c < r.size(); ++c) out << (c ? "," : "") << r[c];
    out << "\n";
  }
}

}  // namespace blockflow
