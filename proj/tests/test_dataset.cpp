#include <cstdio>
#include <filesystem>
#include <set>

#include "doctest.h"

#include "blockflow/dataset.hpp"

using namespace blockflow;

static RawTable tiny_table() {
  RawTable raw;
  raw.col_names = {"age", "color", "label"};
  raw.kinds = {ColumnKind::Continuous, ColumnKind::Categorical,
               ColumnKind::Label};
  raw.rows = {{"10", "red", "no"},
              {"20", "blue", "yes"},
              {"30", "red", "yes"},
              {"20", "green", "no"}};
  return raw;
}

TEST_CASE("preprocess one-hots, scales, and maps labels") {
  Dataset ds = preprocess(tiny_table());
  // blue, green, red sorted; layout: age, color=blue, color=green, color=red
  REQUIRE(ds.cols() == 4);
  CHECK(ds.feature_names[0] == "age");
  CHECK(ds.feature_names[1] == "color=blue");
  CHECK(ds.feature_names[2] == "color=green");
  CHECK(ds.feature_names[3] == "color=red");
  CHECK(ds.X(0, 0) == doctest::Approx(0.0));
  CHECK(ds.X(1, 0) == doctest::Approx(0.5));
  CHECK(ds.X(2, 0) == doctest::Approx(1.0));
  CHECK(ds.X(0, 3) == 1.0);  // red
  CHECK(ds.X(1, 1) == 1.0);  // blue
  CHECK(ds.X(3, 2) == 1.0);  // green
  // "no" < "yes", so yes = 1
  CHECK(ds.y(0) == 0.0);
  CHECK(ds.y(1) == 1.0);
  CHECK(ds.y(2) == 1.0);
  CHECK(ds.y(3) == 0.0);
}

TEST_CASE("constant continuous column maps to zero") {
  RawTable raw = tiny_table();
  for (auto& r : raw.rows) r[0] = "7";
  Dataset ds = preprocess(raw);
  for (int i = 0; i < 4; ++i) CHECK(ds.X(i, 0) == 0.0);  // D1
}

TEST_CASE("preprocess rejects bad schemas") {
  RawTable raw = tiny_table();
  raw.kinds[2] = ColumnKind::Categorical;
  CHECK_THROWS(preprocess(raw));  // no label column
  raw = tiny_table();
  raw.rows[1].pop_back();
  CHECK_THROWS(preprocess(raw));  // ragged row
  raw = tiny_table();
  raw.rows[0][2] = "maybe";
  CHECK_THROWS(preprocess(raw));  // three label values
}

TEST_CASE("synthetic source is deterministic and in range") {
  Dataset a = make_synth(400, 9);
  Dataset b = make_synth(400, 9);
  Dataset c = make_synth(400, 10);
  REQUIRE(a.rows() == 400);
  REQUIRE(a.cols() == 10);  // 5 continuous + 3 + 2 one-hot
  CHECK(a.X == b.X);
  CHECK(a.y == b.y);
  CHECK(a.X != c.X);
  CHECK(a.X.minCoeff() >= 0.0);
  CHECK(a.X.maxCoeff() <= 1.0);
  double pos = a.y.sum() / 400.0;
  CHECK(pos > 0.3);
  CHECK(pos < 0.5);
}

TEST_CASE("partition splits a third off for test and balances shards") {
  Dataset ds = make_synth(300, 3);
  auto [shards, test] = partition(ds, 4, 17);
  CHECK(test.rows() == 100);
  int64_t total = 0;
  for (const auto& s : shards) {
    CHECK(s.d_i == s.train.rows() + s.validate.rows());
    CHECK(s.validate.rows() == s.d_i / 5);
    total += s.d_i;
  }
  CHECK(total == 200);
  for (size_t i = 1; i < shards.size(); ++i)
    CHECK(std::abs(shards[i].d_i - shards[0].d_i) <= 1);
  // same seed reproduces, different seed reshuffles
  auto [shards2, test2] = partition(ds, 4, 17);
  CHECK(test.X == test2.X);
  auto [shards3, test3] = partition(ds, 4, 18);
  (void)shards3;
  CHECK(test.X != test3.X);
}

TEST_CASE("partition refuses starvation") {
  Dataset ds = make_synth(60, 3);
  CHECK_THROWS(partition(ds, 9, 1));  // 40 rows over 9 shards -> base 4 < 5
}

TEST_CASE("weighted partition uses largest remainders") {
  Dataset ds = make_synth(150, 5);  // rest = 100
  auto [shards, test] = weighted_partition(ds, {1, 2, 2}, 1);
  CHECK(test.rows() == 50);
  CHECK(shards[0].d_i == 20);
  CHECK(shards[1].d_i == 40);
  CHECK(shards[2].d_i == 40);

  Dataset ds2 = make_synth(164, 5);  // rest = 110, thirds of 36.67 each
  auto [shards2, test2] = weighted_partition(ds2, {1, 1, 1}, 1);
  (void)test2;
  CHECK(shards2[0].d_i == 37);
  CHECK(shards2[1].d_i == 37);
  CHECK(shards2[2].d_i == 36);

  CHECK_THROWS(weighted_partition(ds, {1e-9, 1.0}, 1));  // zero-row shard
  CHECK_THROWS(weighted_partition(ds, {1.0, -1.0}, 1));
}

TEST_CASE("invert_labels flips both splits") {
  Dataset ds = make_synth(100, 7);
  auto [shards, test] = partition(ds, 2, 7);
  (void)test;
  Shard inv = invert_labels(shards[0]);
  CHECK((inv.train.y + shards[0].train.y).isOnes());
  CHECK((inv.validate.y + shards[0].validate.y).isOnes());
  CHECK(inv.train.X == shards[0].train.X);
  CHECK(inv.d_i == shards[0].d_i);
}

TEST_CASE("synthesize_random draws from the column marginals") {
  Dataset ds = make_synth(200, 21);
  Dataset syn = synthesize_random(ds, 150, 4);
  REQUIRE(syn.rows() == 150);
  REQUIRE(syn.cols() == ds.cols());
  for (Eigen::Index c = 0; c < ds.cols(); ++c) {
    std::set<double> ref;
    for (Eigen::Index i = 0; i < ds.rows(); ++i) ref.insert(ds.X(i, c));
    for (Eigen::Index i = 0; i < syn.rows(); ++i)
      CHECK(ref.count(syn.X(i, c)) == 1);
  }
  for (Eigen::Index i = 0; i < syn.rows(); ++i)
    CHECK((syn.y(i) == 0.0 || syn.y(i) == 1.0));
  Dataset syn2 = synthesize_random(ds, 150, 4);
  CHECK(syn.X == syn2.X);
}

TEST_CASE("take and concat preserve rows") {
  Dataset ds = make_synth(50, 2);
  Dataset a = take_rows(ds, {0, 2, 4});
  Dataset b = take_rows(ds, {1, 3});
  CHECK(a.rows() == 3);
  CHECK(a.X.row(1) == ds.X.row(2));
  Dataset c = concat_rows(a, b);
  CHECK(c.rows() == 5);
  CHECK(c.X.row(3) == ds.X.row(1));
  CHECK(c.y(4) == ds.y(3));
}

TEST_CASE("csv round trip drops rows with missing cells") {
  RawTable raw = tiny_table();
  raw.rows.push_back({"40", "?", "yes"});
  std::string path =
      (std::filesystem::temp_directory_path() / "bf_test_tbl.csv").string();
  write_csv(raw, path);
  RawTable back = read_csv(path, raw.kinds);
  CHECK(back.col_names == raw.col_names);
  CHECK(back.rows.size() == 4);  // D3: the "?" row is gone
  CHECK(back.rows[0] == raw.rows[0]);
  std::remove(path.c_str());
}
