#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include "privmia/dataset.hpp"
#include "privmia/marginal.hpp"
#include "privmia/util.hpp"
#include "test_support.hpp"

using namespace privmia;
using namespace testsupport;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
  const std::string path = "/tmp/privmia_test_" + name;
  std::ofstream out(path);
  out << content;
  return path;
}

Schema two_binary_labeled() {
  Feature a{"color", FeatureKind::kNominal, {"red", "blue"}, 0};
  Feature b{"size", FeatureKind::kOrdinal, {"small", "large"}, 0};
  return Schema({a, b});
}

}  // namespace

TEST_SUITE("tabular") {

TEST_CASE("schema rejects bad feature lists") {
  CHECK_THROWS_AS(make_schema({1, 2}), ValidationError);
  Feature a{"x", FeatureKind::kNominal, {}, 2};
  Feature b{"x", FeatureKind::kNominal, {}, 3};
  CHECK_THROWS_AS(Schema({a, b}), ValidationError);
}

TEST_CASE("load_dataset parses labels and indices in file order") {
  const std::string path = write_temp(
      "basic.csv", "color,size\nred,small\nred,large\nblue,1\nblue,small\n");
  const Dataset d = load_dataset(path, two_binary_labeled());
  REQUIRE(d.n_rows() == 4);
  CHECK(d.at(0, 0) == 0);
  CHECK(d.at(0, 1) == 0);
  CHECK(d.at(1, 1) == 1);
  CHECK(d.at(2, 0) == 1);
  CHECK(d.at(2, 1) == 1);  // integer token accepted
  CHECK(d.at(3, 1) == 0);
  CHECK_FALSE(d.has_households());
}

TEST_CASE("load_dataset reports unknown categories with location") {
  const std::string path =
      write_temp("badcat.csv", "color,size\nred,small\nZ,large\n");
  try {
    load_dataset(path, two_binary_labeled());
    FAIL("expected a parse error");
  } catch (const ValidationError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("row 1") != std::string::npos);
    CHECK(msg.find("color") != std::string::npos);
    CHECK(msg.find("Z") != std::string::npos);
  }
}

TEST_CASE("load_dataset rejects missing columns and ragged rows") {
  const std::string missing = write_temp("missing.csv", "color\nred\n");
  CHECK_THROWS_AS(load_dataset(missing, two_binary_labeled()), ValidationError);
  const std::string ragged =
      write_temp("ragged.csv", "color,size\nred,small\nblue\n");
  CHECK_THROWS_AS(load_dataset(ragged, two_binary_labeled()), ValidationError);
  const std::string out_of_range =
      write_temp("range.csv", "color,size\nred,7\n");
  CHECK_THROWS_AS(load_dataset(out_of_range, two_binary_labeled()),
                  ValidationError);
}

TEST_CASE("household column groups rows") {
  const std::string path = write_temp(
      "hh.csv", "color,size,household_id\nred,small,0\nred,large,0\nblue,small,1\n");
  const Dataset d = load_dataset(path, two_binary_labeled());
  REQUIRE(d.has_households());
  const HouseholdIndex idx = d.household_index();
  REQUIRE(idx.size() == 2);
  CHECK(idx.at(0) == std::vector<std::size_t>{0, 1});
  CHECK(idx.at(1) == std::vector<std::size_t>{2});
}

TEST_CASE("dataset csv round-trips through labels") {
  const Dataset d = make_dataset({3, 2}, {{0, 1}, {2, 0}, {1, 1}});
  const std::string path = "/tmp/privmia_test_roundtrip.csv";
  save_dataset_csv(path, d);
  const Dataset back = load_dataset(path, d.schema());
  REQUIRE(back.n_rows() == d.n_rows());
  for (std::size_t r = 0; r < d.n_rows(); ++r)
    for (int f = 0; f < d.n_features(); ++f) CHECK(back.at(r, f) == d.at(r, f));
}

TEST_CASE("measure_marginal matches the hand count") {
  const Dataset d = make_dataset({2, 2}, {{0, 0}, {0, 1}, {0, 1}, {1, 1}});
  const MarginalTable t = measure_marginal(d, FeatureTuple::pair(0, 1));
  REQUIRE(t.cells.size() == 4);
  CHECK(t.cells[0] == 1.0);  // (0,0)
  CHECK(t.cells[1] == 2.0);  // (0,1)
  CHECK(t.cells[2] == 0.0);  // (1,0)
  CHECK(t.cells[3] == 1.0);  // (1,1)
  CHECK(t.total == 4.0);
}

TEST_CASE("degenerate marginals") {
  const Dataset constant = make_dataset({3, 2}, {{1, 0}, {1, 1}, {1, 0}});
  const MarginalTable one_way =
      measure_marginal(constant, FeatureTuple::marginal({0}));
  CHECK(one_way.cells[1] == 3.0);
  CHECK(one_way.cells[0] == 0.0);
  CHECK(one_way.cells[2] == 0.0);

  const Dataset single = make_dataset({2, 3, 2}, {{1, 2, 0}});
  const MarginalTable full =
      measure_marginal(single, FeatureTuple::marginal({0, 1, 2}));
  double sum = 0.0;
  for (double c : full.cells) sum += c;
  CHECK(sum == 1.0);
  CHECK(full.at(std::vector<Value>{1, 2, 0}) == 1.0);

  CHECK_THROWS_AS(measure_marginal(Dataset(make_schema({2, 2}), 0),
                                   FeatureTuple::pair(0, 1)),
                  ValidationError);
}

TEST_CASE("marginal counting matches the brute-force oracle") {
  std::mt19937_64 gen(1234);
  for (int trial = 0; trial < 30; ++trial) {
    const Dataset d = random_dataset(gen);
    std::uniform_int_distribution<int> len(1, std::min(3, d.n_features()));
    std::vector<int> feats(d.n_features());
    std::iota(feats.begin(), feats.end(), 0);
    std::shuffle(feats.begin(), feats.end(), gen);
    feats.resize(len(gen));
    std::sort(feats.begin(), feats.end());

    const MarginalTable t = measure_marginal(d, FeatureTuple::marginal(feats));
    const std::vector<double> oracle = naive_marginal_oracle(d, feats);
    REQUIRE(t.cells.size() == oracle.size());
    for (std::size_t i = 0; i < oracle.size(); ++i)
      CHECK(t.cells[i] == oracle[i]);
    double sum = 0.0;
    for (double c : t.cells) sum += c;
    CHECK(sum == static_cast<double>(d.n_rows()));
  }
}

TEST_CASE("two-way tables are consistent with one-way tables") {
  std::mt19937_64 gen(99);
  for (int trial = 0; trial < 10; ++trial) {
    Dataset d = random_dataset(gen, 4, 5, 300);
    if (d.n_features() < 2) continue;
    const MarginalTable both = measure_marginal(d, FeatureTuple::pair(0, 1));
    const MarginalTable only_b = sum_over_axis(both, 0);
    const MarginalTable expect_b =
        measure_marginal(d, FeatureTuple::marginal({1}));
    for (std::size_t i = 0; i < expect_b.cells.size(); ++i)
      CHECK(only_b.cells[i] == expect_b.cells[i]);
  }
}

TEST_CASE("conditional_prob hand cases") {
  // Joint counts [[1,2],[0,1]] with the parent on the outer axis.
  const Dataset d = make_dataset({2, 2}, {{0, 0}, {0, 1}, {0, 1}, {1, 1}});
  const MarginalTable cond =
      measure_marginal(d, FeatureTuple::conditional(1, {0}));
  CHECK(conditional_prob(cond, 1, std::vector<Value>{0}, 0.0) ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-12));

  // Empty parent stratum: parent value 2 never occurs.
  const Dataset sparse = make_dataset({3, 2}, {{0, 0}, {1, 1}});
  const MarginalTable cond2 =
      measure_marginal(sparse, FeatureTuple::conditional(1, {0}));
  CHECK(conditional_prob(cond2, 1, std::vector<Value>{2}, 0.0) == 0.5);
  CHECK(conditional_prob(cond2, 1, std::vector<Value>{2}, 1.0) == 0.5);
}

TEST_CASE("conditional_prob sums to one over the child for any stratum") {
  std::mt19937_64 gen(7);
  for (int trial = 0; trial < 10; ++trial) {
    Dataset d = random_dataset(gen, 3, 4, 200);
    if (d.n_features() < 2) continue;
    const MarginalTable cond =
        measure_marginal(d, FeatureTuple::conditional(0, {1}));
    for (double smoothing : {0.0, 0.5, 2.0}) {
      for (Value p = 0; p < d.schema().cardinality(1); ++p) {
        double sum = 0.0;
        for (Value v = 0; v < d.schema().cardinality(0); ++v)
          sum += conditional_prob(cond, v, std::vector<Value>{p}, smoothing);
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("mutual information analytic cases") {
  const Dataset indep =
      make_dataset({2, 2}, {{0, 0}, {0, 1}, {1, 0}, {1, 1}});
  CHECK(mutual_information(indep, 0, 1) == doctest::Approx(0.0).epsilon(1e-12));

  const Dataset corr = make_dataset({2, 2}, {{0, 0}, {1, 1}, {0, 0}, {1, 1}});
  CHECK(mutual_information(corr, 0, 1) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-12));

  const Dataset constant = make_dataset({2, 2}, {{0, 0}, {0, 1}, {0, 0}});
  CHECK(mutual_information(constant, 0, 1) ==
        doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("mutual information is symmetric and relabel-invariant") {
  std::mt19937_64 gen(55);
  for (int trial = 0; trial < 10; ++trial) {
    Dataset d = random_dataset(gen, 3, 4, 400);
    if (d.n_features() < 2) continue;
    const double ab = mutual_information(d, 0, 1);
    const double ba = mutual_information(d, 1, 0);
    CHECK(ab == doctest::Approx(ba).epsilon(1e-12));
    CHECK(ab >= 0.0);

    // Relabel feature 0 by reversing its category indices.
    Dataset relabeled = d;
    const int card = d.schema().cardinality(0);
    for (std::size_t r = 0; r < d.n_rows(); ++r)
      relabeled.set(r, 0, card - 1 - d.at(r, 0));
    CHECK(mutual_information(relabeled, 0, 1) ==
          doctest::Approx(ab).epsilon(1e-9));

    CHECK(mutual_information(d, 0, 1) ==
          doctest::Approx(entropy_mi_oracle(d, 0, 1)).epsilon(1e-9));
  }
}

TEST_CASE("set mutual information reduces to the pair case") {
  std::mt19937_64 gen(12);
  Dataset d = random_dataset(gen, 4, 3, 500);
  while (d.n_features() < 3) d = random_dataset(gen, 4, 3, 500);
  CHECK(mutual_information(d, 0, {1}) ==
        doctest::Approx(mutual_information(d, 0, 1)).epsilon(1e-12));
  CHECK(mutual_information(d, 0, std::vector<int>{}) == 0.0);
  // Conditioning on more parents never loses information (plug-in MI).
  CHECK(mutual_information(d, 0, {1, 2}) >=
        mutual_information(d, 0, {1}) - 1e-9);
}

}  // TEST_SUITE
