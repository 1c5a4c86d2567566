#include <doctest.h>

#include <map>
#include <random>
#include <set>

#include "privmia/desk.hpp"
#include "privmia/mst.hpp"
#include "privmia/util.hpp"
#include "test_support.hpp"

using namespace privmia;
using namespace testsupport;

namespace {

PrivacyBudget budget_of(double eps) { return PrivacyBudget{eps, 0.5, 0.5}; }

// Three-feature chain: f1 tracks f0, f2 tracks f1; distinct link strengths.
Dataset chain_dataset(std::size_t rows, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Dataset d(make_schema({3, 3, 3}), rows);
  for (std::size_t r = 0; r < rows; ++r) {
    const Value a = static_cast<Value>(gen() % 3);
    const Value b = u(gen) < 0.85 ? a : static_cast<Value>(gen() % 3);
    const Value c = u(gen) < 0.70 ? b : static_cast<Value>(gen() % 3);
    d.set(r, 0, a);
    d.set(r, 1, b);
    d.set(r, 2, c);
  }
  return d;
}

int distinct_edges_over_fits(const Dataset& data, double eps, int fits,
                             std::uint64_t seed) {
  std::set<std::pair<int, int>> seen;
  for (int i = 0; i < fits; ++i) {
    RandomSource rng(seed, i);
    const MstModel model = fit_mst(data, budget_of(eps), rng);
    for (const auto& e : edge_set(model.edges)) seen.insert(e);
  }
  return static_cast<int>(seen.size());
}

}  // namespace

TEST_SUITE("mst") {

TEST_CASE("high-epsilon fit recovers the exact-MI Kruskal tree") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    DeskConfig cfg;
    cfg.n_records = 2000;
    cfg.seed = seed;
    const Dataset data = generate_desk_dataset(cfg).without_households();
    RandomSource rng(seed, 99);
    const MstModel model = fit_mst(data, budget_of(1e9), rng);
    CHECK(edge_set(model.edges) == kruskal_mst_oracle(data));
  }
}

TEST_CASE("two features force the only edge at any epsilon") {
  const Dataset d = make_dataset({2, 3}, {{0, 0}, {1, 2}, {0, 1}});
  for (double eps : {0.1, 1.0, 1000.0}) {
    RandomSource rng(1, 1);
    const MstModel model = fit_mst(d, budget_of(eps), rng);
    REQUIRE(model.edges.size() == 1);
    CHECK(model.edges[0] == FeatureTuple::pair(0, 1));
    CHECK(focal_points_mst(model) ==
          std::vector<FeatureTuple>{FeatureTuple::pair(0, 1)});
  }
}

TEST_CASE("every fit is a spanning tree with full budget accounting") {
  std::mt19937_64 gen(3);
  for (double eps : {0.5, 5.0, 500.0}) {
    Dataset d = random_dataset(gen, 5, 4, 300);
    while (d.n_features() < 3) d = random_dataset(gen, 5, 4, 300);
    RandomSource rng(7, static_cast<std::uint64_t>(eps));
    const MstModel model = fit_mst(d, budget_of(eps), rng);
    model.check_valid();  // n-1 edges, acyclic, connected, normalized
    CHECK(static_cast<int>(model.selection_log.size()) == d.n_features() - 1);
    CHECK(static_cast<int>(model.noisy_tables.size()) + 1 == d.n_features());
  }
}

TEST_CASE("edge variability does not shrink when epsilon drops") {
  DeskConfig cfg;
  cfg.n_records = 2000;
  cfg.seed = 5;
  const Dataset data = generate_desk_dataset(cfg).without_households();
  const int low = distinct_edges_over_fits(data, 1.0, 50, 11);
  const int high = distinct_edges_over_fits(data, 1000.0, 50, 11);
  CHECK(low >= high);
  CHECK(high >= data.n_features() - 1);
}

TEST_CASE("modal edge-set frequency is non-decreasing in epsilon") {
  DeskConfig cfg;
  cfg.n_records = 1500;
  cfg.seed = 9;
  const Dataset data = generate_desk_dataset(cfg).without_households();
  double previous = -1.0;
  for (double eps : {1.0, 10.0, 100.0, 1000.0}) {
    std::map<std::set<std::pair<int, int>>, int> sets;
    const int fits = 50;
    for (int i = 0; i < fits; ++i) {
      RandomSource rng(21, static_cast<std::uint64_t>(eps) * 100 + i);
      sets[edge_set(fit_mst(data, budget_of(eps), rng).edges)] += 1;
    }
    int modal = 0;
    for (const auto& [s, count] : sets) modal = std::max(modal, count);
    const double freq = static_cast<double>(modal) / fits;
    CHECK(freq >= previous - 0.1);
    previous = freq;
  }
}

TEST_CASE("point-mass tables sample one fixed record") {
  MstModel model;
  model.schema = make_schema({2, 2});
  model.epsilon = budget_of(1.0);
  model.root_feature = 0;
  model.edges = {FeatureTuple::pair(0, 1)};
  model.selection_log = model.edges;
  model.root_table.tuple = FeatureTuple::marginal({0});
  model.root_table.sizes = {2};
  model.root_table.cells = {0.0, 1.0};  // root always 1
  model.root_table.total = 1.0;
  MarginalTable edge;
  edge.tuple = FeatureTuple::pair(0, 1);
  edge.sizes = {2, 2};
  edge.cells = {0.0, 0.0, 1.0, 0.0};  // mass at (1, 0)
  edge.total = 1.0;
  model.noisy_tables = {edge};

  RandomSource rng(0, 0);
  const Dataset out = sample_mst(model, 200, rng);
  for (std::size_t r = 0; r < out.n_rows(); ++r) {
    CHECK(out.at(r, 0) == 1);
    CHECK(out.at(r, 1) == 0);
  }
}

TEST_CASE("sampling reproduces the model marginals at high epsilon") {
  const Dataset data = chain_dataset(20000, 42);
  RandomSource fit_rng(1, 2);
  const MstModel model = fit_mst(data, budget_of(1e9), fit_rng);
  RandomSource sample_rng(3, 4);
  const Dataset synth = sample_mst(model, 100000, sample_rng);
  REQUIRE(synth.n_rows() == 100000);

  for (std::size_t e = 0; e < model.edges.size(); ++e) {
    MarginalTable empirical = measure_marginal(synth, model.edges[e]);
    empirical.normalize();
    double l1 = 0.0;
    for (std::size_t i = 0; i < empirical.cells.size(); ++i)
      l1 += std::abs(empirical.cells[i] - model.noisy_tables[e].cells[i]);
    CHECK(l1 <= 0.02);
  }
}

TEST_CASE("samples stay inside the schema domain and hit the exact count") {
  DeskConfig cfg;
  cfg.n_records = 1000;
  cfg.seed = 2;
  const Dataset data = generate_desk_dataset(cfg).without_households();
  RandomSource rng(5, 6);
  const MstModel model = fit_mst(data, budget_of(2.0), rng);
  RandomSource sample_rng(5, 7);
  const Dataset synth = sample_mst(model, 10000, sample_rng);
  CHECK(synth.n_rows() == 10000);
  CHECK_NOTHROW(synth.validate());
  CHECK_FALSE(synth.has_households());
  CHECK_THROWS_AS(sample_mst(model, 0, sample_rng), ValidationError);
}

TEST_CASE("fit rejects degenerate inputs") {
  RandomSource rng(0, 0);
  const Dataset one_feature = make_dataset({2}, {{0}, {1}});
  CHECK_THROWS_AS(fit_mst(one_feature, budget_of(1.0), rng), ValidationError);
  CHECK_THROWS_AS(
      fit_mst(Dataset(make_schema({2, 2}), 0), budget_of(1.0), rng),
      ValidationError);
}

}  // TEST_SUITE
