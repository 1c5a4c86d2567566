#include <doctest.h>

#include <random>

#include "privmia/desk.hpp"
#include "privmia/eval.hpp"
#include "privmia/util.hpp"
#include "test_support.hpp"

using namespace privmia;
using namespace testsupport;

namespace {

GroundTruth truth_of(std::initializer_list<HouseholdId> members,
                     std::initializer_list<HouseholdId> candidates) {
  GroundTruth t;
  t.member_households = members;
  t.all_candidate_households = candidates;
  return t;
}

// Small, fast protocol configuration against a small desk dataset.
ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.generators = {GeneratorKind::kMst};
  cfg.epsilons = {10.0};
  cfg.trials = 1;
  cfg.n_candidates = 10;
  cfg.n_members = 5;
  cfg.min_household_size = 4;
  cfg.train_fill_size = 600;
  cfg.synth_rows = 600;
  cfg.shadow_runs = 3;
  cfg.seed = 3;
  return cfg;
}

Dataset small_desk(std::uint64_t seed = 0, std::size_t records = 3000) {
  DeskConfig dk;
  dk.n_records = records;
  dk.seed = seed;
  return generate_desk_dataset(dk);
}

}  // namespace

TEST_SUITE("eval") {

TEST_CASE("membership advantage identities") {
  const GroundTruth truth = truth_of({1, 2}, {1, 2, 3, 4});
  std::map<HouseholdId, double> perfect{{1, 1.0}, {2, 1.0}, {3, 0.0}, {4, 0.0}};
  CHECK(membership_advantage(perfect, truth) == 1.0);

  std::map<HouseholdId, double> half{{1, 0.5}, {2, 0.5}, {3, 0.5}, {4, 0.5}};
  CHECK(membership_advantage(half, truth) == 0.5);

  std::map<HouseholdId, double> inverted{{1, 0.0}, {2, 0.0}, {3, 1.0}, {4, 1.0}};
  CHECK(membership_advantage(inverted, truth) == 0.0);
}

TEST_CASE("membership advantage weighted hand case") {
  const GroundTruth truth = truth_of({1, 2}, {1, 2, 3, 4});
  std::map<HouseholdId, double> p{{1, 0.9}, {2, 0.4}, {3, 0.8}, {4, 0.1}};
  // weights {0.8, 0.2, 0.6, 0.8}; tpr = 0.8; fpr = 0.6 / 1.4.
  CHECK(membership_advantage(p, truth) ==
        doctest::Approx(0.6857142857142857).epsilon(1e-9));
}

TEST_CASE("flipping every prediction mirrors the advantage") {
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    GroundTruth truth;
    std::map<HouseholdId, double> p, flipped;
    for (HouseholdId id = 0; id < 12; ++id) {
      truth.all_candidate_households.insert(id);
      if (id % 3 == 0) truth.member_households.insert(id);
      const double prob = u(gen);
      p[id] = prob;
      flipped[id] = 1.0 - prob;
    }
    CHECK(membership_advantage(p, truth) +
              membership_advantage(flipped, truth) ==
          doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("membership advantage input validation") {
  const GroundTruth truth = truth_of({1}, {1, 2});
  std::map<HouseholdId, double> missing{{1, 0.8}};
  CHECK_THROWS_AS(membership_advantage(missing, truth), ValidationError);
  std::map<HouseholdId, double> bad{{1, 0.8}, {2, 1.2}};
  CHECK_THROWS_AS(membership_advantage(bad, truth), ValidationError);
  CHECK_THROWS_AS(truth_of({5}, {1, 2}).check_valid(), ValidationError);
}

TEST_CASE("auc hand cases") {
  const GroundTruth truth = truth_of({1, 2}, {1, 2, 3, 4});
  std::map<HouseholdId, double> perfect{{1, 0.9}, {2, 0.8}, {3, 0.2}, {4, 0.1}};
  CHECK(auc(perfect, truth) == 1.0);

  std::map<HouseholdId, double> flat{{1, 0.5}, {2, 0.5}, {3, 0.5}, {4, 0.5}};
  CHECK(auc(flat, truth) == 0.5);

  // Pairs: (A>C, A>D, B<C, B>D) -> 3 of 4.
  std::map<HouseholdId, double> mixed{{1, 0.9}, {2, 0.4}, {3, 0.8}, {4, 0.1}};
  CHECK(auc(mixed, truth) == doctest::Approx(0.75).epsilon(1e-12));

  const GroundTruth one_class = truth_of({1, 2}, {1, 2});
  CHECK_THROWS_AS(auc(perfect, one_class), ValidationError);
}

TEST_CASE("trial context separates candidates from the train fill") {
  const Dataset aux = small_desk();
  const ExperimentConfig cfg = small_config();
  const TrialContext ctx = make_trial_context(aux, cfg, 99);

  CHECK(static_cast<int>(ctx.candidate_households.size()) == cfg.n_candidates);
  CHECK(static_cast<int>(ctx.truth.member_households.size()) == cfg.n_members);
  for (const auto& [id, rows] : ctx.candidates.records.household_index())
    CHECK(static_cast<int>(rows.size()) >= cfg.min_household_size);

  // Train = fill + member records only; fill excludes all candidate rows.
  std::size_t member_rows = 0;
  const HouseholdIndex idx = aux.household_index();
  for (HouseholdId id : ctx.truth.member_households)
    member_rows += idx.at(id).size();
  CHECK(ctx.train.n_rows() == cfg.train_fill_size + member_rows);

  // Every non-member candidate record must stay out of the train multiset;
  // spot-check via full-record joint counts of the disjoint pools.
  CHECK(ctx.shadow_pool.n_rows() + ctx.candidates.records.n_rows() ==
        aux.n_rows());
}

TEST_CASE("run_trial is deterministic and mutation is detected") {
  const Dataset aux = small_desk();
  const ExperimentConfig cfg = small_config();
  const TrialOutcome a = run_trial(aux, cfg, GeneratorKind::kMst, 10.0, 40);
  const TrialOutcome b = run_trial(aux, cfg, GeneratorKind::kMst, 10.0, 40);
  CHECK(a.ma == b.ma);
  CHECK(a.auc == b.auc);

  TrialContext ctx = make_trial_context(aux, cfg, 40);
  ctx.train.set(0, 0, (ctx.train.at(0, 0) + 1) % 2);
  CHECK_THROWS_AS(
      run_trial_cell(aux, cfg, ctx, GeneratorKind::kMst, 10.0, 40),
      ValidationError);
}

TEST_CASE("constant-half ablation pins the advantage at one half") {
  const Dataset aux = small_desk();
  ExperimentConfig cfg = small_config();
  cfg.ablation_constant_half = true;
  const TrialOutcome out = run_trial(aux, cfg, GeneratorKind::kMst, 10.0, 7);
  CHECK(out.ma == 0.5);
}

TEST_CASE("overfit high-epsilon generator exposes members") {
  // Tiny fill makes the members a large share of the train set.
  const Dataset aux = small_desk(1, 4000);
  ExperimentConfig cfg = small_config();
  cfg.trials = 10;
  cfg.n_candidates = 20;
  cfg.n_members = 10;
  cfg.train_fill_size = 300;
  cfg.synth_rows = 2000;
  cfg.shadow_runs = 5;
  cfg.epsilons = {1e9};
  double total = 0.0;
  for (int t = 0; t < cfg.trials; ++t)
    total += run_trial(aux, cfg, GeneratorKind::kMst, 1e9, 1000 + t).ma;
  CHECK(total / cfg.trials > 0.55);
}

TEST_CASE("experiment aggregates trials and keeps cell layout") {
  const Dataset aux = small_desk();
  ExperimentConfig cfg = small_config();
  cfg.generators = {GeneratorKind::kMst, GeneratorKind::kPrivBayes};
  cfg.epsilons = {1.0, 100.0};
  cfg.trials = 2;
  const ExperimentResult result = run_experiment(aux, cfg, 2);
  REQUIRE(result.cells.size() == 4);
  for (const MAResult& cell : result.cells) {
    CHECK(cell.trials.size() == 2);
    double mean = 0.0;
    for (const TrialOutcome& t : cell.trials) mean += t.ma;
    CHECK(cell.mean_ma == doctest::Approx(mean / 2).epsilon(1e-12));
    CHECK(cell.mean_ma >= 0.0);
    CHECK(cell.mean_ma <= 1.0);
  }
  CHECK(result.cell(GeneratorKind::kMst, 1.0).generator == GeneratorKind::kMst);
  CHECK_THROWS_AS(result.cell(GeneratorKind::kMst, 7.0), ValidationError);

  // A single-trial mean equals the trial itself.
  ExperimentConfig single = small_config();
  const ExperimentResult one = run_experiment(aux, single, 1);
  CHECK(one.cells[0].mean_ma == one.cells[0].trials[0].ma);
}

TEST_CASE("experiment results are worker-count independent") {
  const Dataset aux = small_desk(2);
  ExperimentConfig cfg = small_config();
  cfg.trials = 2;
  cfg.epsilons = {1.0, 10.0};
  const ExperimentResult serial = run_experiment(aux, cfg, 1);
  const ExperimentResult parallel = run_experiment(aux, cfg, 4);
  REQUIRE(serial.cells.size() == parallel.cells.size());
  for (std::size_t i = 0; i < serial.cells.size(); ++i) {
    REQUIRE(serial.cells[i].trials.size() == parallel.cells[i].trials.size());
    for (std::size_t t = 0; t < serial.cells[i].trials.size(); ++t) {
      CHECK(serial.cells[i].trials[t].ma == parallel.cells[i].trials[t].ma);
      CHECK(serial.cells[i].trials[t].auc == parallel.cells[i].trials[t].auc);
    }
  }
  CHECK(experiment_report_json(cfg, serial) ==
        experiment_report_json(cfg, parallel));
}

TEST_CASE("truth round-trips through json") {
  const GroundTruth truth = truth_of({3, 9}, {1, 3, 7, 9});
  const GroundTruth back = truth_from_json(truth_to_json(truth));
  CHECK(back.member_households == truth.member_households);
  CHECK(back.all_candidate_households == truth.all_candidate_households);
}

}  // TEST_SUITE
