#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "privmia/attack.hpp"
#include "privmia/generator.hpp"
#include "privmia/shadow.hpp"

namespace privmia {

struct GroundTruth {
  std::set<HouseholdId> member_households;
  std::set<HouseholdId> all_candidate_households;

  void check_valid() const;  // members subset of candidates
};

// Confidence-weighted membership advantage: each household carries weight
// 2*|0.5 - p| and is called a member iff p > 0.5; tpr and fpr are weighted
// rates normalized per class (0 when a class has zero total weight);
// MA = (tpr - fpr + 1) / 2.
double membership_advantage(const std::map<HouseholdId, double>& predictions,
                            const GroundTruth& truth);

// Rank AUC of household scores against membership; ties count 0.5.
double auc(const std::map<HouseholdId, double>& predictions,
           const GroundTruth& truth);

// Full repeated-experiment protocol mirroring the challenge setup.
struct ExperimentConfig {
  std::vector<GeneratorKind> generators{GeneratorKind::kMst,
                                        GeneratorKind::kPrivBayes};
  std::vector<double> epsilons{1.0, 10.0, 100.0, 1000.0};
  int trials = 50;
  int n_candidates = 100;
  int n_members = 50;
  int min_household_size = 5;
  std::size_t train_fill_size = 10000;
  std::size_t synth_rows = 10000;
  int shadow_runs = 50;
  std::uint64_t seed = 0;
  double selection_fraction = 0.5;
  double smoothing = 0.5;
  double shadow_min_weight = 0.0;
  ActivationParams activation;
  // Shadow pool excludes candidate records by default; the attacker knows
  // the target list, and excluding it avoids optimistic contamination.
  bool shadow_full_aux = false;
  // Diagnostic switch: constant 0.5 predictions, which must score MA 0.5.
  bool ablation_constant_half = false;
  GeneratorOptions options;

  void check_valid() const;
};

// Per-trial (D_train, C, M) shared across generators and epsilons.
struct TrialContext {
  std::vector<HouseholdId> candidate_households;
  GroundTruth truth;
  CandidateSet candidates;
  Dataset train;             // fill + member records, households stripped
  Dataset shadow_pool;       // aux minus candidate records (or full aux)
  std::uint64_t train_hash;  // guards cross-cell reuse
};

TrialContext make_trial_context(const Dataset& aux,
                                const ExperimentConfig& config,
                                std::uint64_t trial_seed);

struct TrialOutcome {
  double ma = 0.0;
  double auc = 0.0;
};

// One (generator, epsilon) attack cell on a prepared context. Deterministic
// in (trial_seed, generator, epsilon) alone, so cells can run in any order.
TrialOutcome run_trial_cell(const Dataset& aux, const ExperimentConfig& config,
                            const TrialContext& context, GeneratorKind generator,
                            double epsilon, std::uint64_t trial_seed);

// Convenience wrapper: build the context for trial_seed and run one cell.
TrialOutcome run_trial(const Dataset& aux, const ExperimentConfig& config,
                       GeneratorKind generator, double epsilon,
                       std::uint64_t trial_seed);

struct MAResult {
  GeneratorKind generator = GeneratorKind::kMst;
  double epsilon = 0.0;
  std::vector<TrialOutcome> trials;
  double mean_ma = 0.0;
  double mean_auc = 0.0;
};

struct ExperimentResult {
  std::vector<MAResult> cells;  // generator-major, epsilon-minor

  const MAResult& cell(GeneratorKind g, double epsilon) const;
};

// trials x generators x epsilons, reusing each trial's (D_train, C, M)
// across cells. Identical output for any worker count.
ExperimentResult run_experiment(const Dataset& aux,
                                const ExperimentConfig& config,
                                int workers = 1);

// Deterministic report (config echo, per-cell tables, per-trial values).
std::string experiment_report_json(const ExperimentConfig& config,
                                   const ExperimentResult& result);
// generator,epsilon,mean_ma,mean_auc rows.
std::string ma_vs_eps_csv(const ExperimentResult& result);

std::string truth_to_json(const GroundTruth& truth);
GroundTruth truth_from_json(const std::string& text);

}  // namespace privmia
