#pragma once

#include <map>
#include <string>
#include <vector>

#include "privmia/dataset.hpp"
#include "privmia/tuples.hpp"

namespace privmia {

// Target records; household ids are required so predictions can be
// aggregated per household.
struct CandidateSet {
  Dataset records;
  // Experiment protocol requires every candidate household to hold at least
  // this many records; 0 disables the check.
  int min_household_size = 5;

  void check_valid() const;
};

struct ActivationParams {
  enum class Mode { kSigmoid, kRoot };
  Mode mode = Mode::kSigmoid;
  double confidence = 2.0;  // c
  double center = 0.0;      // m, on the log-lambda axis (sigmoid mode only)
};

struct AttackResult {
  std::vector<double> lambda_per_record;
  std::vector<double> prob_per_record;
  std::map<HouseholdId, double> prob_per_household;
};

// Density ratio per candidate from shadow-weighted 2-way marginals:
// lambda[t] = sum_i w_i * m_synth_i(t) / m_aux_i(t), tables measured with
// additive smoothing so aux-rare candidates stay finite.
std::vector<double> score_mst(const Dataset& synth, const Dataset& aux,
                              const std::vector<FeatureTuple>& pairs,
                              const std::vector<double>& weights,
                              const CandidateSet& candidates,
                              double smoothing = 0.5);

// Same ratio over child-given-parents conditionals:
// lambda[t] = sum_i w_i * c_synth_i(t) / c_aux_i(t).
std::vector<double> score_privbayes(const Dataset& synth, const Dataset& aux,
                                    const std::vector<FeatureTuple>& conditionals,
                                    const std::vector<double>& weights,
                                    const CandidateSet& candidates,
                                    double smoothing = 0.5);

// Generator-agnostic comparator: product of smoothed 1-way marginals on
// synth over the same product on aux.
std::vector<double> baseline_domias(const Dataset& synth, const Dataset& aux,
                                    const CandidateSet& candidates,
                                    double smoothing = 0.5);

// Membership probability per record. Sigmoid: 1/(1+exp(-c(ln L - m))).
// Root: min(L^(1/c)/2, 1). Lambda 0 maps to 0 in both modes.
std::vector<double> activate(const std::vector<double>& lambdas,
                             const ActivationParams& params);

// Median of ln(lambda) over positive entries; 0 when none are positive.
// Centering the sigmoid here puts half the candidates above P = 0.5.
double median_log_lambda(const std::vector<double>& lambdas);

// Household probability = mean of its records' probabilities.
std::map<HouseholdId, double> household_scores(
    const std::vector<double>& prob_per_record, const CandidateSet& candidates);

// Full per-record to per-household pipeline for pre-computed lambdas.
AttackResult aggregate_attack(const std::vector<double>& lambdas,
                              const ActivationParams& params,
                              const CandidateSet& candidates,
                              bool center_on_median = true);

// Submission shape: household_id,probability rows.
void save_predictions_csv(const std::string& path,
                          const std::map<HouseholdId, double>& predictions);
std::map<HouseholdId, double> load_predictions_csv(const std::string& path);

}  // namespace privmia
