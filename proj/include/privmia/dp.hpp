#pragma once

#include <vector>

#include "privmia/marginal.hpp"
#include "privmia/rng.hpp"

namespace privmia {

// Total pure-DP budget with the fraction split between structure selection
// (exponential mechanism rounds) and marginal measurement (Laplace noise).
struct PrivacyBudget {
  double epsilon_total = 1.0;
  double selection_fraction = 0.5;
  double measurement_fraction = 0.5;

  void check_valid() const;
};

struct BudgetSplit {
  double selection_eps_per_round = 0.0;
  double measurement_eps_per_table = 0.0;
};

// Sequential composition: per-round / per-table shares whose weighted sum is
// the full budget.
BudgetSplit split_budget(const PrivacyBudget& budget, int n_selection_rounds,
                         int n_measurements);

// Laplace(0, scale) quantile at u in (0, 1); 0 at the median u = 0.5.
double laplace_inverse_cdf(double u, double scale);

// One Laplace(0, scale) draw via inverse CDF.
double laplace_noise(double scale, RandomSource& rng);

// Per-cell Laplace(1/epsilon_part) noise on raw counts (unit sensitivity:
// one record moves one cell by one), clamped at zero, total recomputed.
MarginalTable noisy_marginal(const MarginalTable& table, double epsilon_part,
                             RandomSource& rng);

// Index i with probability proportional to exp(eps * score_i / (2 * sens)),
// max-shifted before exponentiation.
std::size_t exponential_mechanism(const std::vector<double>& scores,
                                  double sensitivity, double epsilon_part,
                                  RandomSource& rng);

// The analytic distribution exponential_mechanism samples from.
std::vector<double> exponential_mechanism_probs(const std::vector<double>& scores,
                                                double sensitivity,
                                                double epsilon_part);

// Cumulative-scan draw from non-negative weights (used by the samplers).
std::size_t sample_discrete(const std::vector<double>& weights, RandomSource& rng);

}  // namespace privmia
