#include "privmia/dp.hpp"

#include <algorithm>
#include <cmath>

#include "privmia/util.hpp"

namespace privmia {

void PrivacyBudget::check_valid() const {
  if (epsilon_total <= 0.0)
    throw ValidationError("epsilon_total must be positive");
  if (selection_fraction <= 0.0 || selection_fraction >= 1.0 ||
      measurement_fraction <= 0.0 || measurement_fraction >= 1.0)
    throw ValidationError("budget fractions must lie in (0, 1)");
  if (std::abs(selection_fraction + measurement_fraction - 1.0) > 1e-12)
    throw ValidationError("budget fractions must sum to 1");
}

BudgetSplit split_budget(const PrivacyBudget& budget, int n_selection_rounds,
                         int n_measurements) {
  budget.check_valid();
  if (n_selection_rounds < 1 || n_measurements < 1)
    throw ValidationError("split_budget needs at least one round and one table");
  BudgetSplit split;
  split.selection_eps_per_round =
      budget.epsilon_total * budget.selection_fraction / n_selection_rounds;
  split.measurement_eps_per_table =
      budget.epsilon_total * budget.measurement_fraction / n_measurements;
  return split;
}

double laplace_inverse_cdf(double u, double scale) {
  if (scale <= 0.0) throw ValidationError("laplace scale must be positive");
  if (u <= 0.0 || u >= 1.0) throw ValidationError("laplace quantile needs u in (0,1)");
  if (u < 0.5) return scale * std::log(2.0 * u);
  return -scale * std::log(2.0 * (1.0 - u));
}

double laplace_noise(double scale, RandomSource& rng) {
  return laplace_inverse_cdf(rng.next_open_double(), scale);
}

MarginalTable noisy_marginal(const MarginalTable& table, double epsilon_part,
                             RandomSource& rng) {
  if (epsilon_part <= 0.0)
    throw ValidationError("noisy_marginal needs a positive epsilon share");
  MarginalTable out = table;
  const double scale = 1.0 / epsilon_part;
  for (double& c : out.cells) c = std::max(0.0, c + laplace_noise(scale, rng));
  out.recompute_total();
  return out;
}

std::vector<double> exponential_mechanism_probs(const std::vector<double>& scores,
                                                double sensitivity,
                                                double epsilon_part) {
  if (scores.empty()) throw ValidationError("exponential mechanism needs candidates");
  if (sensitivity <= 0.0 || epsilon_part <= 0.0)
    throw ValidationError("exponential mechanism needs positive epsilon and sensitivity");
  const double k = epsilon_part / (2.0 * sensitivity);
  const double top = *std::max_element(scores.begin(), scores.end());
  std::vector<double> probs(scores.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    probs[i] = std::exp(k * (scores[i] - top));
    sum += probs[i];
  }
  for (double& p : probs) p /= sum;
  return probs;
}

std::size_t exponential_mechanism(const std::vector<double>& scores,
                                  double sensitivity, double epsilon_part,
                                  RandomSource& rng) {
  const std::vector<double> probs =
      exponential_mechanism_probs(scores, sensitivity, epsilon_part);
  return sample_discrete(probs, rng);
}

std::size_t sample_discrete(const std::vector<double>& weights, RandomSource& rng) {
  if (weights.empty()) throw ValidationError("cannot sample from an empty list");
  double sum = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw ValidationError("discrete weights must be non-negative");
    sum += w;
  }
  if (sum <= 0.0) return rng.next_below(weights.size());  // uniform fallback
  const double target = rng.next_double() * sum;
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    acc += weights[i];
    if (target < acc) return i;
  }
  return weights.size() - 1;  // float round-off at the far edge
}

}  // namespace privmia
