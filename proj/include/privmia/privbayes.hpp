#pragma once

#include <string>
#include <vector>

#include "privmia/dataset.hpp"
#include "privmia/dp.hpp"
#include "privmia/marginal.hpp"
#include "privmia/rng.hpp"

namespace privmia {

struct PrivBayesOptions {
  // Largest conditional table (child card x parent domain product) a
  // candidate parent set may produce.
  double domain_cap = 1e4;
  // Hard ceiling on the parent count regardless of budget.
  int hard_k_cap = 4;
  // k is the largest value whose worst-case average stratum count stays
  // above k_threshold * max_cardinality / eps_measurement.
  double k_threshold = 5.0;
  double mi_sensitivity = 0.6931471805599453;  // ln 2
};

// Fitted Bayesian-network synthesizer: a topological feature order, a parent
// set per feature (|parents| <= k), and one per-stratum-normalized noisy
// conditional table per feature.
struct BayesNet {
  Schema schema;
  PrivacyBudget epsilon;
  int k = 1;
  std::vector<int> order;                        // permutation of features
  std::vector<std::vector<int>> parents;         // aligned with order
  std::vector<MarginalTable> noisy_conditionals; // aligned with order
  std::vector<FeatureTuple> selection_log;

  void check_valid() const;
};

// Budget-driven maximum parent count, non-decreasing in epsilon and capped.
int choose_k(const PrivacyBudget& budget, const Schema& schema,
             std::size_t train_rows, const PrivBayesOptions& options = {});

// Greedy noisy construction: a uniformly random root, then one exponential-
// mechanism pick per position over (child, parent-set) candidates scored by
// count-scaled MI; every chosen conditional is measured, noised and
// normalized per parent stratum.
BayesNet fit_privbayes(const Dataset& train, const PrivacyBudget& budget,
                       RandomSource& rng, const PrivBayesOptions& options = {});

// Ancestral sampling in network order with uniform fallback on zero strata.
Dataset sample_privbayes(const BayesNet& model, std::size_t n_rows,
                         RandomSource& rng);

// The n conditionals in network order, each canonical (child, sorted parents).
std::vector<FeatureTuple> focal_points_privbayes(const BayesNet& model);

std::string privbayes_model_to_json(const BayesNet& model);
BayesNet privbayes_model_from_json(const std::string& text, const Schema& schema);
void save_privbayes_model(const std::string& path, const BayesNet& model);
BayesNet load_privbayes_model(const std::string& path, const Schema& schema);

}  // namespace privmia
