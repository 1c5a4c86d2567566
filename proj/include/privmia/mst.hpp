#pragma once

#include <string>
#include <vector>

#include "privmia/dataset.hpp"
#include "privmia/dp.hpp"
#include "privmia/marginal.hpp"
#include "privmia/rng.hpp"

namespace privmia {

struct MstOptions {
  // Sensitivity bound handed to the exponential mechanism for the
  // count-scaled mutual-information score. The attack only needs shadow and
  // target runs to share it, so a fixed constant is sufficient.
  double mi_sensitivity = 0.6931471805599453;  // ln 2
};

// Fitted spanning-tree synthesizer: one noisy 2-way table per tree edge plus
// a noisy 1-way table for the sampling root (feature 0).
struct MstModel {
  Schema schema;
  PrivacyBudget epsilon;
  std::vector<FeatureTuple> edges;          // canonical order, n-1 pairs
  std::vector<MarginalTable> noisy_tables;  // aligned with edges, normalized
  int root_feature = 0;
  MarginalTable root_table;                 // normalized 1-way
  std::vector<FeatureTuple> selection_log;  // chronological picks

  void check_valid() const;  // spanning tree, normalization
};

// Noisy maximum-spanning-tree fit: n-1 exponential-mechanism rounds over
// count-scaled pairwise MI (candidates are the acyclic pairs), then one
// Laplace-noised marginal per edge and one for the root.
MstModel fit_mst(const Dataset& train, const PrivacyBudget& budget,
                 RandomSource& rng, const MstOptions& options = {});

// Ancestral sampling along the tree rooted at the root feature.
Dataset sample_mst(const MstModel& model, std::size_t n_rows, RandomSource& rng);

// The selected edges, each as a canonical sorted pair, in canonical order.
std::vector<FeatureTuple> focal_points_mst(const MstModel& model);

std::string mst_model_to_json(const MstModel& model);
MstModel mst_model_from_json(const std::string& text, const Schema& schema);
void save_mst_model(const std::string& path, const MstModel& model);
MstModel load_mst_model(const std::string& path, const Schema& schema);

}  // namespace privmia
