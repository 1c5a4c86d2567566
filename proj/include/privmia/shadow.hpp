#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "privmia/generator.hpp"

namespace privmia {

struct ShadowConfig {
  GeneratorKind generator_kind = GeneratorKind::kMst;
  PrivacyBudget budget;
  int runs = 50;
  std::size_t train_sample_size = 10000;
  std::uint64_t base_seed = 0;
  // Default resamples the training subset each run; fixed mode reuses the
  // first run's subset for comparison.
  bool fixed_sample = false;
  GeneratorOptions options;
};

// Selection frequency per canonical focal point across shadow runs. Only
// tuples selected at least once appear; absent means never selected.
struct FocalPointWeights {
  std::map<FeatureTuple, double> entries;
  int runs = 0;

  static FocalPointWeights from_tally(const std::map<FeatureTuple, int>& tally,
                                      int runs);
};

// One fit per run on a fresh sample of aux, returning each run's selected
// focal points. No synthetic rows are ever produced. Output is identical for
// any worker count.
std::vector<std::vector<FeatureTuple>> shadow_focal_points(
    const Dataset& aux, const ShadowConfig& config, int workers = 1);

// shadow_focal_points reduced to selection frequencies.
FocalPointWeights run_shadow(const Dataset& aux, const ShadowConfig& config,
                             int workers = 1);

// Tuples with frequency >= min_weight, sorted by descending weight then
// canonical tuple order, with the kept weights renormalized to sum 1.
std::pair<std::vector<FeatureTuple>, std::vector<double>> top_focal_points(
    const FocalPointWeights& weights, double min_weight);

std::string weights_to_json(const FocalPointWeights& weights,
                            const ShadowConfig& config);
FocalPointWeights weights_from_json(const std::string& text);
void save_weights(const std::string& path, const FocalPointWeights& weights,
                  const ShadowConfig& config);
FocalPointWeights load_weights(const std::string& path);

}  // namespace privmia
