#pragma once

#include <string>
#include <vector>

#include "privmia/mst.hpp"
#include "privmia/privbayes.hpp"

namespace privmia {

enum class GeneratorKind { kMst, kPrivBayes };

std::string to_string(GeneratorKind kind);
GeneratorKind generator_kind_from_string(const std::string& s);

struct GeneratorOptions {
  MstOptions mst;
  PrivBayesOptions privbayes;
};

// Fit the chosen generator and return only its focal points; the fitted
// model is dropped, so shadow runs never hold synthetic state.
std::vector<FeatureTuple> fit_focal_points(GeneratorKind kind,
                                           const Dataset& train,
                                           const PrivacyBudget& budget,
                                           RandomSource& rng,
                                           const GeneratorOptions& options = {});

}  // namespace privmia
