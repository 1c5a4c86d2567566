#include "privmia/generator.hpp"

#include "privmia/util.hpp"

namespace privmia {

std::string to_string(GeneratorKind kind) {
  return kind == GeneratorKind::kMst ? "mst" : "privbayes";
}

GeneratorKind generator_kind_from_string(const std::string& s) {
  if (s == "mst") return GeneratorKind::kMst;
  if (s == "privbayes") return GeneratorKind::kPrivBayes;
  throw ValidationError("unknown generator kind: " + s);
}

std::vector<FeatureTuple> fit_focal_points(GeneratorKind kind,
                                           const Dataset& train,
                                           const PrivacyBudget& budget,
                                           RandomSource& rng,
                                           const GeneratorOptions& options) {
  if (kind == GeneratorKind::kMst)
    return focal_points_mst(fit_mst(train, budget, rng, options.mst));
  return focal_points_privbayes(fit_privbayes(train, budget, rng, options.privbayes));
}

}  // namespace privmia
