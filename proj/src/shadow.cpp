#include "privmia/shadow.hpp"

#include <json.hpp>

#include <algorithm>

#include "privmia/parallel.hpp"
#include "privmia/util.hpp"

namespace privmia {

using nlohmann::json;

FocalPointWeights FocalPointWeights::from_tally(
    const std::map<FeatureTuple, int>& tally, int runs) {
  if (runs < 1) throw ValidationError("weights need at least one run");
  FocalPointWeights out;
  out.runs = runs;
  for (const auto& [tuple, count] : tally) {
    if (count <= 0) continue;
    out.entries[tuple] = static_cast<double>(count) / runs;
  }
  return out;
}

std::vector<std::vector<FeatureTuple>> shadow_focal_points(
    const Dataset& aux, const ShadowConfig& config, int workers) {
  if (config.runs < 1) throw ValidationError("shadow needs at least one run");
  if (config.train_sample_size == 0 ||
      config.train_sample_size > aux.n_rows())
    throw ValidationError("shadow sample size must be in [1, |aux|]");

  const RandomSource root(config.base_seed, fnv1a64("shadow"));
  const Dataset aux_plain = aux.without_households();

  std::vector<std::size_t> fixed_rows;
  if (config.fixed_sample) {
    RandomSource sample_rng = root.derive("sample", 0);
    fixed_rows = sample_without_replacement(aux_plain.n_rows(),
                                            config.train_sample_size, sample_rng);
  }

  // One slot per run, filled independently, so results never depend on
  // scheduling.
  std::vector<std::vector<FeatureTuple>> per_run(config.runs);
  parallel_for(config.runs, workers, [&](std::size_t r) {
    std::vector<std::size_t> rows;
    if (config.fixed_sample) {
      rows = fixed_rows;
    } else {
      RandomSource sample_rng = root.derive("sample", r);
      rows = sample_without_replacement(aux_plain.n_rows(),
                                        config.train_sample_size, sample_rng);
    }
    const Dataset train = aux_plain.select_rows(rows);
    RandomSource fit_rng = root.derive("fit", r);
    per_run[r] = fit_focal_points(config.generator_kind, train, config.budget,
                                  fit_rng, config.options);
  });
  return per_run;
}

FocalPointWeights run_shadow(const Dataset& aux, const ShadowConfig& config,
                             int workers) {
  const std::vector<std::vector<FeatureTuple>> per_run =
      shadow_focal_points(aux, config, workers);
  std::map<FeatureTuple, int> tally;
  for (const auto& points : per_run)
    for (const FeatureTuple& t : points) ++tally[t];
  return FocalPointWeights::from_tally(tally, config.runs);
}

std::pair<std::vector<FeatureTuple>, std::vector<double>> top_focal_points(
    const FocalPointWeights& weights, double min_weight) {
  std::vector<std::pair<FeatureTuple, double>> kept;
  for (const auto& [tuple, w] : weights.entries)
    if (w >= min_weight) kept.emplace_back(tuple, w);
  if (kept.empty())
    throw ValidationError("no focal points at or above the weight threshold");

  std::stable_sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });

  double sum = 0.0;
  for (const auto& [tuple, w] : kept) sum += w;
  std::pair<std::vector<FeatureTuple>, std::vector<double>> out;
  for (const auto& [tuple, w] : kept) {
    out.first.push_back(tuple);
    out.second.push_back(w / sum);
  }
  return out;
}

std::string weights_to_json(const FocalPointWeights& weights,
                            const ShadowConfig& config) {
  json out;
  out["generator"] = to_string(config.generator_kind);
  out["epsilon_total"] = config.budget.epsilon_total;
  out["selection_fraction"] = config.budget.selection_fraction;
  out["measurement_fraction"] = config.budget.measurement_fraction;
  out["runs"] = weights.runs;
  out["seed"] = config.base_seed;
  out["train_sample_size"] = config.train_sample_size;
  out["entries"] = json::array();
  for (const auto& [tuple, w] : weights.entries) {
    json e;
    e["tuple"] = tuple.label();
    e["weight"] = w;
    out["entries"].push_back(std::move(e));
  }
  return out.dump(2) + "\n";
}

FocalPointWeights weights_from_json(const std::string& text) {
  json in;
  try {
    in = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("weights parse error: ") + e.what());
  }
  FocalPointWeights out;
  out.runs = in.at("runs").get<int>();
  for (const auto& e : in.at("entries")) {
    const FeatureTuple tuple =
        FeatureTuple::from_label(e.at("tuple").get<std::string>());
    out.entries[tuple] = e.at("weight").get<double>();
  }
  return out;
}

void save_weights(const std::string& path, const FocalPointWeights& weights,
                  const ShadowConfig& config) {
  write_text_file(path, weights_to_json(weights, config));
}

FocalPointWeights load_weights(const std::string& path) {
  return weights_from_json(read_text_file(path));
}

}  // namespace privmia
