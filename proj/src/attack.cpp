#include "privmia/attack.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "privmia/marginal.hpp"
#include "privmia/util.hpp"

namespace privmia {

void CandidateSet::check_valid() const {
  if (!records.has_households())
    throw ValidationError("candidate records need household ids");
  if (records.n_rows() == 0) throw ValidationError("empty candidate set");
  if (min_household_size > 0) {
    for (const auto& [id, rows] : records.household_index())
      if (static_cast<int>(rows.size()) < min_household_size)
        throw ValidationError("candidate household " + std::to_string(id) +
                              " has fewer than " +
                              std::to_string(min_household_size) + " records");
  }
}

namespace {

// Zero denominators only arise at smoothing 0; the uniform probability of
// the table stands in so every ratio term stays finite.
double ratio_term(double numer, double denom, double uniform) {
  if (denom <= 0.0) denom = uniform;
  return numer / denom;
}

void check_scoring_inputs(const Dataset& synth, const Dataset& aux,
                          const std::vector<FeatureTuple>& tuples,
                          const std::vector<double>& weights,
                          const CandidateSet& candidates, double smoothing) {
  if (synth.schema().hash() != aux.schema().hash() ||
      synth.schema().hash() != candidates.records.schema().hash())
    throw ValidationError("synth, aux and candidates must share one schema");
  if (tuples.empty()) throw ValidationError("no focal points to score");
  if (tuples.size() != weights.size())
    throw ValidationError("focal points and weights must align");
  double sum = 0.0;
  for (double w : weights) sum += w;
  if (std::abs(sum - 1.0) > 1e-9)
    throw ValidationError("focal-point weights must be normalized to sum 1");
  if (smoothing < 0.0) throw ValidationError("smoothing must be >= 0");
  if (synth.n_rows() == 0 || aux.n_rows() == 0)
    throw ValidationError("synth and aux must be non-empty");
  candidates.check_valid();
}

}  // namespace

std::vector<double> score_mst(const Dataset& synth, const Dataset& aux,
                              const std::vector<FeatureTuple>& pairs,
                              const std::vector<double>& weights,
                              const CandidateSet& candidates, double smoothing) {
  check_scoring_inputs(synth, aux, pairs, weights, candidates, smoothing);
  for (const FeatureTuple& p : pairs)
    if (p.is_conditional() || p.n_axes() != 2)
      throw ValidationError("MST scoring expects 2-way marginal tuples");

  std::vector<MarginalTable> synth_tables, aux_tables;
  synth_tables.reserve(pairs.size());
  aux_tables.reserve(pairs.size());
  for (const FeatureTuple& p : pairs) {
    synth_tables.push_back(measure_marginal(synth, p));
    aux_tables.push_back(measure_marginal(aux, p));
  }

  const Dataset& recs = candidates.records;
  std::vector<double> lambdas(recs.n_rows(), 0.0);
  std::vector<Value> vals(2);
  for (std::size_t r = 0; r < recs.n_rows(); ++r) {
    double lambda = 0.0;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      vals[0] = recs.at(r, pairs[i].axes()[0]);
      vals[1] = recs.at(r, pairs[i].axes()[1]);
      const double ms = synth_tables[i].smoothed_prob(vals, smoothing);
      const double mb = aux_tables[i].smoothed_prob(vals, smoothing);
      const double uniform = 1.0 / static_cast<double>(aux_tables[i].n_cells());
      lambda += weights[i] * ratio_term(ms, mb, uniform);
    }
    lambdas[r] = lambda;
  }
  return lambdas;
}

std::vector<double> score_privbayes(const Dataset& synth, const Dataset& aux,
                                    const std::vector<FeatureTuple>& conditionals,
                                    const std::vector<double>& weights,
                                    const CandidateSet& candidates,
                                    double smoothing) {
  check_scoring_inputs(synth, aux, conditionals, weights, candidates, smoothing);
  for (const FeatureTuple& c : conditionals)
    if (!c.is_conditional())
      throw ValidationError("PrivBayes scoring expects conditional tuples");

  std::vector<MarginalTable> synth_tables, aux_tables;
  synth_tables.reserve(conditionals.size());
  aux_tables.reserve(conditionals.size());
  for (const FeatureTuple& c : conditionals) {
    synth_tables.push_back(measure_marginal(synth, c));
    aux_tables.push_back(measure_marginal(aux, c));
  }

  const Dataset& recs = candidates.records;
  std::vector<double> lambdas(recs.n_rows(), 0.0);
  for (std::size_t r = 0; r < recs.n_rows(); ++r) {
    double lambda = 0.0;
    for (std::size_t i = 0; i < conditionals.size(); ++i) {
      const FeatureTuple& tuple = conditionals[i];
      const Value child_val = recs.at(r, tuple.child());
      std::vector<Value> parent_vals;
      parent_vals.reserve(tuple.n_axes() - 1);
      for (int a = 1; a < tuple.n_axes(); ++a)
        parent_vals.push_back(recs.at(r, tuple.axes()[a]));
      const double cs =
          conditional_prob(synth_tables[i], child_val, parent_vals, smoothing);
      const double cb =
          conditional_prob(aux_tables[i], child_val, parent_vals, smoothing);
      const double uniform = 1.0 / static_cast<double>(aux_tables[i].sizes[0]);
      lambda += weights[i] * ratio_term(cs, cb, uniform);
    }
    lambdas[r] = lambda;
  }
  return lambdas;
}

std::vector<double> baseline_domias(const Dataset& synth, const Dataset& aux,
                                    const CandidateSet& candidates,
                                    double smoothing) {
  std::vector<FeatureTuple> ones;
  std::vector<double> weights;
  const int n = synth.schema().n_features();
  for (int f = 0; f < n; ++f) {
    ones.push_back(FeatureTuple::marginal({f}));
    weights.push_back(1.0 / n);
  }
  check_scoring_inputs(synth, aux, ones, weights, candidates, smoothing);

  std::vector<MarginalTable> synth_tables, aux_tables;
  for (const FeatureTuple& t : ones) {
    synth_tables.push_back(measure_marginal(synth, t));
    aux_tables.push_back(measure_marginal(aux, t));
  }

  const Dataset& recs = candidates.records;
  std::vector<double> lambdas(recs.n_rows(), 1.0);
  std::vector<Value> val(1);
  for (std::size_t r = 0; r < recs.n_rows(); ++r) {
    double ratio = 1.0;
    for (int f = 0; f < n; ++f) {
      val[0] = recs.at(r, f);
      const double ps = synth_tables[f].smoothed_prob(val, smoothing);
      const double pb = aux_tables[f].smoothed_prob(val, smoothing);
      ratio *= ratio_term(ps, pb, 1.0 / static_cast<double>(aux_tables[f].n_cells()));
    }
    lambdas[r] = ratio;
  }
  return lambdas;
}

double median_log_lambda(const std::vector<double>& lambdas) {
  std::vector<double> logs;
  logs.reserve(lambdas.size());
  for (double l : lambdas) {
    if (l < 0.0) throw ValidationError("lambda must be non-negative");
    if (l > 0.0) logs.push_back(std::log(l));
  }
  if (logs.empty()) return 0.0;
  std::sort(logs.begin(), logs.end());
  const std::size_t n = logs.size();
  if (n % 2 == 1) return logs[n / 2];
  return 0.5 * (logs[n / 2 - 1] + logs[n / 2]);
}

std::vector<double> activate(const std::vector<double>& lambdas,
                             const ActivationParams& params) {
  if (params.confidence <= 0.0)
    throw ValidationError("activation confidence must be positive");
  std::vector<double> probs(lambdas.size());
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    const double l = lambdas[i];
    if (l < 0.0) throw ValidationError("lambda must be non-negative");
    if (l == 0.0) {
      probs[i] = 0.0;  // limit of both modes as lambda -> 0
      continue;
    }
    if (params.mode == ActivationParams::Mode::kSigmoid) {
      probs[i] =
          1.0 / (1.0 + std::exp(-params.confidence *
                                (std::log(l) - params.center)));
    } else {
      probs[i] = std::min(std::pow(l, 1.0 / params.confidence) / 2.0, 1.0);
    }
  }
  return probs;
}

std::map<HouseholdId, double> household_scores(
    const std::vector<double>& prob_per_record, const CandidateSet& candidates) {
  if (prob_per_record.size() != candidates.records.n_rows())
    throw ValidationError("per-record probabilities must match the candidate set");
  std::map<HouseholdId, double> out;
  for (const auto& [id, rows] : candidates.records.household_index()) {
    if (rows.empty())
      throw ValidationError("household without candidate records");
    double sum = 0.0;
    for (std::size_t r : rows) sum += prob_per_record[r];
    out[id] = sum / static_cast<double>(rows.size());
  }
  return out;
}

AttackResult aggregate_attack(const std::vector<double>& lambdas,
                              const ActivationParams& params,
                              const CandidateSet& candidates,
                              bool center_on_median) {
  AttackResult result;
  result.lambda_per_record = lambdas;
  ActivationParams p = params;
  if (center_on_median && p.mode == ActivationParams::Mode::kSigmoid)
    p.center = median_log_lambda(lambdas);
  result.prob_per_record = activate(lambdas, p);
  result.prob_per_household = household_scores(result.prob_per_record, candidates);
  return result;
}

void save_predictions_csv(const std::string& path,
                          const std::map<HouseholdId, double>& predictions) {
  std::ostringstream out;
  out << "household_id,probability\n";
  for (const auto& [id, p] : predictions)
    out << id << ',' << format_double(p) << '\n';
  write_text_file(path, out.str());
}

std::map<HouseholdId, double> load_predictions_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open predictions file: " + path);
  std::string line;
  if (!std::getline(in, line))
    throw ValidationError(path + ": missing header row");
  std::map<HouseholdId, double> out;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const std::size_t comma = line.find(',');
    if (comma == std::string::npos)
      throw ValidationError(path + ": row " + std::to_string(row) +
                            ": expected household_id,probability");
    HouseholdId id = 0;
    double p = 0.0;
    const std::string ids = line.substr(0, comma);
    std::string ps = line.substr(comma + 1);
    if (!ps.empty() && ps.back() == '\r') ps.pop_back();
    auto r1 = std::from_chars(ids.data(), ids.data() + ids.size(), id);
    auto r2 = std::from_chars(ps.data(), ps.data() + ps.size(), p);
    if (r1.ec != std::errc() || r2.ec != std::errc())
      throw ValidationError(path + ": row " + std::to_string(row) +
                            ": bad values");
    out[id] = p;
    ++row;
  }
  return out;
}

}  // namespace privmia
