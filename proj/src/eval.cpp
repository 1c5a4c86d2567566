#include "privmia/eval.hpp"

#include <json.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include "privmia/parallel.hpp"
#include "privmia/util.hpp"

namespace privmia {

using nlohmann::json;

void GroundTruth::check_valid() const {
  for (HouseholdId id : member_households)
    if (!all_candidate_households.count(id))
      throw ValidationError("member household " + std::to_string(id) +
                            " is not a candidate");
}

double membership_advantage(const std::map<HouseholdId, double>& predictions,
                            const GroundTruth& truth) {
  truth.check_valid();
  double member_weight = 0.0, member_hit_weight = 0.0;
  double non_weight = 0.0, non_false_weight = 0.0;
  for (HouseholdId id : truth.all_candidate_households) {
    auto it = predictions.find(id);
    if (it == predictions.end())
      throw ValidationError("missing prediction for household " +
                            std::to_string(id));
    const double p = it->second;
    if (p < 0.0 || p > 1.0)
      throw ValidationError("probability outside [0,1] for household " +
                            std::to_string(id));
    const double weight = 2.0 * std::abs(0.5 - p);
    const bool called_member = p > 0.5;
    if (truth.member_households.count(id)) {
      member_weight += weight;
      if (called_member) member_hit_weight += weight;
    } else {
      non_weight += weight;
      if (called_member) non_false_weight += weight;
    }
  }
  const double tpr = member_weight > 0.0 ? member_hit_weight / member_weight : 0.0;
  const double fpr = non_weight > 0.0 ? non_false_weight / non_weight : 0.0;
  return (tpr - fpr + 1.0) / 2.0;
}

double auc(const std::map<HouseholdId, double>& predictions,
           const GroundTruth& truth) {
  truth.check_valid();
  std::vector<double> members, others;
  for (HouseholdId id : truth.all_candidate_households) {
    auto it = predictions.find(id);
    if (it == predictions.end())
      throw ValidationError("missing prediction for household " +
                            std::to_string(id));
    if (truth.member_households.count(id))
      members.push_back(it->second);
    else
      others.push_back(it->second);
  }
  if (members.empty() || others.empty())
    throw ValidationError("AUC needs both members and non-members");
  double wins = 0.0;
  for (double m : members)
    for (double o : others) {
      if (m > o)
        wins += 1.0;
      else if (m == o)
        wins += 0.5;
    }
  return wins / (static_cast<double>(members.size()) *
                 static_cast<double>(others.size()));
}

void ExperimentConfig::check_valid() const {
  if (generators.empty() || epsilons.empty())
    throw ValidationError("experiment needs generators and epsilons");
  for (double e : epsilons)
    if (e <= 0.0) throw ValidationError("epsilon must be positive");
  if (trials < 1) throw ValidationError("trials must be >= 1");
  if (n_candidates < 1 || n_members < 1 || n_members > n_candidates)
    throw ValidationError("need 1 <= n_members <= n_candidates");
  if (min_household_size < 1)
    throw ValidationError("min_household_size must be >= 1");
  if (train_fill_size == 0 || synth_rows == 0)
    throw ValidationError("train_fill_size and synth_rows must be positive");
  if (shadow_runs < 1) throw ValidationError("shadow_runs must be >= 1");
  if (selection_fraction <= 0.0 || selection_fraction >= 1.0)
    throw ValidationError("selection_fraction must lie in (0, 1)");
  if (smoothing < 0.0) throw ValidationError("smoothing must be >= 0");
}

namespace {

std::uint64_t seed_of(RandomSource rs) { return rs.next_u64(); }

std::uint64_t eps_bits(double epsilon) {
  return std::bit_cast<std::uint64_t>(epsilon);
}

}  // namespace

TrialContext make_trial_context(const Dataset& aux,
                                const ExperimentConfig& config,
                                std::uint64_t trial_seed) {
  config.check_valid();
  if (!aux.has_households())
    throw ValidationError("experiment aux data needs household ids");

  const HouseholdIndex index = aux.household_index();
  std::vector<HouseholdId> eligible;
  for (const auto& [id, rows] : index)
    if (static_cast<int>(rows.size()) >= config.min_household_size)
      eligible.push_back(id);
  if (static_cast<int>(eligible.size()) < config.n_candidates)
    throw ValidationError("not enough households of size >= " +
                          std::to_string(config.min_household_size));

  const RandomSource root(trial_seed, fnv1a64("trial"));

  TrialContext ctx;
  {
    RandomSource rng = root.derive("candidates", 0);
    for (std::size_t i :
         sample_without_replacement(eligible.size(), config.n_candidates, rng))
      ctx.candidate_households.push_back(eligible[i]);
  }
  {
    RandomSource rng = root.derive("members", 0);
    for (std::size_t i : sample_without_replacement(
             ctx.candidate_households.size(), config.n_members, rng))
      ctx.truth.member_households.insert(ctx.candidate_households[i]);
  }
  ctx.truth.all_candidate_households.insert(ctx.candidate_households.begin(),
                                            ctx.candidate_households.end());

  // Candidate records in (household id, row) order.
  std::vector<bool> is_candidate_row(aux.n_rows(), false);
  std::vector<std::size_t> candidate_rows;
  for (HouseholdId id : ctx.truth.all_candidate_households)
    for (std::size_t r : index.at(id)) {
      candidate_rows.push_back(r);
      is_candidate_row[r] = true;
    }
  ctx.candidates.records = aux.select_rows(candidate_rows);
  ctx.candidates.min_household_size = config.min_household_size;

  // Train fill: per-record sample of aux with every candidate row excluded.
  std::vector<std::size_t> pool;
  pool.reserve(aux.n_rows() - candidate_rows.size());
  for (std::size_t r = 0; r < aux.n_rows(); ++r)
    if (!is_candidate_row[r]) pool.push_back(r);
  if (pool.size() < config.train_fill_size)
    throw ValidationError("aux too small for the requested train fill");

  std::vector<std::size_t> train_rows;
  {
    RandomSource rng = root.derive("fill", 0);
    for (std::size_t i :
         sample_without_replacement(pool.size(), config.train_fill_size, rng))
      train_rows.push_back(pool[i]);
  }
  for (std::size_t r : train_rows)
    if (is_candidate_row[r])
      throw ValidationError("train fill leaked a candidate record");
  for (HouseholdId id : ctx.truth.member_households)
    for (std::size_t r : index.at(id)) train_rows.push_back(r);

  ctx.train = aux.select_rows(train_rows).without_households();
  ctx.shadow_pool = config.shadow_full_aux
                        ? aux.without_households()
                        : aux.select_rows(pool).without_households();
  ctx.train_hash = ctx.train.content_hash();
  return ctx;
}

TrialOutcome run_trial_cell(const Dataset& aux, const ExperimentConfig& config,
                            const TrialContext& context, GeneratorKind generator,
                            double epsilon, std::uint64_t trial_seed) {
  if (context.train.content_hash() != context.train_hash)
    throw ValidationError("trial context mutated between cells");

  PrivacyBudget budget;
  budget.epsilon_total = epsilon;
  budget.selection_fraction = config.selection_fraction;
  budget.measurement_fraction = 1.0 - config.selection_fraction;

  const RandomSource cell =
      RandomSource(trial_seed, fnv1a64("cell"))
          .derive(generator == GeneratorKind::kMst ? 0 : 1)
          .derive(eps_bits(epsilon));

  // Target generator run.
  Dataset synth;
  {
    RandomSource fit_rng = cell.derive("fit", 0);
    RandomSource sample_rng = cell.derive("synth", 0);
    if (generator == GeneratorKind::kMst) {
      const MstModel model =
          fit_mst(context.train, budget, fit_rng, config.options.mst);
      synth = sample_mst(model, config.synth_rows, sample_rng);
    } else {
      const BayesNet model =
          fit_privbayes(context.train, budget, fit_rng, config.options.privbayes);
      synth = sample_privbayes(model, config.synth_rows, sample_rng);
    }
  }

  // Attacker side: shadow the generator, then score the candidates.
  ShadowConfig shadow_cfg;
  shadow_cfg.generator_kind = generator;
  shadow_cfg.budget = budget;
  shadow_cfg.runs = config.shadow_runs;
  shadow_cfg.train_sample_size =
      std::min(context.train.n_rows(), context.shadow_pool.n_rows());
  shadow_cfg.base_seed = seed_of(cell.derive("shadow", 0));
  shadow_cfg.options = config.options;
  const FocalPointWeights weights = run_shadow(context.shadow_pool, shadow_cfg);
  const auto [tuples, normalized] =
      top_focal_points(weights, config.shadow_min_weight);

  std::map<HouseholdId, double> predictions;
  if (config.ablation_constant_half) {
    for (HouseholdId id : context.truth.all_candidate_households)
      predictions[id] = 0.5;
  } else {
    const std::vector<double> lambdas =
        generator == GeneratorKind::kMst
            ? score_mst(synth, aux.without_households(), tuples, normalized,
                        context.candidates, config.smoothing)
            : score_privbayes(synth, aux.without_households(), tuples,
                              normalized, context.candidates, config.smoothing);
    const AttackResult attack =
        aggregate_attack(lambdas, config.activation, context.candidates);
    predictions = attack.prob_per_household;
  }

  TrialOutcome outcome;
  outcome.ma = membership_advantage(predictions, context.truth);
  outcome.auc = auc(predictions, context.truth);
  return outcome;
}

TrialOutcome run_trial(const Dataset& aux, const ExperimentConfig& config,
                       GeneratorKind generator, double epsilon,
                       std::uint64_t trial_seed) {
  const TrialContext context = make_trial_context(aux, config, trial_seed);
  return run_trial_cell(aux, config, context, generator, epsilon, trial_seed);
}

const MAResult& ExperimentResult::cell(GeneratorKind g, double epsilon) const {
  for (const MAResult& c : cells)
    if (c.generator == g && c.epsilon == epsilon) return c;
  throw ValidationError("no such experiment cell");
}

ExperimentResult run_experiment(const Dataset& aux,
                                const ExperimentConfig& config, int workers) {
  config.check_valid();

  std::vector<std::uint64_t> trial_seeds(config.trials);
  for (int t = 0; t < config.trials; ++t)
    trial_seeds[t] = mix64(config.seed + 0x51ed2701ULL * (t + 1));

  std::vector<TrialContext> contexts(config.trials);
  for (int t = 0; t < config.trials; ++t)
    contexts[t] = make_trial_context(aux, config, trial_seeds[t]);

  struct Cell {
    int trial;
    std::size_t gen;
    std::size_t eps;
  };
  std::vector<Cell> cells;
  for (int t = 0; t < config.trials; ++t)
    for (std::size_t g = 0; g < config.generators.size(); ++g)
      for (std::size_t e = 0; e < config.epsilons.size(); ++e)
        cells.push_back({t, g, e});

  std::vector<TrialOutcome> outcomes(cells.size());
  parallel_for(cells.size(), workers, [&](std::size_t i) {
    const Cell& c = cells[i];
    outcomes[i] = run_trial_cell(aux, config, contexts[c.trial],
                                 config.generators[c.gen],
                                 config.epsilons[c.eps], trial_seeds[c.trial]);
  });

  ExperimentResult result;
  for (std::size_t g = 0; g < config.generators.size(); ++g)
    for (std::size_t e = 0; e < config.epsilons.size(); ++e) {
      MAResult cell;
      cell.generator = config.generators[g];
      cell.epsilon = config.epsilons[e];
      for (int t = 0; t < config.trials; ++t) {
        const std::size_t idx =
            (static_cast<std::size_t>(t) * config.generators.size() + g) *
                config.epsilons.size() +
            e;
        cell.trials.push_back(outcomes[idx]);
        cell.mean_ma += outcomes[idx].ma;
        cell.mean_auc += outcomes[idx].auc;
      }
      cell.mean_ma /= config.trials;
      cell.mean_auc /= config.trials;
      result.cells.push_back(std::move(cell));
    }
  return result;
}

std::string experiment_report_json(const ExperimentConfig& config,
                                   const ExperimentResult& result) {
  json out;
  json cfg;
  cfg["generators"] = json::array();
  for (GeneratorKind g : config.generators)
    cfg["generators"].push_back(to_string(g));
  cfg["epsilons"] = config.epsilons;
  cfg["trials"] = config.trials;
  cfg["n_candidates"] = config.n_candidates;
  cfg["n_members"] = config.n_members;
  cfg["min_household_size"] = config.min_household_size;
  cfg["train_fill_size"] = config.train_fill_size;
  cfg["synth_rows"] = config.synth_rows;
  cfg["shadow_runs"] = config.shadow_runs;
  cfg["seed"] = config.seed;
  cfg["selection_fraction"] = config.selection_fraction;
  cfg["smoothing"] = config.smoothing;
  cfg["shadow_min_weight"] = config.shadow_min_weight;
  cfg["activation"] =
      config.activation.mode == ActivationParams::Mode::kSigmoid ? "sigmoid"
                                                                 : "root";
  cfg["confidence"] = config.activation.confidence;
  cfg["shadow_full_aux"] = config.shadow_full_aux;
  cfg["ablation_constant_half"] = config.ablation_constant_half;
  out["config"] = std::move(cfg);

  out["results"] = json::array();
  for (const MAResult& cell : result.cells) {
    json jc;
    jc["generator"] = to_string(cell.generator);
    jc["epsilon"] = cell.epsilon;
    jc["mean_ma"] = cell.mean_ma;
    jc["mean_auc"] = cell.mean_auc;
    jc["trial_ma"] = json::array();
    jc["trial_auc"] = json::array();
    for (const TrialOutcome& t : cell.trials) {
      jc["trial_ma"].push_back(t.ma);
      jc["trial_auc"].push_back(t.auc);
    }
    out["results"].push_back(std::move(jc));
  }
  return out.dump(2) + "\n";
}

std::string ma_vs_eps_csv(const ExperimentResult& result) {
  std::ostringstream out;
  out << "generator,epsilon,mean_ma,mean_auc\n";
  for (const MAResult& cell : result.cells)
    out << to_string(cell.generator) << ',' << format_double(cell.epsilon)
        << ',' << format_double(cell.mean_ma) << ','
        << format_double(cell.mean_auc) << '\n';
  return out.str();
}

std::string truth_to_json(const GroundTruth& truth) {
  json out;
  out["members"] = json::array();
  for (HouseholdId id : truth.member_households) out["members"].push_back(id);
  out["candidates"] = json::array();
  for (HouseholdId id : truth.all_candidate_households)
    out["candidates"].push_back(id);
  return out.dump(2) + "\n";
}

GroundTruth truth_from_json(const std::string& text) {
  json in;
  try {
    in = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("truth parse error: ") + e.what());
  }
  GroundTruth truth;
  for (const auto& id : in.at("members"))
    truth.member_households.insert(id.get<HouseholdId>());
  for (const auto& id : in.at("candidates"))
    truth.all_candidate_households.insert(id.get<HouseholdId>());
  truth.check_valid();
  return truth;
}

}  // namespace privmia
