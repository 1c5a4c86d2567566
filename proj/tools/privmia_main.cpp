// privmia: marginal-based DP tabular synthesizers (MST-style, PrivBayes-style),
// shadow-modelled focal-point discovery, density-ratio membership inference,
// and the repeated-experiment evaluation harness.

#include <CLI11.hpp>
#include <json.hpp>

#include <bit>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "privmia/attack.hpp"
#include "privmia/desk.hpp"
#include "privmia/eval.hpp"
#include "privmia/generator.hpp"
#include "privmia/parallel.hpp"
#include "privmia/shadow.hpp"
#include "privmia/util.hpp"

using nlohmann::json;
using namespace privmia;

namespace {

constexpr const char* kVersion = "0.1.0";

// Flag defaults, overridable by a --config file and then by explicit flags.
struct Defaults {
  double selection_fraction = 0.5;
  MstOptions mst;
  PrivBayesOptions privbayes;
  double smoothing = 0.5;
  std::string activation = "sigmoid";
  double confidence = 2.0;
  double min_weight = 0.0;
  int min_household_size = 5;
  int shadow_runs = 50;
  std::size_t shadow_sample_size = 10000;
  bool fixed_sample = false;
  std::size_t desk_records = 20000;
  double desk_mutation = 0.08;
  int trials = 50;
  int candidates = 100;
  int members = 50;
  std::size_t fill = 10000;
  std::size_t rows = 10000;
  bool shadow_full_aux = false;
  std::vector<double> epsilons{1.0, 10.0, 100.0, 1000.0};
  std::vector<std::string> generators{"mst", "privbayes"};
};

Defaults load_defaults(int argc, char** argv) {
  std::string config_path;
  for (int i = 1; i + 1 < argc; ++i)
    if (std::string(argv[i]) == "--config") config_path = argv[i + 1];
  Defaults d;
  if (config_path.empty()) return d;

  json cfg;
  try {
    cfg = json::parse(read_text_file(config_path));
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config parse error: ") + e.what());
  }
  if (cfg.contains("budget"))
    d.selection_fraction =
        cfg["budget"].value("selection_fraction", d.selection_fraction);
  if (cfg.contains("mst"))
    d.mst.mi_sensitivity =
        cfg["mst"].value("mi_sensitivity", d.mst.mi_sensitivity);
  if (cfg.contains("privbayes")) {
    const json& pb = cfg["privbayes"];
    d.privbayes.domain_cap = pb.value("domain_cap", d.privbayes.domain_cap);
    d.privbayes.hard_k_cap = pb.value("hard_k_cap", d.privbayes.hard_k_cap);
    d.privbayes.k_threshold = pb.value("k_threshold", d.privbayes.k_threshold);
    d.privbayes.mi_sensitivity =
        pb.value("mi_sensitivity", d.privbayes.mi_sensitivity);
  }
  if (cfg.contains("attack")) {
    const json& at = cfg["attack"];
    d.smoothing = at.value("smoothing", d.smoothing);
    d.activation = at.value("activation", d.activation);
    d.confidence = at.value("confidence", d.confidence);
    d.min_weight = at.value("min_weight", d.min_weight);
    d.min_household_size = at.value("min_household_size", d.min_household_size);
  }
  if (cfg.contains("shadow")) {
    const json& sh = cfg["shadow"];
    d.shadow_runs = sh.value("runs", d.shadow_runs);
    d.shadow_sample_size = sh.value("sample_size", d.shadow_sample_size);
    d.fixed_sample = sh.value("fixed_sample", d.fixed_sample);
  }
  if (cfg.contains("desk")) {
    const json& dk = cfg["desk"];
    d.desk_records = dk.value("records", d.desk_records);
    d.desk_mutation = dk.value("mutation_rate", d.desk_mutation);
  }
  if (cfg.contains("experiment")) {
    const json& ex = cfg["experiment"];
    d.trials = ex.value("trials", d.trials);
    d.candidates = ex.value("candidates", d.candidates);
    d.members = ex.value("members", d.members);
    d.min_household_size = ex.value("min_household_size", d.min_household_size);
    d.fill = ex.value("fill", d.fill);
    d.rows = ex.value("rows", d.rows);
    d.shadow_runs = ex.value("shadow_runs", d.shadow_runs);
    d.shadow_full_aux = ex.value("shadow_full_aux", d.shadow_full_aux);
    if (ex.contains("epsilons"))
      d.epsilons = ex["epsilons"].get<std::vector<double>>();
    if (ex.contains("generators"))
      d.generators = ex["generators"].get<std::vector<std::string>>();
  }
  return d;
}

std::string now_utc() {
  const std::time_t t =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

// Records the invocation next to its outputs so every artifact can be traced
// back to the exact command, config and inputs that produced it.
class Manifest {
 public:
  Manifest(std::string command, std::uint64_t seed)
      : command_(std::move(command)), seed_(seed), started_(now_utc()),
        clock_start_(std::chrono::steady_clock::now()) {}

  void add_input(const std::string& path) {
    inputs_[path] = hash_hex(fnv1a64(read_text_file(path)));
  }
  void add_output(const std::string& path) { outputs_.push_back(path); }
  void set_config(json config) { config_ = std::move(config); }

  void write(const std::string& path) const {
    json out;
    out["command"] = command_;
    out["version"] = kVersion;
    out["seed"] = seed_;
    out["config"] = config_;
    out["config_hash"] = hash_hex(fnv1a64(config_.dump()));
    out["inputs"] = inputs_;
    out["outputs"] = outputs_;
    out["started_utc"] = started_;
    out["duration_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(
            std::chrono::steady_clock::now() - clock_start_)
            .count();
    write_text_file(path, out.dump(2) + "\n");
  }

 private:
  std::string command_;
  std::uint64_t seed_;
  std::string started_;
  std::chrono::steady_clock::time_point clock_start_;
  json config_;
  std::map<std::string, std::string> inputs_;
  std::vector<std::string> outputs_;
};

PrivacyBudget make_budget(double epsilon, double selection_fraction) {
  PrivacyBudget b;
  b.epsilon_total = epsilon;
  b.selection_fraction = selection_fraction;
  b.measurement_fraction = 1.0 - selection_fraction;
  b.check_valid();
  return b;
}

ActivationParams make_activation(const std::string& mode, double confidence,
                                 const std::string& center) {
  ActivationParams p;
  if (mode == "sigmoid")
    p.mode = ActivationParams::Mode::kSigmoid;
  else if (mode == "root")
    p.mode = ActivationParams::Mode::kRoot;
  else
    throw ValidationError("activation must be 'sigmoid' or 'root'");
  p.confidence = confidence;
  if (center != "median") p.center = std::stod(center);
  return p;
}

std::string lambdas_csv(const std::vector<double>& lambdas,
                        const CandidateSet& candidates) {
  std::ostringstream out;
  out << "record,household_id,lambda\n";
  for (std::size_t r = 0; r < lambdas.size(); ++r)
    out << r << ',' << candidates.records.household_of(r) << ','
        << format_double(lambdas[r]) << '\n';
  return out.str();
}

// Shadow-frequency plot data: per-edge bars for MST (marginal variability)
// and parent-size bars for PrivBayes.
void write_plot_data(const std::string& out_dir, const Dataset& aux,
                     const ExperimentConfig& config, int workers,
                     Manifest& manifest) {
  std::ostringstream focal;
  focal << "generator,epsilon,tuple,frequency\n";
  std::ostringstream sizes;
  sizes << "epsilon,parent_size,mean_count_per_run\n";

  for (GeneratorKind gen : config.generators) {
    for (double eps : config.epsilons) {
      ShadowConfig sc;
      sc.generator_kind = gen;
      sc.budget = make_budget(eps, config.selection_fraction);
      sc.runs = config.shadow_runs;
      sc.train_sample_size = std::min(config.train_fill_size, aux.n_rows());
      sc.base_seed = mix64(config.seed ^ fnv1a64(to_string(gen)) ^
                           std::bit_cast<std::uint64_t>(eps));
      sc.options = config.options;
      const FocalPointWeights w = run_shadow(aux, sc, workers);
      for (const auto& [tuple, freq] : w.entries)
        focal << to_string(gen) << ',' << format_double(eps) << ','
              << tuple.label() << ',' << format_double(freq) << '\n';
      if (gen == GeneratorKind::kPrivBayes) {
        std::map<int, double> by_size;
        for (const auto& [tuple, freq] : w.entries)
          by_size[tuple.n_axes() - 1] += freq;
        for (const auto& [size, mean_count] : by_size)
          sizes << format_double(eps) << ',' << size << ','
                << format_double(mean_count) << '\n';
      }
    }
  }
  write_text_file(out_dir + "/focal_frequencies.csv", focal.str());
  manifest.add_output(out_dir + "/focal_frequencies.csv");
  write_text_file(out_dir + "/parent_sizes.csv", sizes.str());
  manifest.add_output(out_dir + "/parent_sizes.csv");
}

}  // namespace

int main(int argc, char** argv) {
  Defaults d;
  try {
    d = load_defaults(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  CLI::App app{"marginal-based DP synthesis and membership-inference toolkit"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "JSON config file (flags override)")
      ->expected(1);

  std::uint64_t seed = 0;
  int workers = default_worker_count();

  // gen-desk-data
  auto* gen_cmd = app.add_subcommand(
      "gen-desk-data", "generate the bundled demographic-like dataset");
  std::string gd_out, gd_schema_out;
  std::size_t gd_records = d.desk_records;
  double gd_mutation = d.desk_mutation;
  gen_cmd->add_option("--out", gd_out, "output CSV")->required();
  gen_cmd->add_option("--schema-out", gd_schema_out, "output schema JSON");
  gen_cmd->add_option("--records", gd_records, "record count");
  gen_cmd->add_option("--mutation", gd_mutation, "member mutation rate");
  gen_cmd->add_option("--seed", seed, "random seed");

  // synth
  auto* synth_cmd =
      app.add_subcommand("synth", "fit a generator and emit synthetic rows");
  std::string sy_gen = "mst", sy_data, sy_schema, sy_out, sy_model_out;
  double sy_eps = 1000.0, sy_selection = d.selection_fraction;
  std::size_t sy_rows = d.rows;
  MstOptions sy_mst = d.mst;
  PrivBayesOptions sy_pb = d.privbayes;
  synth_cmd->add_option("--gen", sy_gen, "mst|privbayes");
  synth_cmd->add_option("--data", sy_data, "training CSV")->required();
  synth_cmd->add_option("--schema", sy_schema, "schema JSON")->required();
  synth_cmd->add_option("--eps", sy_eps, "epsilon total");
  synth_cmd->add_option("--rows", sy_rows, "synthetic rows");
  synth_cmd->add_option("--selection-fraction", sy_selection,
                        "budget share for structure selection");
  synth_cmd->add_option("--out", sy_out, "synthetic CSV")->required();
  synth_cmd->add_option("--model-out", sy_model_out, "serialized model JSON");
  synth_cmd->add_option("--seed", seed, "random seed");

  // shadow
  auto* shadow_cmd = app.add_subcommand(
      "shadow", "estimate focal-point selection frequencies");
  std::string sh_gen = "mst", sh_aux, sh_schema, sh_out;
  double sh_eps = 1.0, sh_selection = d.selection_fraction;
  int sh_runs = d.shadow_runs;
  std::size_t sh_sample = d.shadow_sample_size;
  bool sh_fixed = d.fixed_sample;
  shadow_cmd->add_option("--gen", sh_gen, "mst|privbayes");
  shadow_cmd->add_option("--aux", sh_aux, "auxiliary CSV")->required();
  shadow_cmd->add_option("--schema", sh_schema, "schema JSON")->required();
  shadow_cmd->add_option("--eps", sh_eps, "epsilon total");
  shadow_cmd->add_option("--runs", sh_runs, "shadow runs");
  shadow_cmd->add_option("--sample-size", sh_sample, "per-run train sample");
  shadow_cmd->add_flag("--fixed-sample", sh_fixed,
                       "reuse one train sample for every run");
  shadow_cmd->add_option("--selection-fraction", sh_selection,
                         "budget share for structure selection");
  shadow_cmd->add_option("--out", sh_out, "weights JSON")->required();
  shadow_cmd->add_option("--seed", seed, "random seed");
  shadow_cmd->add_option("--workers", workers, "parallel shadow runs");

  // attack
  auto* attack_cmd =
      app.add_subcommand("attack", "score candidates and emit predictions");
  std::string at_gen = "mst", at_synth, at_aux, at_schema, at_weights,
      at_candidates, at_out, at_lambda_out;
  std::string at_activation = d.activation, at_center = "median";
  double at_smoothing = d.smoothing, at_confidence = d.confidence,
         at_min_weight = d.min_weight;
  int at_min_hh = d.min_household_size;
  bool at_relax = false;
  attack_cmd->add_option("--gen", at_gen, "mst|privbayes|baseline");
  attack_cmd->add_option("--synth", at_synth, "synthetic CSV")->required();
  attack_cmd->add_option("--aux", at_aux, "auxiliary CSV")->required();
  attack_cmd->add_option("--schema", at_schema, "schema JSON")->required();
  attack_cmd->add_option("--weights", at_weights, "shadow weights JSON");
  attack_cmd->add_option("--candidates", at_candidates,
                         "candidate CSV with household_id")
      ->required();
  attack_cmd->add_option("--smoothing", at_smoothing, "additive smoothing");
  attack_cmd->add_option("--activation", at_activation, "sigmoid|root");
  attack_cmd->add_option("--confidence", at_confidence, "activation c");
  attack_cmd->add_option("--center", at_center,
                         "'median' or a fixed m for the sigmoid");
  attack_cmd->add_option("--min-weight", at_min_weight,
                         "drop focal points below this shadow frequency");
  attack_cmd->add_option("--min-household-size", at_min_hh,
                         "required candidate household size");
  attack_cmd->add_flag("--relax-household-size", at_relax,
                       "accept candidate households of any size");
  attack_cmd->add_option("--out", at_out, "predictions CSV")->required();
  attack_cmd->add_option("--lambda-out", at_lambda_out, "per-record lambda CSV");

  // eval
  auto* eval_cmd =
      app.add_subcommand("eval", "score predictions against ground truth");
  std::string ev_pred, ev_truth, ev_out;
  eval_cmd->add_option("--pred", ev_pred, "predictions CSV")->required();
  eval_cmd->add_option("--truth", ev_truth, "truth JSON")->required();
  eval_cmd->add_option("--out", ev_out, "result JSON");

  // experiment
  auto* exp_cmd = app.add_subcommand(
      "experiment", "full repeated membership-inference protocol");
  std::string ex_aux, ex_schema, ex_out_dir = "experiment-out";
  bool ex_desk = false, ex_no_plots = false, ex_ablation = false,
       ex_full_aux = d.shadow_full_aux;
  std::size_t ex_desk_records = d.desk_records;
  double ex_desk_mutation = d.desk_mutation;
  std::vector<std::string> ex_gens = d.generators;
  std::vector<double> ex_eps = d.epsilons;
  int ex_trials = d.trials, ex_candidates = d.candidates, ex_members = d.members,
      ex_min_hh = d.min_household_size, ex_shadow_runs = d.shadow_runs;
  std::size_t ex_fill = d.fill, ex_rows = d.rows;
  double ex_selection = d.selection_fraction, ex_smoothing = d.smoothing,
         ex_confidence = d.confidence, ex_min_weight = d.min_weight;
  std::string ex_activation = d.activation;
  exp_cmd->add_option("--aux", ex_aux, "auxiliary CSV with household_id");
  exp_cmd->add_option("--schema", ex_schema, "schema JSON");
  exp_cmd->add_flag("--desk", ex_desk, "generate the desk dataset instead");
  exp_cmd->add_option("--desk-records", ex_desk_records, "desk record count");
  exp_cmd->add_option("--desk-mutation", ex_desk_mutation, "desk mutation rate");
  exp_cmd->add_option("--gens", ex_gens, "generators to run")->delimiter(',');
  exp_cmd->add_option("--eps", ex_eps, "epsilon ladder")->delimiter(',');
  exp_cmd->add_option("--trials", ex_trials, "trials per cell");
  exp_cmd->add_option("--candidates", ex_candidates, "candidate households");
  exp_cmd->add_option("--members", ex_members, "member households");
  exp_cmd->add_option("--min-household-size", ex_min_hh,
                      "candidate household size floor");
  exp_cmd->add_option("--fill", ex_fill, "train fill records");
  exp_cmd->add_option("--rows", ex_rows, "synthetic rows");
  exp_cmd->add_option("--shadow-runs", ex_shadow_runs, "shadow runs per cell");
  exp_cmd->add_option("--selection-fraction", ex_selection,
                      "budget share for structure selection");
  exp_cmd->add_option("--smoothing", ex_smoothing, "attack smoothing");
  exp_cmd->add_option("--activation", ex_activation, "sigmoid|root");
  exp_cmd->add_option("--confidence", ex_confidence, "activation c");
  exp_cmd->add_option("--min-weight", ex_min_weight, "shadow weight threshold");
  exp_cmd->add_flag("--shadow-full-aux", ex_full_aux,
                    "shadow on full aux instead of aux minus candidates");
  exp_cmd->add_flag("--ablation-constant-half", ex_ablation,
                    "replace predictions with constant 0.5");
  exp_cmd->add_flag("--no-plots", ex_no_plots, "skip plot-data emission");
  exp_cmd->add_option("--out-dir", ex_out_dir, "output directory");
  exp_cmd->add_option("--seed", seed, "random seed");
  exp_cmd->add_option("--workers", workers, "parallel trial cells");

  // Parent-level flags (--config) may appear after the subcommand name.
  for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*gen_cmd) {
      DeskConfig cfg;
      cfg.n_records = gd_records;
      cfg.seed = seed;
      cfg.mutation_rate = gd_mutation;
      Manifest manifest("gen-desk-data", seed);
      manifest.set_config(json{{"records", cfg.n_records},
                               {"seed", cfg.seed},
                               {"mutation_rate", cfg.mutation_rate}});
      const Dataset data = generate_desk_dataset(cfg);
      save_dataset_csv(gd_out, data);
      manifest.add_output(gd_out);
      if (!gd_schema_out.empty()) {
        data.schema().save(gd_schema_out);
        manifest.add_output(gd_schema_out);
      }
      manifest.write(gd_out + ".manifest.json");
      std::cout << "wrote " << data.n_rows() << " records ("
                << data.household_index().size() << " households) to " << gd_out
                << "\n";
      return 0;
    }

    if (*synth_cmd) {
      const Schema schema = Schema::load(sy_schema);
      const Dataset train = load_dataset(sy_data, schema);
      const PrivacyBudget budget = make_budget(sy_eps, sy_selection);
      const GeneratorKind kind = generator_kind_from_string(sy_gen);
      Manifest manifest("synth", seed);
      manifest.add_input(sy_schema);
      manifest.add_input(sy_data);
      manifest.set_config(json{{"gen", sy_gen},
                               {"eps", sy_eps},
                               {"rows", sy_rows},
                               {"selection_fraction", sy_selection},
                               {"seed", seed}});
      RandomSource fit_rng(seed, fnv1a64("synth-fit"));
      RandomSource sample_rng(seed, fnv1a64("synth-sample"));
      Dataset synth;
      std::string model_json;
      if (kind == GeneratorKind::kMst) {
        const MstModel model = fit_mst(train.without_households(), budget,
                                       fit_rng, sy_mst);
        synth = sample_mst(model, sy_rows, sample_rng);
        model_json = mst_model_to_json(model);
      } else {
        const BayesNet model = fit_privbayes(train.without_households(), budget,
                                             fit_rng, sy_pb);
        synth = sample_privbayes(model, sy_rows, sample_rng);
        model_json = privbayes_model_to_json(model);
      }
      save_dataset_csv(sy_out, synth);
      manifest.add_output(sy_out);
      if (!sy_model_out.empty()) {
        write_text_file(sy_model_out, model_json);
        manifest.add_output(sy_model_out);
      }
      manifest.write(sy_out + ".manifest.json");
      std::cout << "wrote " << synth.n_rows() << " synthetic rows to " << sy_out
                << "\n";
      return 0;
    }

    if (*shadow_cmd) {
      const Schema schema = Schema::load(sh_schema);
      const Dataset aux = load_dataset(sh_aux, schema);
      ShadowConfig cfg;
      cfg.generator_kind = generator_kind_from_string(sh_gen);
      cfg.budget = make_budget(sh_eps, sh_selection);
      cfg.runs = sh_runs;
      cfg.train_sample_size = std::min(sh_sample, aux.n_rows());
      cfg.base_seed = seed;
      cfg.fixed_sample = sh_fixed;
      cfg.options.mst = d.mst;
      cfg.options.privbayes = d.privbayes;
      Manifest manifest("shadow", seed);
      manifest.add_input(sh_schema);
      manifest.add_input(sh_aux);
      manifest.set_config(json{{"gen", sh_gen},
                               {"eps", sh_eps},
                               {"runs", sh_runs},
                               {"sample_size", cfg.train_sample_size},
                               {"fixed_sample", sh_fixed},
                               {"selection_fraction", sh_selection},
                               {"seed", seed}});
      const FocalPointWeights weights = run_shadow(aux, cfg, workers);
      save_weights(sh_out, weights, cfg);
      manifest.add_output(sh_out);
      manifest.write(sh_out + ".manifest.json");
      std::cout << "tallied " << weights.entries.size()
                << " focal points over " << weights.runs << " runs to "
                << sh_out << "\n";
      return 0;
    }

    if (*attack_cmd) {
      const Schema schema = Schema::load(at_schema);
      const Dataset synth = load_dataset(at_synth, schema).without_households();
      const Dataset aux = load_dataset(at_aux, schema).without_households();
      CandidateSet candidates;
      candidates.records = load_dataset(at_candidates, schema,
                                        std::optional<std::string>("household_id"));
      candidates.min_household_size = at_relax ? 0 : at_min_hh;

      Manifest manifest("attack", seed);
      manifest.add_input(at_schema);
      manifest.add_input(at_synth);
      manifest.add_input(at_aux);
      manifest.add_input(at_candidates);

      std::vector<double> lambdas;
      if (at_gen == "baseline") {
        lambdas = baseline_domias(synth, aux, candidates, at_smoothing);
      } else {
        if (at_weights.empty())
          throw ValidationError("--weights is required for mst/privbayes attacks");
        manifest.add_input(at_weights);
        const FocalPointWeights weights = load_weights(at_weights);
        const auto [tuples, normalized] =
            top_focal_points(weights, at_min_weight);
        const GeneratorKind kind = generator_kind_from_string(at_gen);
        lambdas = kind == GeneratorKind::kMst
                      ? score_mst(synth, aux, tuples, normalized, candidates,
                                  at_smoothing)
                      : score_privbayes(synth, aux, tuples, normalized,
                                        candidates, at_smoothing);
      }
      const ActivationParams params =
          make_activation(at_activation, at_confidence, at_center);
      const AttackResult result = aggregate_attack(
          lambdas, params, candidates, at_center == "median");

      manifest.set_config(json{{"gen", at_gen},
                               {"smoothing", at_smoothing},
                               {"activation", at_activation},
                               {"confidence", at_confidence},
                               {"center", at_center},
                               {"min_weight", at_min_weight},
                               {"min_household_size", candidates.min_household_size}});
      save_predictions_csv(at_out, result.prob_per_household);
      manifest.add_output(at_out);
      if (!at_lambda_out.empty()) {
        write_text_file(at_lambda_out, lambdas_csv(lambdas, candidates));
        manifest.add_output(at_lambda_out);
      }
      manifest.write(at_out + ".manifest.json");
      std::cout << "scored " << result.prob_per_household.size()
                << " candidate households to " << at_out << "\n";
      return 0;
    }

    if (*eval_cmd) {
      const std::map<HouseholdId, double> predictions =
          load_predictions_csv(ev_pred);
      const GroundTruth truth = truth_from_json(read_text_file(ev_truth));
      const double ma = membership_advantage(predictions, truth);
      const double auc_score = auc(predictions, truth);
      json out{{"ma", ma}, {"auc", auc_score}};
      std::cout << "MA  = " << format_double(ma) << "\n"
                << "AUC = " << format_double(auc_score) << "\n";
      if (!ev_out.empty()) {
        write_text_file(ev_out, out.dump(2) + "\n");
        Manifest manifest("eval", seed);
        manifest.add_input(ev_pred);
        manifest.add_input(ev_truth);
        manifest.set_config(json::object());
        manifest.add_output(ev_out);
        manifest.write(ev_out + ".manifest.json");
      }
      return 0;
    }

    if (*exp_cmd) {
      ExperimentConfig cfg;
      cfg.generators.clear();
      for (const std::string& g : ex_gens)
        cfg.generators.push_back(generator_kind_from_string(g));
      cfg.epsilons = ex_eps;
      cfg.trials = ex_trials;
      cfg.n_candidates = ex_candidates;
      cfg.n_members = ex_members;
      cfg.min_household_size = ex_min_hh;
      cfg.train_fill_size = ex_fill;
      cfg.synth_rows = ex_rows;
      cfg.shadow_runs = ex_shadow_runs;
      cfg.seed = seed;
      cfg.selection_fraction = ex_selection;
      cfg.smoothing = ex_smoothing;
      cfg.shadow_min_weight = ex_min_weight;
      cfg.activation = make_activation(ex_activation, ex_confidence, "median");
      cfg.shadow_full_aux = ex_full_aux;
      cfg.ablation_constant_half = ex_ablation;
      cfg.options.mst = d.mst;
      cfg.options.privbayes = d.privbayes;
      cfg.check_valid();

      Manifest manifest("experiment", seed);
      Dataset aux;
      if (ex_desk) {
        DeskConfig dk;
        dk.n_records = ex_desk_records;
        dk.seed = seed;
        dk.mutation_rate = ex_desk_mutation;
        aux = generate_desk_dataset(dk);
      } else {
        if (ex_aux.empty() || ex_schema.empty())
          throw ValidationError("experiment needs --aux and --schema, or --desk");
        const Schema schema = Schema::load(ex_schema);
        manifest.add_input(ex_schema);
        manifest.add_input(ex_aux);
        aux = load_dataset(ex_aux, schema);
      }

      std::error_code ec;
      std::filesystem::create_directories(ex_out_dir, ec);
      const ExperimentResult result = run_experiment(aux, cfg, workers);

      const std::string report = experiment_report_json(cfg, result);
      write_text_file(ex_out_dir + "/report.json", report);
      manifest.add_output(ex_out_dir + "/report.json");
      write_text_file(ex_out_dir + "/ma_vs_eps.csv", ma_vs_eps_csv(result));
      manifest.add_output(ex_out_dir + "/ma_vs_eps.csv");
      if (!ex_no_plots)
        write_plot_data(ex_out_dir, aux.without_households(), cfg, workers,
                        manifest);

      manifest.set_config(json::parse(report)["config"]);
      manifest.write(ex_out_dir + "/manifest.json");
      for (const MAResult& cell : result.cells)
        std::cout << to_string(cell.generator) << " eps="
                  << format_double(cell.epsilon)
                  << "  MA=" << format_double(cell.mean_ma)
                  << "  AUC=" << format_double(cell.mean_auc) << "\n";
      return 0;
    }
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
