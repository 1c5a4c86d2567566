#include "privmia/privbayes.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <map>

#include "privmia/util.hpp"

namespace privmia {

using nlohmann::json;

namespace {

// Normalize each parent stratum of a conditional table (child on axis 0) to
// a distribution over the child; all-zero strata become uniform.
void normalize_per_stratum(MarginalTable& table) {
  const std::size_t child_card = static_cast<std::size_t>(table.sizes[0]);
  const std::size_t parent_total = table.cells.size() / child_card;
  for (std::size_t p = 0; p < parent_total; ++p) {
    double sum = 0.0;
    for (std::size_t c = 0; c < child_card; ++c)
      sum += table.cells[c * parent_total + p];
    if (sum <= 0.0) {
      const double u = 1.0 / static_cast<double>(child_card);
      for (std::size_t c = 0; c < child_card; ++c)
        table.cells[c * parent_total + p] = u;
    } else {
      for (std::size_t c = 0; c < child_card; ++c)
        table.cells[c * parent_total + p] /= sum;
    }
  }
  table.recompute_total();
}

// All subsets of `placed` with size <= k whose table stays within the domain
// cap (child cardinality included). The empty set always qualifies.
void enumerate_parent_sets(const std::vector<int>& placed,
                           const std::vector<double>& cards, double child_card,
                           int k, double domain_cap,
                           std::vector<std::vector<int>>& out) {
  std::vector<int> current;
  auto recurse = [&](auto&& self, std::size_t start, double product) -> void {
    out.push_back(current);
    if (static_cast<int>(current.size()) == k) return;
    for (std::size_t i = start; i < placed.size(); ++i) {
      const double next = product * cards[placed[i]];
      if (child_card * next > domain_cap) continue;
      current.push_back(placed[i]);
      self(self, i + 1, next);
      current.pop_back();
    }
  };
  recurse(recurse, 0, 1.0);
}

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace

void BayesNet::check_valid() const {
  const int n = schema.n_features();
  if (static_cast<int>(order.size()) != n ||
      static_cast<int>(parents.size()) != n ||
      static_cast<int>(noisy_conditionals.size()) != n)
    throw ValidationError("BayesNet must cover every feature once");
  std::vector<int> position(n, -1);
  for (int i = 0; i < n; ++i) {
    const int f = order[i];
    if (f < 0 || f >= n || position[f] != -1)
      throw ValidationError("BayesNet order must be a permutation");
    position[f] = i;
  }
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(parents[i].size()) > k)
      throw ValidationError("parent set exceeds k");
    for (int p : parents[i])
      if (position[p] >= i)
        throw ValidationError("parents must appear earlier in the order");
    const MarginalTable& t = noisy_conditionals[i];
    const std::size_t child_card = static_cast<std::size_t>(t.sizes[0]);
    const std::size_t parent_total = t.cells.size() / child_card;
    for (std::size_t s = 0; s < parent_total; ++s) {
      double sum = 0.0;
      for (std::size_t c = 0; c < child_card; ++c)
        sum += t.cells[c * parent_total + s];
      if (std::abs(sum - 1.0) > 1e-9)
        throw ValidationError("conditional stratum not normalized");
    }
  }
}

int choose_k(const PrivacyBudget& budget, const Schema& schema,
             std::size_t train_rows, const PrivBayesOptions& options) {
  budget.check_valid();
  if (train_rows == 0) throw ValidationError("choose_k needs train rows");
  const int n = schema.n_features();
  const int cap = std::min(options.hard_k_cap, std::max(n - 1, 1));
  if (n < 2) return 1;

  const BudgetSplit split = split_budget(budget, std::max(n - 1, 1), n);
  std::vector<double> cards;
  for (const Feature& f : schema.features()) cards.push_back(f.cardinality);
  std::sort(cards.begin(), cards.end(), std::greater<>());

  const double threshold =
      options.k_threshold * cards.front() / split.measurement_eps_per_table;
  int best = 1;
  double worst_product = 1.0;
  for (int k = 1; k <= cap; ++k) {
    worst_product *= cards[k - 1];
    if (static_cast<double>(train_rows) / worst_product >= threshold) best = k;
  }
  return best;
}

BayesNet fit_privbayes(const Dataset& train, const PrivacyBudget& budget,
                       RandomSource& rng, const PrivBayesOptions& options) {
  const int n = train.schema().n_features();
  if (n < 1) throw ValidationError("PrivBayes needs at least one feature");
  if (train.n_rows() == 0)
    throw ValidationError("PrivBayes needs a non-empty train set");
  budget.check_valid();

  const BudgetSplit split = split_budget(budget, std::max(n - 1, 1), n);
  const int k = choose_k(budget, train.schema(), train.n_rows(), options);
  const double rows = static_cast<double>(train.n_rows());

  std::vector<double> cards;
  for (const Feature& f : train.schema().features())
    cards.push_back(f.cardinality);

  BayesNet model;
  model.schema = train.schema();
  model.epsilon = budget;
  model.k = k;

  const int root = static_cast<int>(rng.next_below(n));
  model.order.push_back(root);
  model.parents.push_back({});
  model.selection_log.push_back(FeatureTuple::conditional(root, {}));

  std::vector<int> placed{root};
  std::vector<bool> is_placed(n, false);
  is_placed[root] = true;

  // MI values survive across positions: a (child, parent-set) score never
  // changes once computable.
  std::map<FeatureTuple, double> mi_cache;

  for (int position = 1; position < n; ++position) {
    std::vector<FeatureTuple> candidates;
    std::vector<double> scores;
    for (int child = 0; child < n; ++child) {
      if (is_placed[child]) continue;
      std::vector<std::vector<int>> parent_sets;
      enumerate_parent_sets(placed, cards, cards[child], k, options.domain_cap,
                            parent_sets);
      for (std::vector<int>& set : parent_sets) {
        FeatureTuple tuple = FeatureTuple::conditional(child, std::move(set));
        auto it = mi_cache.find(tuple);
        double mi;
        if (it != mi_cache.end()) {
          mi = it->second;
        } else {
          mi = mutual_information(train, tuple.child(), tuple.parents());
          mi_cache.emplace(tuple, mi);
        }
        scores.push_back(rows * mi);
        candidates.push_back(std::move(tuple));
      }
    }
    const std::size_t pick = exponential_mechanism(
        scores, options.mi_sensitivity, split.selection_eps_per_round, rng);
    const FeatureTuple& chosen = candidates[pick];
    model.order.push_back(chosen.child());
    model.parents.push_back(chosen.parents());
    model.selection_log.push_back(chosen);
    placed.push_back(chosen.child());
    is_placed[chosen.child()] = true;
  }

  for (int i = 0; i < n; ++i) {
    MarginalTable t = noisy_marginal(
        measure_marginal(train,
                         FeatureTuple::conditional(model.order[i], model.parents[i])),
        split.measurement_eps_per_table, rng);
    normalize_per_stratum(t);
    model.noisy_conditionals.push_back(std::move(t));
  }
  return model;
}

Dataset sample_privbayes(const BayesNet& model, std::size_t n_rows,
                         RandomSource& rng) {
  if (n_rows == 0) throw ValidationError("sample_privbayes needs n_rows > 0");
  model.check_valid();
  const int n = model.schema.n_features();

  Dataset out(model.schema, n_rows);
  std::vector<double> slice;
  for (std::size_t r = 0; r < n_rows; ++r) {
    for (int i = 0; i < n; ++i) {
      const MarginalTable& table = model.noisy_conditionals[i];
      const std::size_t child_card = static_cast<std::size_t>(table.sizes[0]);
      const std::size_t parent_total = table.cells.size() / child_card;
      std::size_t parent_flat = 0;
      for (std::size_t a = 1; a < table.sizes.size(); ++a)
        parent_flat = parent_flat * static_cast<std::size_t>(table.sizes[a]) +
                      static_cast<std::size_t>(
                          out.at(r, table.tuple.axes()[a]));
      slice.resize(child_card);
      for (std::size_t c = 0; c < child_card; ++c)
        slice[c] = table.cells[c * parent_total + parent_flat];
      out.set(r, model.order[i], static_cast<Value>(sample_discrete(slice, rng)));
    }
  }
  return out;
}

std::vector<FeatureTuple> focal_points_privbayes(const BayesNet& model) {
  std::vector<FeatureTuple> out;
  out.reserve(model.order.size());
  for (std::size_t i = 0; i < model.order.size(); ++i)
    out.push_back(FeatureTuple::conditional(model.order[i], model.parents[i]));
  return out;
}

std::string privbayes_model_to_json(const BayesNet& model) {
  json out;
  out["type"] = "privbayes";
  out["schema_hash"] = hash_hex(model.schema.hash());
  out["epsilon_total"] = model.epsilon.epsilon_total;
  out["selection_fraction"] = model.epsilon.selection_fraction;
  out["measurement_fraction"] = model.epsilon.measurement_fraction;
  out["k"] = model.k;
  out["order"] = model.order;
  out["parents"] = model.parents;
  out["selection_log"] = json::array();
  for (const FeatureTuple& t : model.selection_log)
    out["selection_log"].push_back(t.label());
  out["conditionals"] = json::array();
  for (const MarginalTable& t : model.noisy_conditionals) {
    json jt;
    jt["tuple"] = t.tuple.label();
    jt["cells"] = t.cells;
    out["conditionals"].push_back(std::move(jt));
  }
  return out.dump(2) + "\n";
}

BayesNet privbayes_model_from_json(const std::string& text, const Schema& schema) {
  json in;
  try {
    in = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("model parse error: ") + e.what());
  }
  if (in.value("type", std::string()) != "privbayes")
    throw ValidationError("not a PrivBayes model file");
  if (in.at("schema_hash").get<std::string>() != hash_hex(schema.hash()))
    throw ValidationError("model was fitted against a different schema");

  BayesNet model;
  model.schema = schema;
  model.epsilon.epsilon_total = in.at("epsilon_total").get<double>();
  model.epsilon.selection_fraction = in.at("selection_fraction").get<double>();
  model.epsilon.measurement_fraction = in.at("measurement_fraction").get<double>();
  model.k = in.at("k").get<int>();
  model.order = in.at("order").get<std::vector<int>>();
  model.parents = in.at("parents").get<std::vector<std::vector<int>>>();
  for (const auto& t : in.at("selection_log"))
    model.selection_log.push_back(FeatureTuple::from_label(t.get<std::string>()));
  for (const auto& jt : in.at("conditionals")) {
    MarginalTable t;
    t.tuple = FeatureTuple::from_label(jt.at("tuple").get<std::string>());
    t.tuple.check_valid(schema);
    for (int f : t.tuple.axes()) t.sizes.push_back(schema.cardinality(f));
    t.cells = jt.at("cells").get<std::vector<double>>();
    std::size_t expect = 1;
    for (int s : t.sizes) expect *= static_cast<std::size_t>(s);
    if (t.cells.size() != expect)
      throw ValidationError("serialized conditional has wrong cell count");
    t.recompute_total();
    model.noisy_conditionals.push_back(std::move(t));
  }
  model.check_valid();
  return model;
}

void save_privbayes_model(const std::string& path, const BayesNet& model) {
  write_text_file(path, privbayes_model_to_json(model));
}

BayesNet load_privbayes_model(const std::string& path, const Schema& schema) {
  return privbayes_model_from_json(read_text_file(path), schema);
}

}  // namespace privmia
