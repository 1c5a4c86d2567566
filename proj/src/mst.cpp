#include "privmia/mst.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "privmia/util.hpp"

namespace privmia {

using nlohmann::json;

namespace {

// Union-find over feature indices.
class DisjointSets {
 public:
  explicit DisjointSets(int n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  int find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[b] = a;
    return true;
  }

 private:
  std::vector<int> parent_;
};

}  // namespace

void MstModel::check_valid() const {
  const int n = schema.n_features();
  if (static_cast<int>(edges.size()) != n - 1)
    throw ValidationError("MST model must hold n-1 edges");
  if (selection_log.size() != edges.size())
    throw ValidationError("MST selection log length must be n-1");
  DisjointSets sets(n);
  for (const FeatureTuple& e : edges) {
    if (e.n_axes() != 2) throw ValidationError("MST edges must be pairs");
    if (!sets.unite(e.axes()[0], e.axes()[1]))
      throw ValidationError("MST edges must be acyclic");
  }
  for (int f = 1; f < n; ++f)
    if (sets.find(f) != sets.find(0))
      throw ValidationError("MST edges must span all features");
  for (const MarginalTable& t : noisy_tables) {
    const double sum = std::accumulate(t.cells.begin(), t.cells.end(), 0.0);
    if (std::abs(sum - 1.0) > 1e-9)
      throw ValidationError("MST edge table not normalized");
  }
  const double root_sum =
      std::accumulate(root_table.cells.begin(), root_table.cells.end(), 0.0);
  if (std::abs(root_sum - 1.0) > 1e-9)
    throw ValidationError("MST root table not normalized");
}

MstModel fit_mst(const Dataset& train, const PrivacyBudget& budget,
                 RandomSource& rng, const MstOptions& options) {
  const int n = train.schema().n_features();
  if (n < 2) throw ValidationError("MST needs at least two features");
  if (train.n_rows() == 0) throw ValidationError("MST needs a non-empty train set");
  budget.check_valid();
  if (options.mi_sensitivity <= 0.0)
    throw ValidationError("MI sensitivity must be positive");

  // n-1 selection rounds; n measured tables (edges plus the root 1-way).
  const BudgetSplit split = split_budget(budget, n - 1, n);

  // Count-scaled MI for every pair, fixed across rounds.
  const double rows = static_cast<double>(train.n_rows());
  std::vector<std::pair<int, int>> pairs;
  std::vector<double> pair_scores;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      pairs.emplace_back(a, b);
      pair_scores.push_back(rows * mutual_information(train, a, b));
    }

  MstModel model;
  model.schema = train.schema();
  model.epsilon = budget;
  model.root_feature = 0;

  DisjointSets sets(n);
  for (int round = 0; round < n - 1; ++round) {
    std::vector<std::size_t> candidates;
    std::vector<double> scores;
    for (std::size_t i = 0; i < pairs.size(); ++i)
      if (sets.find(pairs[i].first) != sets.find(pairs[i].second)) {
        candidates.push_back(i);
        scores.push_back(pair_scores[i]);
      }
    const std::size_t pick = exponential_mechanism(
        scores, options.mi_sensitivity, split.selection_eps_per_round, rng);
    const auto [a, b] = pairs[candidates[pick]];
    sets.unite(a, b);
    model.selection_log.push_back(FeatureTuple::pair(a, b));
  }

  model.edges = model.selection_log;
  std::sort(model.edges.begin(), model.edges.end());

  model.root_table = noisy_marginal(
      measure_marginal(train, FeatureTuple::marginal({model.root_feature})),
      split.measurement_eps_per_table, rng);
  model.root_table.normalize();
  for (const FeatureTuple& edge : model.edges) {
    MarginalTable t = noisy_marginal(measure_marginal(train, edge),
                                     split.measurement_eps_per_table, rng);
    t.normalize();
    model.noisy_tables.push_back(std::move(t));
  }
  return model;
}

Dataset sample_mst(const MstModel& model, std::size_t n_rows, RandomSource& rng) {
  if (n_rows == 0) throw ValidationError("sample_mst needs n_rows > 0");
  model.check_valid();
  const int n = model.schema.n_features();

  // Rooted traversal order: BFS from the root, neighbours ascending.
  std::vector<std::vector<std::pair<int, std::size_t>>> adjacency(n);
  for (std::size_t e = 0; e < model.edges.size(); ++e) {
    const int a = model.edges[e].axes()[0];
    const int b = model.edges[e].axes()[1];
    adjacency[a].emplace_back(b, e);
    adjacency[b].emplace_back(a, e);
  }
  for (auto& adj : adjacency) std::sort(adj.begin(), adj.end());

  struct Step {
    int child;
    int parent;
    std::size_t edge;
  };
  std::vector<Step> plan;
  std::vector<bool> seen(n, false);
  std::vector<int> frontier{model.root_feature};
  seen[model.root_feature] = true;
  while (!frontier.empty()) {
    std::vector<int> next;
    for (int u : frontier)
      for (const auto& [v, e] : adjacency[u])
        if (!seen[v]) {
          seen[v] = true;
          plan.push_back({v, u, e});
          next.push_back(v);
        }
    frontier = std::move(next);
  }

  Dataset out(model.schema, n_rows);
  std::vector<double> slice;
  for (std::size_t r = 0; r < n_rows; ++r) {
    const Value root_val =
        static_cast<Value>(sample_discrete(model.root_table.cells, rng));
    out.set(r, model.root_feature, root_val);
    for (const Step& step : plan) {
      const MarginalTable& table = model.noisy_tables[step.edge];
      const int lo = table.tuple.axes()[0];
      const int card_lo = table.sizes[0];
      const int card_hi = table.sizes[1];
      const Value parent_val = out.at(r, step.parent);
      if (step.parent == lo) {
        slice.assign(table.cells.begin() + static_cast<std::size_t>(parent_val) * card_hi,
                     table.cells.begin() + (static_cast<std::size_t>(parent_val) + 1) * card_hi);
      } else {
        slice.resize(card_lo);
        for (int v = 0; v < card_lo; ++v)
          slice[v] = table.cells[static_cast<std::size_t>(v) * card_hi + parent_val];
      }
      out.set(r, step.child, static_cast<Value>(sample_discrete(slice, rng)));
    }
  }
  return out;
}

std::vector<FeatureTuple> focal_points_mst(const MstModel& model) {
  std::vector<FeatureTuple> out = model.edges;
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

json table_to_json(const MarginalTable& t) {
  json out;
  out["tuple"] = t.tuple.label();
  out["cells"] = t.cells;
  return out;
}

MarginalTable table_from_json(const json& in, const Schema& schema) {
  MarginalTable t;
  t.tuple = FeatureTuple::from_label(in.at("tuple").get<std::string>());
  t.tuple.check_valid(schema);
  for (int f : t.tuple.axes()) t.sizes.push_back(schema.cardinality(f));
  t.cells = in.at("cells").get<std::vector<double>>();
  std::size_t expect = 1;
  for (int s : t.sizes) expect *= static_cast<std::size_t>(s);
  if (t.cells.size() != expect)
    throw ValidationError("serialized table has wrong cell count");
  t.recompute_total();
  return t;
}

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace

std::string mst_model_to_json(const MstModel& model) {
  json out;
  out["type"] = "mst";
  out["schema_hash"] = hash_hex(model.schema.hash());
  out["epsilon_total"] = model.epsilon.epsilon_total;
  out["selection_fraction"] = model.epsilon.selection_fraction;
  out["measurement_fraction"] = model.epsilon.measurement_fraction;
  out["root_feature"] = model.root_feature;
  out["root_table"] = model.root_table.cells;
  out["edges"] = json::array();
  for (const FeatureTuple& e : model.edges) out["edges"].push_back(e.label());
  out["selection_log"] = json::array();
  for (const FeatureTuple& e : model.selection_log)
    out["selection_log"].push_back(e.label());
  out["tables"] = json::array();
  for (const MarginalTable& t : model.noisy_tables)
    out["tables"].push_back(table_to_json(t));
  return out.dump(2) + "\n";
}

MstModel mst_model_from_json(const std::string& text, const Schema& schema) {
  json in;
  try {
    in = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("model parse error: ") + e.what());
  }
  if (in.value("type", std::string()) != "mst")
    throw ValidationError("not an MST model file");
  if (in.at("schema_hash").get<std::string>() != hash_hex(schema.hash()))
    throw ValidationError("model was fitted against a different schema");

  MstModel model;
  model.schema = schema;
  model.epsilon.epsilon_total = in.at("epsilon_total").get<double>();
  model.epsilon.selection_fraction = in.at("selection_fraction").get<double>();
  model.epsilon.measurement_fraction = in.at("measurement_fraction").get<double>();
  model.root_feature = in.at("root_feature").get<int>();
  for (const auto& e : in.at("edges"))
    model.edges.push_back(FeatureTuple::from_label(e.get<std::string>()));
  for (const auto& e : in.at("selection_log"))
    model.selection_log.push_back(FeatureTuple::from_label(e.get<std::string>()));
  for (const auto& jt : in.at("tables"))
    model.noisy_tables.push_back(table_from_json(jt, schema));

  model.root_table.tuple = FeatureTuple::marginal({model.root_feature});
  model.root_table.sizes = {schema.cardinality(model.root_feature)};
  model.root_table.cells = in.at("root_table").get<std::vector<double>>();
  if (model.root_table.cells.size() !=
      static_cast<std::size_t>(schema.cardinality(model.root_feature)))
    throw ValidationError("serialized root table has wrong cell count");
  model.root_table.recompute_total();
  model.check_valid();
  return model;
}

void save_mst_model(const std::string& path, const MstModel& model) {
  write_text_file(path, mst_model_to_json(model));
}

MstModel load_mst_model(const std::string& path, const Schema& schema) {
  return mst_model_from_json(read_text_file(path), schema);
}

}  // namespace privmia
