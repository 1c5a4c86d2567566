#include "privmia/desk.hpp"

#include <array>
#include <string>
#include <vector>

#include "privmia/dp.hpp"
#include "privmia/util.hpp"

namespace privmia {

namespace {

struct DeskFeature {
  const char* name;
  int cardinality;
  FeatureKind kind;
  const char* label_prefix;
};

constexpr std::array<DeskFeature, 15> kFeatures{{
    {"age_band", 9, FeatureKind::kOrdinal, "age"},
    {"state", 12, FeatureKind::kNominal, "st"},
    {"children", 6, FeatureKind::kOrdinal, "kids"},
    {"marital_status", 5, FeatureKind::kNominal, "ms"},
    {"ethnicity", 8, FeatureKind::kNominal, "eth"},
    {"gender", 3, FeatureKind::kNominal, "g"},
    {"profession", 12, FeatureKind::kNominal, "prof"},
    {"weekly_hours", 7, FeatureKind::kOrdinal, "hrs"},
    {"education", 8, FeatureKind::kNominal, "edu"},
    {"income_band", 10, FeatureKind::kOrdinal, "inc"},
    {"industry", 10, FeatureKind::kNominal, "ind"},
    {"commute_mode", 6, FeatureKind::kNominal, "cm"},
    {"household_tenure", 7, FeatureKind::kOrdinal, "ten"},
    {"home_language", 6, FeatureKind::kNominal, "lang"},
    {"urban_density", 4, FeatureKind::kNominal, "ud"},
}};

// Correlation backbone: child = affine map of parent with probability rho,
// otherwise a draw from the feature's base distribution.
struct Dependency {
  int parent;
  int child;
  double rho;
  int mul;
  int add;
};

constexpr std::array<Dependency, 14> kTree{{
    {0, 1, 0.35, 5, 2},   // age -> state
    {0, 2, 0.75, 5, 1},   // age -> children
    {0, 3, 0.70, 3, 0},   // age -> marital status
    {0, 5, 0.30, 2, 1},   // age -> gender
    {0, 8, 0.55, 3, 5},   // age -> education
    {0, 12, 0.80, 4, 2},  // age -> tenure
    {1, 4, 0.65, 5, 3},   // state -> ethnicity
    {1, 14, 0.75, 3, 1},  // state -> urban density
    {4, 13, 0.85, 5, 4},  // ethnicity -> language
    {8, 6, 0.80, 7, 6},   // education -> profession
    {6, 9, 0.70, 7, 1},   // profession -> income
    {6, 10, 0.90, 9, 4},  // profession -> industry
    {9, 7, 0.65, 5, 3},   // income -> hours
    {14, 11, 0.80, 5, 0}, // urban density -> commute
}};

// Generation order: parents always precede children.
constexpr std::array<int, 15> kTopoOrder{0, 1, 2,  3, 5,  8, 12, 4,
                                         14, 6, 13, 9, 10, 7, 11};

// Mildly skewed base distribution, fixed per feature.
std::vector<double> base_weights(int feature, int card) {
  std::vector<double> w(card);
  for (int i = 0; i < card; ++i)
    w[i] = 1.0 + ((i * 7 + feature * 3 + 3) % 5);
  return w;
}

int parent_of(int feature) {
  for (const Dependency& d : kTree)
    if (d.child == feature) return d.parent;
  return -1;
}

const Dependency* dependency_of(int feature) {
  for (const Dependency& d : kTree)
    if (d.child == feature) return &d;
  return nullptr;
}

Value draw_feature(int feature, Value parent_value, RandomSource& rng,
                   const std::vector<std::vector<double>>& bases) {
  const Dependency* dep = dependency_of(feature);
  const int card = kFeatures[feature].cardinality;
  if (dep && rng.next_double() < dep->rho)
    return static_cast<Value>((parent_value * dep->mul + dep->add) % card);
  return static_cast<Value>(sample_discrete(bases[feature], rng));
}

double mutation_for(int feature, double base_rate) {
  if (feature == 5) return 0.6;   // members rarely share gender
  if (feature == 0) return 0.25;  // ages vary within a household
  return base_rate;
}

// Household sizes 1..10, mean just under 3.
constexpr std::array<double, 10> kSizeWeights{0.32, 0.27, 0.13,  0.08,  0.07,
                                              0.05, 0.04, 0.02, 0.013, 0.007};

}  // namespace

Schema desk_schema() {
  std::vector<Feature> feats;
  for (const DeskFeature& df : kFeatures) {
    Feature f;
    f.name = df.name;
    f.kind = df.kind;
    for (int c = 0; c < df.cardinality; ++c)
      f.categories.push_back(std::string(df.label_prefix) + std::to_string(c));
    feats.push_back(std::move(f));
  }
  return Schema(std::move(feats));
}

Dataset generate_desk_dataset(const DeskConfig& config) {
  if (config.n_records == 0)
    throw ValidationError("desk dataset needs at least one record");
  const Schema schema = desk_schema();
  const int n = schema.n_features();

  std::vector<std::vector<double>> bases;
  for (int f = 0; f < n; ++f)
    bases.push_back(base_weights(f, schema.cardinality(f)));
  const std::vector<double> size_weights(kSizeWeights.begin(), kSizeWeights.end());

  RandomSource rng(config.seed, fnv1a64("desk"));
  Dataset out(schema, config.n_records);
  std::vector<HouseholdId> households(config.n_records);

  std::size_t row = 0;
  HouseholdId next_id = 0;
  std::vector<Value> profile(n), member(n);
  while (row < config.n_records) {
    std::size_t size = sample_discrete(size_weights, rng) + 1;
    size = std::min(size, config.n_records - row);

    for (int f : kTopoOrder) {
      const int parent = parent_of(f);
      profile[f] = draw_feature(f, parent >= 0 ? profile[parent] : 0, rng, bases);
    }
    for (std::size_t m = 0; m < size; ++m) {
      for (int f : kTopoOrder) {
        const int parent = parent_of(f);
        const Value parent_val = parent >= 0 ? member[parent] : 0;
        if (rng.next_double() < mutation_for(f, config.mutation_rate))
          member[f] = draw_feature(f, parent_val, rng, bases);
        else
          member[f] = profile[f];
      }
      for (int f = 0; f < n; ++f) out.set(row, f, member[f]);
      households[row] = next_id;
      ++row;
    }
    ++next_id;
  }
  out.set_household_ids(std::move(households));
  return out;
}

}  // namespace privmia
