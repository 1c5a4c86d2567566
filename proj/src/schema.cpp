#include "privmia/schema.hpp"

#include <json.hpp>

#include "privmia/rng.hpp"
#include "privmia/util.hpp"

namespace privmia {

using nlohmann::json;

std::string to_string(FeatureKind kind) {
  return kind == FeatureKind::kOrdinal ? "ordinal" : "nominal";
}

FeatureKind feature_kind_from_string(const std::string& s) {
  if (s == "ordinal") return FeatureKind::kOrdinal;
  if (s == "nominal") return FeatureKind::kNominal;
  throw ValidationError("unknown feature kind: " + s);
}

Schema::Schema(std::vector<Feature> features) : features_(std::move(features)) {
  std::unordered_map<std::string, int> seen;
  for (std::size_t i = 0; i < features_.size(); ++i) {
    Feature& f = features_[i];
    if (!f.categories.empty()) {
      if (f.cardinality == 0) f.cardinality = static_cast<int>(f.categories.size());
      if (f.cardinality != static_cast<int>(f.categories.size()))
        throw ValidationError("feature " + f.name +
                              ": cardinality does not match category list");
    }
    if (f.cardinality < 2)
      throw ValidationError("feature " + f.name + ": cardinality must be >= 2");
    if (!seen.emplace(f.name, static_cast<int>(i)).second)
      throw ValidationError("duplicate feature name: " + f.name);
    label_index_.emplace_back();
    for (std::size_t c = 0; c < f.categories.size(); ++c) {
      if (!label_index_.back().emplace(f.categories[c], static_cast<int>(c)).second)
        throw ValidationError("feature " + f.name + ": duplicate category " +
                              f.categories[c]);
    }
  }
}

int Schema::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < features_.size(); ++i)
    if (features_[i].name == name) return static_cast<int>(i);
  return -1;
}

int Schema::category_index(int feature, const std::string& label) const {
  const auto& idx = label_index_.at(feature);
  auto it = idx.find(label);
  return it == idx.end() ? -1 : it->second;
}

std::uint64_t Schema::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const Feature& f : features_) {
    h = fnv1a64(f.name, h);
    h = fnv1a64(to_string(f.kind), h);
    const std::uint64_t card = static_cast<std::uint64_t>(f.cardinality);
    h = fnv1a64(&card, sizeof(card), h);
    for (const std::string& c : f.categories) h = fnv1a64(c, h);
  }
  return h;
}

std::string Schema::to_json_string() const {
  json out;
  out["features"] = json::array();
  for (const Feature& f : features_) {
    json jf;
    jf["name"] = f.name;
    jf["kind"] = to_string(f.kind);
    if (!f.categories.empty())
      jf["categories"] = f.categories;
    else
      jf["cardinality"] = f.cardinality;
    out["features"].push_back(std::move(jf));
  }
  return out.dump(2) + "\n";
}

Schema Schema::from_json_string(const std::string& text) {
  json in;
  try {
    in = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("schema parse error: ") + e.what());
  }
  if (!in.contains("features") || !in["features"].is_array())
    throw ValidationError("schema: missing 'features' array");
  std::vector<Feature> feats;
  for (const auto& jf : in["features"]) {
    Feature f;
    f.name = jf.at("name").get<std::string>();
    f.kind = feature_kind_from_string(jf.value("kind", std::string("nominal")));
    if (jf.contains("categories"))
      f.categories = jf["categories"].get<std::vector<std::string>>();
    f.cardinality = jf.value("cardinality", 0);
    feats.push_back(std::move(f));
  }
  return Schema(std::move(feats));
}

Schema Schema::load(const std::string& path) {
  return from_json_string(read_text_file(path));
}

void Schema::save(const std::string& path) const {
  write_text_file(path, to_json_string());
}

}  // namespace privmia
