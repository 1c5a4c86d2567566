#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace privmia {

enum class FeatureKind { kOrdinal, kNominal };

std::string to_string(FeatureKind kind);
FeatureKind feature_kind_from_string(const std::string& s);

struct Feature {
  std::string name;
  FeatureKind kind = FeatureKind::kNominal;
  // Declared category order; maps label -> dense 0-based index at load time.
  // May be empty, in which case values are plain indices in [0, cardinality).
  std::vector<std::string> categories;
  int cardinality = 0;
};

// Ordered, immutable feature list. Feature order is canonical: value vectors,
// marginal cell layouts and serialized models all follow it.
class Schema {
 public:
  Schema() = default;
  explicit Schema(std::vector<Feature> features);

  int n_features() const { return static_cast<int>(features_.size()); }
  const Feature& feature(int i) const { return features_.at(i); }
  const std::vector<Feature>& features() const { return features_; }
  int cardinality(int i) const { return features_.at(i).cardinality; }

  // -1 when absent.
  int index_of(const std::string& name) const;

  // Label -> index for one feature; integer tokens in range are also accepted
  // by the CSV loader even when labels are declared.
  int category_index(int feature, const std::string& label) const;

  // Content fingerprint over names, kinds and category lists.
  std::uint64_t hash() const;

  std::string to_json_string() const;
  static Schema from_json_string(const std::string& text);
  static Schema load(const std::string& path);
  void save(const std::string& path) const;

 private:
  std::vector<Feature> features_;
  std::vector<std::unordered_map<std::string, int>> label_index_;
};

}  // namespace privmia
