#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "privmia/schema.hpp"

namespace privmia {

using Value = std::int32_t;
using HouseholdId = std::int64_t;

// household id -> row positions, in ascending id order.
using HouseholdIndex = std::map<HouseholdId, std::vector<std::size_t>>;

// Immutable discrete table. Values are dense 0-based indices per feature,
// stored column-major so per-feature scans stream contiguously.
class Dataset {
 public:
  Dataset() = default;
  Dataset(Schema schema, std::size_t n_rows);

  const Schema& schema() const { return schema_; }
  std::size_t n_rows() const { return n_rows_; }
  int n_features() const { return schema_.n_features(); }

  std::span<const Value> column(int feature) const;
  Value at(std::size_t row, int feature) const {
    return columns_[feature][row];
  }
  void set(std::size_t row, int feature, Value v) { columns_[feature][row] = v; }

  std::vector<Value> row(std::size_t r) const;

  bool has_households() const { return !household_ids_.empty(); }
  HouseholdId household_of(std::size_t row) const { return household_ids_.at(row); }
  const std::vector<HouseholdId>& household_ids() const { return household_ids_; }
  void set_household_ids(std::vector<HouseholdId> ids);
  HouseholdIndex household_index() const;

  // New dataset holding the given rows (in the given order); households kept.
  Dataset select_rows(const std::vector<std::size_t>& rows) const;
  Dataset without_households() const;

  // Every value index must be inside its feature domain; throws otherwise.
  void validate() const;

  // Order- and content-sensitive fingerprint (values + household ids).
  std::uint64_t content_hash() const;

 private:
  Schema schema_;
  std::size_t n_rows_ = 0;
  std::vector<std::vector<Value>> columns_;
  std::vector<HouseholdId> household_ids_;  // empty or one per row
};

// CSV with a header row; cells are category labels or plain indices.
// household_column: explicit name, or empty to auto-use "household_id" when
// that column is present. Parse failures name the row and column.
Dataset load_dataset(const std::string& path, const Schema& schema,
                     const std::optional<std::string>& household_column = {});

void save_dataset_csv(const std::string& path, const Dataset& data,
                      bool write_labels = true);

}  // namespace privmia
