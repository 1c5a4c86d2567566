#include "privmia/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "privmia/rng.hpp"
#include "privmia/util.hpp"

namespace privmia {

Dataset::Dataset(Schema schema, std::size_t n_rows)
    : schema_(std::move(schema)), n_rows_(n_rows) {
  columns_.assign(schema_.n_features(), std::vector<Value>(n_rows, 0));
}

std::span<const Value> Dataset::column(int feature) const {
  return std::span<const Value>(columns_.at(feature));
}

std::vector<Value> Dataset::row(std::size_t r) const {
  std::vector<Value> out(columns_.size());
  for (std::size_t f = 0; f < columns_.size(); ++f) out[f] = columns_[f][r];
  return out;
}

void Dataset::set_household_ids(std::vector<HouseholdId> ids) {
  if (!ids.empty() && ids.size() != n_rows_)
    throw ValidationError("household ids must cover every row");
  household_ids_ = std::move(ids);
}

HouseholdIndex Dataset::household_index() const {
  if (!has_households())
    throw ValidationError("dataset has no household ids");
  HouseholdIndex idx;
  for (std::size_t r = 0; r < n_rows_; ++r)
    idx[household_ids_[r]].push_back(r);
  return idx;
}

Dataset Dataset::select_rows(const std::vector<std::size_t>& rows) const {
  Dataset out(schema_, rows.size());
  for (int f = 0; f < n_features(); ++f) {
    const auto& src = columns_[f];
    auto& dst = out.columns_[f];
    for (std::size_t i = 0; i < rows.size(); ++i) dst[i] = src[rows[i]];
  }
  if (has_households()) {
    std::vector<HouseholdId> ids(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) ids[i] = household_ids_[rows[i]];
    out.set_household_ids(std::move(ids));
  }
  return out;
}

Dataset Dataset::without_households() const {
  Dataset out = *this;
  out.household_ids_.clear();
  return out;
}

void Dataset::validate() const {
  for (int f = 0; f < n_features(); ++f) {
    const Value card = schema_.cardinality(f);
    for (std::size_t r = 0; r < n_rows_; ++r) {
      const Value v = columns_[f][r];
      if (v < 0 || v >= card)
        throw ValidationError("row " + std::to_string(r) + ", column " +
                              schema_.feature(f).name + ": value index " +
                              std::to_string(v) + " outside domain [0, " +
                              std::to_string(card) + ")");
    }
  }
  if (!household_ids_.empty() && household_ids_.size() != n_rows_)
    throw ValidationError("household ids must cover every row");
}

std::uint64_t Dataset::content_hash() const {
  std::uint64_t h = schema_.hash();
  for (const auto& col : columns_)
    h = fnv1a64(col.data(), col.size() * sizeof(Value), h);
  if (!household_ids_.empty())
    h = fnv1a64(household_ids_.data(),
                household_ids_.size() * sizeof(HouseholdId), h);
  return h;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  for (std::string& s : out) {
    std::size_t b = s.find_first_not_of(" \t");
    std::size_t e = s.find_last_not_of(" \t");
    s = b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  }
  return out;
}

bool parse_int64(const std::string& s, std::int64_t& out) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto res = std::from_chars(first, last, out);
  return res.ec == std::errc() && res.ptr == last && !s.empty();
}

}  // namespace

Dataset load_dataset(const std::string& path, const Schema& schema,
                     const std::optional<std::string>& household_column) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open dataset file: " + path);

  std::string line;
  if (!std::getline(in, line))
    throw ValidationError(path + ": missing header row");
  const std::vector<std::string> header = split_csv_line(line);

  const std::string hh_name = household_column.value_or("household_id");
  int hh_col = -1;
  std::vector<int> col_to_feature(header.size(), -1);
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == hh_name) {
      hh_col = static_cast<int>(c);
      continue;
    }
    const int f = schema.index_of(header[c]);
    if (f < 0)
      throw ValidationError(path + ": unexpected column '" + header[c] + "'");
    col_to_feature[c] = f;
  }
  if (household_column.has_value() && hh_col < 0)
    throw ValidationError(path + ": missing column '" + hh_name + "'");
  std::vector<bool> covered(schema.n_features(), false);
  for (int f : col_to_feature)
    if (f >= 0) covered[f] = true;
  for (int f = 0; f < schema.n_features(); ++f)
    if (!covered[f])
      throw ValidationError(path + ": missing column '" +
                            schema.feature(f).name + "'");

  std::vector<std::vector<Value>> columns(schema.n_features());
  std::vector<HouseholdId> households;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() != header.size())
      throw ValidationError(path + ": row " + std::to_string(row) + " has " +
                            std::to_string(cells.size()) + " cells, expected " +
                            std::to_string(header.size()));
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (static_cast<int>(c) == hh_col) {
        std::int64_t id;
        if (!parse_int64(cells[c], id) || id < 0)
          throw ValidationError(path + ": row " + std::to_string(row) +
                                ", column " + hh_name +
                                ": bad household id '" + cells[c] + "'");
        households.push_back(id);
        continue;
      }
      const int f = col_to_feature[c];
      const Feature& feat = schema.feature(f);
      int v = schema.category_index(f, cells[c]);
      if (v < 0) {
        std::int64_t iv;
        if (parse_int64(cells[c], iv) && iv >= 0 && iv < feat.cardinality) {
          v = static_cast<int>(iv);
        } else {
          throw ValidationError(path + ": row " + std::to_string(row) +
                                ", column " + feat.name +
                                ": unknown category '" + cells[c] + "'");
        }
      }
      columns[f].push_back(static_cast<Value>(v));
    }
    ++row;
  }

  Dataset out(schema, row);
  for (int f = 0; f < schema.n_features(); ++f)
    for (std::size_t r = 0; r < row; ++r) out.set(r, f, columns[f][r]);
  if (hh_col >= 0) out.set_household_ids(std::move(households));
  out.validate();
  return out;
}

void save_dataset_csv(const std::string& path, const Dataset& data,
                      bool write_labels) {
  std::ostringstream out;
  const Schema& schema = data.schema();
  for (int f = 0; f < schema.n_features(); ++f) {
    if (f) out << ',';
    out << schema.feature(f).name;
  }
  if (data.has_households()) out << ",household_id";
  out << '\n';
  for (std::size_t r = 0; r < data.n_rows(); ++r) {
    for (int f = 0; f < schema.n_features(); ++f) {
      if (f) out << ',';
      const Value v = data.at(r, f);
      const auto& cats = schema.feature(f).categories;
      if (write_labels && !cats.empty())
        out << cats[v];
      else
        out << v;
    }
    if (data.has_households()) out << ',' << data.household_of(r);
    out << '\n';
  }
  write_text_file(path, out.str());
}

}  // namespace privmia
