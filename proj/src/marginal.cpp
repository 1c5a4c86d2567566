#include "privmia/marginal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "privmia/util.hpp"

namespace privmia {

std::size_t MarginalTable::cell_index(std::span<const Value> values_by_axis) const {
  std::size_t idx = 0;
  for (std::size_t a = 0; a < sizes.size(); ++a) {
    const Value v = values_by_axis[a];
    if (v < 0 || v >= sizes[a])
      throw ValidationError("cell value outside axis domain");
    idx = idx * static_cast<std::size_t>(sizes[a]) + static_cast<std::size_t>(v);
  }
  return idx;
}

double& MarginalTable::at(std::span<const Value> values_by_axis) {
  return cells[cell_index(values_by_axis)];
}

double MarginalTable::at(std::span<const Value> values_by_axis) const {
  return cells[cell_index(values_by_axis)];
}

void MarginalTable::normalize() {
  const double sum = std::accumulate(cells.begin(), cells.end(), 0.0);
  if (sum <= 0.0) {
    const double u = 1.0 / static_cast<double>(cells.size());
    std::fill(cells.begin(), cells.end(), u);
  } else {
    for (double& c : cells) c /= sum;
  }
  total = 1.0;
}

double MarginalTable::smoothed_prob(std::span<const Value> values_by_axis,
                                    double smoothing) const {
  const double denom = total + smoothing * static_cast<double>(cells.size());
  if (denom <= 0.0) return 1.0 / static_cast<double>(cells.size());
  return (cells[cell_index(values_by_axis)] + smoothing) / denom;
}

void MarginalTable::recompute_total() {
  total = std::accumulate(cells.begin(), cells.end(), 0.0);
}

MarginalTable measure_marginal(const Dataset& data, const FeatureTuple& tuple) {
  tuple.check_valid(data.schema());
  if (data.n_rows() == 0)
    throw ValidationError("cannot measure a marginal on an empty dataset");

  MarginalTable table;
  table.tuple = tuple;
  std::size_t n_cells = 1;
  for (int f : tuple.axes()) {
    table.sizes.push_back(data.schema().cardinality(f));
    n_cells *= static_cast<std::size_t>(table.sizes.back());
  }
  table.cells.assign(n_cells, 0.0);

  std::vector<std::span<const Value>> cols;
  cols.reserve(tuple.axes().size());
  for (int f : tuple.axes()) cols.push_back(data.column(f));

  const std::size_t n = data.n_rows();
  for (std::size_t r = 0; r < n; ++r) {
    std::size_t idx = 0;
    for (std::size_t a = 0; a < cols.size(); ++a)
      idx = idx * static_cast<std::size_t>(table.sizes[a]) +
            static_cast<std::size_t>(cols[a][r]);
    table.cells[idx] += 1.0;
  }
  table.total = static_cast<double>(n);
  return table;
}

MarginalTable sum_over_axis(const MarginalTable& table, int axis) {
  const int n_axes = static_cast<int>(table.sizes.size());
  if (axis < 0 || axis >= n_axes) throw ValidationError("axis out of range");
  if (n_axes == 1) throw ValidationError("cannot sum the only axis away");

  std::vector<int> kept_features;
  for (int a = 0; a < n_axes; ++a)
    if (a != axis) kept_features.push_back(table.tuple.axes()[a]);

  MarginalTable out;
  out.tuple = FeatureTuple::marginal(kept_features);
  std::size_t out_cells = 1;
  for (int a = 0; a < n_axes; ++a)
    if (a != axis) {
      out.sizes.push_back(table.sizes[a]);
      out_cells *= static_cast<std::size_t>(table.sizes[a]);
    }
  out.cells.assign(out_cells, 0.0);

  // Walk the source odometer and accumulate into the reduced index.
  std::vector<Value> vals(n_axes, 0);
  for (std::size_t idx = 0; idx < table.cells.size(); ++idx) {
    std::size_t out_idx = 0;
    for (int a = 0; a < n_axes; ++a)
      if (a != axis)
        out_idx = out_idx * static_cast<std::size_t>(table.sizes[a]) +
                  static_cast<std::size_t>(vals[a]);
    out.cells[out_idx] += table.cells[idx];
    for (int a = n_axes - 1; a >= 0; --a) {
      if (++vals[a] < table.sizes[a]) break;
      vals[a] = 0;
    }
  }
  out.recompute_total();
  return out;
}

double conditional_prob(const MarginalTable& table, Value child_value,
                        std::span<const Value> parent_values, double smoothing) {
  if (!table.tuple.is_conditional())
    throw ValidationError("conditional_prob needs a conditional-form table");
  if (smoothing < 0.0) throw ValidationError("smoothing must be >= 0");

  const int child_card = table.sizes[0];
  if (child_value < 0 || child_value >= child_card)
    throw ValidationError("child value outside domain");

  // Axis 0 is the child, so a parent stratum is a stride-parent_total walk.
  std::size_t parent_total = 1;
  std::size_t parent_flat = 0;
  for (std::size_t a = 1; a < table.sizes.size(); ++a) {
    const Value v = parent_values[a - 1];
    if (v < 0 || v >= table.sizes[a])
      throw ValidationError("parent value outside domain");
    parent_flat = parent_flat * static_cast<std::size_t>(table.sizes[a]) +
                  static_cast<std::size_t>(v);
    parent_total *= static_cast<std::size_t>(table.sizes[a]);
  }

  double stratum = 0.0;
  for (int v = 0; v < child_card; ++v)
    stratum += table.cells[static_cast<std::size_t>(v) * parent_total + parent_flat];

  const double numer =
      table.cells[static_cast<std::size_t>(child_value) * parent_total + parent_flat] +
      smoothing;
  const double denom = stratum + smoothing * static_cast<double>(child_card);
  if (denom <= 0.0) return 1.0 / static_cast<double>(child_card);
  return numer / denom;
}

double mutual_information_of_table(const MarginalTable& table) {
  const std::size_t child_card = static_cast<std::size_t>(table.sizes[0]);
  const std::size_t parent_total = table.cells.size() / child_card;
  if (parent_total <= 1) return 0.0;

  const double n = std::accumulate(table.cells.begin(), table.cells.end(), 0.0);
  if (n <= 0.0) return 0.0;

  std::vector<double> child_marg(child_card, 0.0);
  std::vector<double> parent_marg(parent_total, 0.0);
  for (std::size_t c = 0; c < child_card; ++c)
    for (std::size_t p = 0; p < parent_total; ++p) {
      const double v = table.cells[c * parent_total + p];
      child_marg[c] += v;
      parent_marg[p] += v;
    }

  double mi = 0.0;
  for (std::size_t c = 0; c < child_card; ++c) {
    if (child_marg[c] <= 0.0) continue;
    for (std::size_t p = 0; p < parent_total; ++p) {
      const double joint = table.cells[c * parent_total + p];
      if (joint <= 0.0 || parent_marg[p] <= 0.0) continue;
      mi += (joint / n) * std::log(joint * n / (child_marg[c] * parent_marg[p]));
    }
  }
  return std::max(mi, 0.0);
}

double mutual_information(const Dataset& data, int a, int b) {
  if (a == b) throw ValidationError("mutual information needs distinct features");
  return mutual_information(data, a, std::vector<int>{b});
}

double mutual_information(const Dataset& data, int child,
                          const std::vector<int>& parents) {
  if (parents.empty()) return 0.0;
  const MarginalTable joint =
      measure_marginal(data, FeatureTuple::conditional(child, parents));
  return mutual_information_of_table(joint);
}

}  // namespace privmia
