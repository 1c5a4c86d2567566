#pragma once

#include <vector>

#include "privmia/dataset.hpp"
#include "privmia/tuples.hpp"

namespace privmia {

// Dense contingency table over a feature tuple. Cells are laid out row-major
// in tuple axis order (axis 0 slowest). Holds raw counts after measurement;
// noising and normalization post-process the same structure.
struct MarginalTable {
  FeatureTuple tuple;
  std::vector<int> sizes;     // cardinality per axis
  std::vector<double> cells;  // sizes product entries
  double total = 0.0;

  std::size_t n_cells() const { return cells.size(); }
  std::size_t cell_index(std::span<const Value> values_by_axis) const;
  double& at(std::span<const Value> values_by_axis);
  double at(std::span<const Value> values_by_axis) const;

  // Scales cells so they sum to 1; an all-zero table becomes uniform.
  void normalize();

  // Smoothed probability of one cell: (count + s) / (total + s * n_cells).
  double smoothed_prob(std::span<const Value> values_by_axis, double smoothing) const;

  void recompute_total();
};

// Exact joint counts of the tuple's features over the dataset.
MarginalTable measure_marginal(const Dataset& data, const FeatureTuple& tuple);

// Sum over one axis, producing the table on the remaining axes.
MarginalTable sum_over_axis(const MarginalTable& table, int axis);

// P(child = child_value | parents = parent_values) with additive smoothing.
// A zero-count parent stratum at smoothing 0 yields the uniform 1/child_card.
double conditional_prob(const MarginalTable& table, Value child_value,
                        std::span<const Value> parent_values, double smoothing);

// Plug-in mutual information in nats, clamped at 0.
double mutual_information(const Dataset& data, int a, int b);

// I(child; parents) with the parent set treated as one composite variable.
// Empty parent set gives 0.
double mutual_information(const Dataset& data, int child,
                          const std::vector<int>& parents);

// MI of a table whose axis 0 is the child and remaining axes the parents.
double mutual_information_of_table(const MarginalTable& table);

}  // namespace privmia
