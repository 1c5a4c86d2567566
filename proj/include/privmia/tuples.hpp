#pragma once

#include <compare>
#include <string>
#include <vector>

#include "privmia/schema.hpp"

namespace privmia {

// A measured feature tuple. Marginal form lists the features in canonical
// (ascending) order. Conditional form designates one child plus a sorted
// parent set; the child occupies axis 0 of the measured table so conditional
// slices are contiguous stride walks.
class FeatureTuple {
 public:
  FeatureTuple() = default;

  static FeatureTuple marginal(std::vector<int> features);
  static FeatureTuple pair(int a, int b);
  static FeatureTuple conditional(int child, std::vector<int> parents);

  bool is_conditional() const { return conditional_; }
  // Axis order of the measured table: marginal = the features themselves,
  // conditional = child first, then sorted parents.
  const std::vector<int>& axes() const { return axes_; }
  int n_axes() const { return static_cast<int>(axes_.size()); }

  int child() const;
  std::vector<int> parents() const;

  void check_valid(const Schema& schema) const;

  // "a-b" for marginals, "child|p1,p2" for conditionals.
  std::string label() const;
  static FeatureTuple from_label(const std::string& s);

  friend auto operator<=>(const FeatureTuple& a, const FeatureTuple& b) = default;

 private:
  std::vector<int> axes_;
  bool conditional_ = false;
};

}  // namespace privmia
