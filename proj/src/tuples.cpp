#include "privmia/tuples.hpp"

#include <algorithm>
#include <charconv>
#include <set>

#include "privmia/util.hpp"

namespace privmia {

FeatureTuple FeatureTuple::marginal(std::vector<int> features) {
  if (features.empty())
    throw ValidationError("marginal tuple needs at least one feature");
  std::sort(features.begin(), features.end());
  if (std::adjacent_find(features.begin(), features.end()) != features.end())
    throw ValidationError("tuple features must be distinct");
  FeatureTuple t;
  t.axes_ = std::move(features);
  t.conditional_ = false;
  return t;
}

FeatureTuple FeatureTuple::pair(int a, int b) {
  return marginal({a, b});
}

FeatureTuple FeatureTuple::conditional(int child, std::vector<int> parents) {
  std::sort(parents.begin(), parents.end());
  if (std::adjacent_find(parents.begin(), parents.end()) != parents.end())
    throw ValidationError("parent set must be distinct");
  if (std::binary_search(parents.begin(), parents.end(), child))
    throw ValidationError("child cannot be its own parent");
  FeatureTuple t;
  t.axes_.push_back(child);
  t.axes_.insert(t.axes_.end(), parents.begin(), parents.end());
  t.conditional_ = true;
  return t;
}

int FeatureTuple::child() const {
  if (!conditional_) throw ValidationError("tuple is not in conditional form");
  return axes_.front();
}

std::vector<int> FeatureTuple::parents() const {
  if (!conditional_) throw ValidationError("tuple is not in conditional form");
  return std::vector<int>(axes_.begin() + 1, axes_.end());
}

void FeatureTuple::check_valid(const Schema& schema) const {
  if (axes_.empty()) throw ValidationError("empty feature tuple");
  std::set<int> seen;
  for (int f : axes_) {
    if (f < 0 || f >= schema.n_features())
      throw ValidationError("tuple feature index " + std::to_string(f) +
                            " outside schema");
    if (!seen.insert(f).second)
      throw ValidationError("tuple features must be distinct");
  }
}

std::string FeatureTuple::label() const {
  std::string out;
  if (conditional_) {
    out = std::to_string(axes_[0]) + "|";
    for (std::size_t i = 1; i < axes_.size(); ++i) {
      if (i > 1) out += ',';
      out += std::to_string(axes_[i]);
    }
  } else {
    for (std::size_t i = 0; i < axes_.size(); ++i) {
      if (i) out += '-';
      out += std::to_string(axes_[i]);
    }
  }
  return out;
}

namespace {
std::vector<int> parse_int_list(const std::string& s, char sep) {
  std::vector<int> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t next = s.find(sep, pos);
    if (next == std::string::npos) next = s.size();
    const std::string tok = s.substr(pos, next - pos);
    if (!tok.empty()) {
      int v = 0;
      auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
        throw ValidationError("bad tuple label token: " + tok);
      out.push_back(v);
    }
    pos = next + 1;
  }
  return out;
}
}  // namespace

FeatureTuple FeatureTuple::from_label(const std::string& s) {
  const std::size_t bar = s.find('|');
  if (bar == std::string::npos)
    return FeatureTuple::marginal(parse_int_list(s, '-'));
  const std::vector<int> child = parse_int_list(s.substr(0, bar), ',');
  if (child.size() != 1) throw ValidationError("bad conditional label: " + s);
  return FeatureTuple::conditional(child[0], parse_int_list(s.substr(bar + 1), ','));
}

}  // namespace privmia
