#pragma once

#include <cstdint>

#include "privmia/dataset.hpp"
#include "privmia/rng.hpp"

namespace privmia {

// Parameters for the bundled demographic-like dataset: 15 discrete features
// (5 ordinal, 10 nominal) with correlations planted along a fixed feature
// tree, records grouped into households of 1-10 near-duplicate members.
struct DeskConfig {
  std::size_t n_records = 20000;
  std::uint64_t seed = 0;
  // Chance that a member re-draws a feature instead of copying the
  // household profile (gender and age are re-drawn more often).
  double mutation_rate = 0.08;
};

// The fixed 15-feature schema the generator produces.
Schema desk_schema();

// Seeded household-structured sample; identical config gives identical data.
Dataset generate_desk_dataset(const DeskConfig& config);

}  // namespace privmia
