#include "privmia/rng.hpp"

#include <limits>
#include <numeric>
#include <stdexcept>

namespace privmia {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
}  // namespace

std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

std::uint64_t fnv1a64(const void* data, std::size_t len, std::uint64_t h) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t fnv1a64(std::string_view s, std::uint64_t h) {
  return fnv1a64(s.data(), s.size(), h);
}

RandomSource::RandomSource(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream) {
  state_ = mix64(seed + kGolden) ^ mix64(mix64(stream) + kGolden);
}

std::uint64_t RandomSource::next_u64() {
  state_ += kGolden;
  return mix64(state_);
}

double RandomSource::next_double() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomSource::next_open_double() {
  // Midpoints of 2^52 equal bins: strictly inside (0, 1), symmetric in 0.5.
  return (static_cast<double>(next_u64() >> 12) + 0.5) * 0x1.0p-52;
}

std::uint64_t RandomSource::next_below(std::uint64_t n) {
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() -
      std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = next_u64();
  } while (x >= limit);
  return x % n;
}

RandomSource RandomSource::derive(std::uint64_t substream) const {
  return RandomSource(seed_, mix64(stream_ + kGolden) ^ mix64(substream));
}

RandomSource RandomSource::derive(std::string_view label,
                                  std::uint64_t substream) const {
  return derive(fnv1a64(label) ^ mix64(substream + kGolden));
}

std::vector<std::size_t> sample_without_replacement(std::size_t population,
                                                    std::size_t k,
                                                    RandomSource& rng) {
  if (k > population)
    throw std::invalid_argument("sample size exceeds population");
  std::vector<std::size_t> pool(population);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + rng.next_below(population - i);
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  return pool;
}

}  // namespace privmia
