#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace privmia {

// Counter-based pseudo-random source. A (seed, stream) pair fully determines
// the draw sequence, independently of platform or compiler, so parallel
// consumers each own a derived stream and results stay reproducible.
class RandomSource {
 public:
  RandomSource(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();

  // Uniform on [0, 1), 53-bit resolution.
  double next_double();

  // Uniform on (0, 1), symmetric around 0.5; never returns an endpoint.
  double next_open_double();

  // Uniform integer in [0, n), unbiased via rejection. n must be > 0.
  std::uint64_t next_below(std::uint64_t n);

  // Child source with an independent stream; deterministic in (this, substream).
  RandomSource derive(std::uint64_t substream) const;
  RandomSource derive(std::string_view label, std::uint64_t substream) const;

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t state_;
};

// k distinct indices from [0, population), uniform, in draw order.
std::vector<std::size_t> sample_without_replacement(std::size_t population,
                                                    std::size_t k,
                                                    RandomSource& rng);

// SplitMix64 finalizer; also used for stable content hashing next to FNV.
std::uint64_t mix64(std::uint64_t x);

// FNV-1a over raw bytes, for schema/content fingerprints.
std::uint64_t fnv1a64(const void* data, std::size_t len,
                      std::uint64_t h = 0xcbf29ce484222325ULL);
std::uint64_t fnv1a64(std::string_view s, std::uint64_t h = 0xcbf29ce484222325ULL);

}  // namespace privmia
