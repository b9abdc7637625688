#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace ffdist {

// Seeded stream: std::mt19937_64 (its output sequence is fixed by the C++
// standard) with bounded draws done by rejection on the raw 64-bit words.
// Standard distributions are avoided because their algorithms vary between
// library implementations.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, bound); bound must be positive.
  std::uint64_t below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
};

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Child seed for an independent stream, e.g. derive_seed(seed, {m, trial}).
std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> path);

/// Uniform n-subset of [0, universe) by Floyd's algorithm, returned sorted.
std::vector<std::uint64_t> sample_indices(std::uint64_t universe, std::uint64_t n,
                                          SeededRng& rng);

}  // namespace ffdist
