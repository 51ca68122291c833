#pragma once

#include <cstdint>
#include <vector>

#include "pob/errors.hpp"

namespace pob {

// Counter-based deterministic random source. Streams are keyed by
// (global seed, image id, instance id); the k-th draw of a stream depends only
// on the key and k, so results are reproducible across runs, platforms and
// thread schedules, and adding or removing instances never shifts any other
// instance's stream.
class SeededRng {
 public:
  SeededRng(std::uint64_t seed, std::int64_t image_id, std::int64_t instance_id)
      : key_(mix(mix(mix(seed) + static_cast<std::uint64_t>(image_id)) +
                 static_cast<std::uint64_t>(instance_id))) {}

  std::uint64_t next_u64() {
    counter_ += 0x9E3779B97F4A7C15ull;
    return mix(key_ ^ counter_);
  }

  // Uniform in [0, 1).
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // One draw is consumed regardless of the outcome.
  bool bernoulli(double p) { return next_double() < p; }

  // Uniform in [0, n). n must be positive.
  std::uint64_t uniform_int(std::uint64_t n) {
    if (n == 0) throw parameter_error("uniform_int: empty range");
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  // Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + next_double() * (hi - lo); }

  // First k entries of a uniform random permutation of {0..n-1}.
  std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    if (k > n) k = n;
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(uniform_int(n - i));
      std::swap(idx[i], idx[j]);
    }
    idx.resize(k);
    return idx;
  }

 private:
  // splitmix64 finalizer
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace pob
