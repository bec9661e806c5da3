#pragma once
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace blockflow {

// Deterministic RNG with hand-rolled transforms. std::mt19937_64 emits a
// portable, standardized bit stream; the transforms are pinned here because
// library distribution objects are not stable across implementations.
class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(seed) {}

  uint64_t next_u64() { return eng_(); }

  // Uniform in [0,1) with 53-bit resolution; never returns exactly 0
  // (the zero word maps to 2^-53) so log() transforms stay finite.
  double uniform01();

  // Uniform integer in [0, n), rejection sampled (n >= 1).
  uint64_t bounded(uint64_t n);

  // Laplace(0, lambda) via inverse CDF.
  double laplace(double lambda);

  // Standard normal via Box-Muller (caches the spare draw).
  double normal();

  // Index drawn from a discrete distribution given by nonnegative weights.
  size_t choice(const std::vector<double>& weights);

  // In-place Fisher-Yates.
  template <class T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(bounded(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  std::vector<uint8_t> bytes(size_t n);

 private:
  std::mt19937_64 eng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Counter-based seed derivation: sub-streams depend only on (master, tag,
// counters), never on how many other streams exist (D28).
uint64_t split_seed(uint64_t master, const std::string& tag, uint64_t c1 = 0,
                    uint64_t c2 = 0);

}  // namespace blockflow
