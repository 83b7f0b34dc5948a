#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace bdes {

std::uint64_t splitmix64(std::uint64_t x);

// Explicit random stream. Every stochastic call takes one of these by reference.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // Uniform on [0,1) from the top 53 bits.
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  bool bernoulli(double p) { return uniform() < p; }
  double normal() { return normal_(eng_); }
  // Uniform integer in [0, n).
  std::size_t index(std::size_t n);
  // Inverse-CDF draw from a probability vector; falls back to the last index on round-off.
  std::size_t categorical(const std::vector<double>& p);

 private:
  std::mt19937_64 eng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace bdes
