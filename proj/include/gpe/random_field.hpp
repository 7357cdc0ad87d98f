#pragma once

#include <cstdint>
#include <random>

#include "gpe/field.hpp"

namespace gpe {

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);
/// Counter-based derivation of stream `index` from `master`.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  double normal() { return nd_(eng_); }
  double uniform() { return ud_(eng_); }
  std::uint64_t bits() { return eng_(); }

 private:
  std::mt19937_64 eng_;
  std::normal_distribution<double> nd_{0.0, 1.0};
  std::uniform_real_distribution<double> ud_{0.0, 1.0};
};

/// Coefficients: complex Gaussian times e^{-mu |k'| - mu_z |k3|} (1 + |k|)^{-q}.
struct RandomFieldSpec {
  double mu = 0.5;
  double mu_z = -1.0;  ///< negative means mu_z = mu
  double q = 4.0;
  bool in_d0 = true;
};

SpectralField random_field(int N, const RandomFieldSpec& spec, Rng& rng);

}  // namespace gpe
