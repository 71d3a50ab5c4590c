#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <string_view>

namespace hyperdoa {

// Seeded generator whose output is portable across standard libraries: the
// engine is std::mt19937_64 (bit-exact by the standard) and every derived
// variate is computed here rather than through <random> distributions, whose
// algorithms are implementation-defined.
class Rng {
 public:
  static constexpr std::string_view kAlgorithm = "mt19937_64+u53+box-muller";

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform phase on (-pi, pi].
  double phase();

  // Circular complex Gaussian with E|z|^2 = variance.
  std::complex<double> complex_normal(double variance = 1.0);

  // Real standard normal.
  double normal();

 private:
  std::mt19937_64 engine_;
};

// SplitMix64 finalizer, used to derive independent seeds from a base seed.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

}  // namespace hyperdoa
