#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hyperdoa/features.hpp"

// Fourier holographic reduced representations with fractional-power encoding.
//
// Each feature dimension i owns a random base hypervector B_i whose elements
// are unit phasors exp(j*phi_{i,d}), phi uniform on (-pi, pi]. A feature value
// f_i raises B_i to the fractional power bandwidth*f_i, and the powered bases
// are bound by element-wise multiplication:
//
//   H[d] = prod_i exp(j*bandwidth*f_i*phi_{i,d}) = exp(j*bandwidth*sum_i f_i*phi_{i,d})
//
// encode() evaluates the right-hand form: one phase accumulation and one
// complex exponential per element.
namespace hyperdoa::hdc {

inline constexpr std::size_t kDefaultDim = 10000;

struct Hypervector {
  std::vector<std::complex<double>> values;

  [[nodiscard]] std::size_t dim() const noexcept { return values.size(); }
};

class EncoderBasis {
 public:
  EncoderBasis(std::size_t feature_dim, std::size_t dim, double bandwidth, std::uint64_t seed);

  [[nodiscard]] std::size_t feature_dim() const noexcept { return feature_dim_; }
  [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
  [[nodiscard]] double bandwidth() const noexcept { return bandwidth_; }
  [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }

  // Phases of base hypervector i.
  [[nodiscard]] std::span<const double> phases(std::size_t i) const {
    return {phases_.data() + i * dim_, dim_};
  }

 private:
  std::size_t feature_dim_;
  std::size_t dim_;
  double bandwidth_;
  std::uint64_t seed_;
  std::vector<double> phases_;  // feature_dim x dim, row-major
};

[[nodiscard]] Hypervector encode(const EncoderBasis& basis, std::span<const double> f);
[[nodiscard]] inline Hypervector encode(const EncoderBasis& basis, const features::FeatureVector& f) {
  return encode(basis, std::span<const double>(f.values));
}

// (1/D) Re sum_d a_d conj(b_d)
[[nodiscard]] double similarity(const Hypervector& a, const Hypervector& b);

}  // namespace hyperdoa::hdc
