#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hyperdoa/linalg.hpp"

namespace hyperdoa {
class Rng;
}

// Synthetic narrowband uniform-linear-array data at half-wavelength spacing:
//   X = A(theta) S + V,  a(theta)_k = exp(-j*pi*k*sin(theta)).
namespace hyperdoa::signal {

using linalg::CMatrix;
using linalg::CVector;

inline constexpr double kDefaultSourceSeparationDeg = 15.0;

struct ArrayConfig {
  std::size_t n_antennas = 8;
  std::size_t n_snapshots = 100;

  void validate() const;
};

struct SourceScenario {
  std::vector<double> doas_deg;
  double snr_db = 0.0;  // per-source power over unit noise power
  bool coherent = false;
  std::uint64_t rng_seed = 0;
  double min_separation_deg = kDefaultSourceSeparationDeg;
  // Debug switch for the infinite-SNR limit: sigma_V^2 = 0.
  bool noise_free = false;

  void validate(const ArrayConfig& cfg) const;
};

struct SnapshotMatrix {
  CMatrix data;  // N x T

  [[nodiscard]] std::size_t n_antennas() const { return static_cast<std::size_t>(data.rows()); }
  [[nodiscard]] std::size_t n_snapshots() const { return static_cast<std::size_t>(data.cols()); }
};

struct CovarianceMatrix {
  CMatrix data;  // P x P, Hermitian PSD

  [[nodiscard]] std::size_t size() const { return static_cast<std::size_t>(data.rows()); }
};

[[nodiscard]] CVector steering_vector(double theta_deg, std::size_t n_antennas);
[[nodiscard]] CMatrix steering_matrix(std::span<const double> doas_deg, std::size_t n_antennas);

[[nodiscard]] SnapshotMatrix generate_snapshots(const ArrayConfig& cfg, const SourceScenario& scn);

// (1/T) X X^H, built from the upper triangle so the result is exactly Hermitian.
[[nodiscard]] CovarianceMatrix sample_covariance(const SnapshotMatrix& x);

// A diag(powers) A^H + noise_var I for non-coherent sources.
[[nodiscard]] CovarianceMatrix theoretical_covariance(std::span<const double> doas_deg,
                                                      std::span<const double> powers,
                                                      double noise_var, std::size_t n_antennas);

// Rejection-samples m angles uniformly on [-90, 90] until every pair is at
// least min_separation_deg apart. After 1000 failed attempts the generator is
// re-seeded from the original seed and a round counter.
[[nodiscard]] std::vector<double> sample_doas(std::uint64_t seed, std::size_t m,
                                              double min_separation_deg = kDefaultSourceSeparationDeg);

[[nodiscard]] double min_pairwise_separation(std::span<const double> doas_deg);

}  // namespace hyperdoa::signal
