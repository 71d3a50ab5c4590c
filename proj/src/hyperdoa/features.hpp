#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "hyperdoa/signal_model.hpp"

// Covariance-structure features fed to the hypervector encoder.
namespace hyperdoa::features {

using linalg::CVector;
using signal::CovarianceMatrix;
using signal::SnapshotMatrix;

enum class Method { Lag, SpatialSmoothing };

[[nodiscard]] std::string_view to_string(Method m) noexcept;
[[nodiscard]] Method method_from_string(std::string_view s);

struct FeatureVector {
  std::vector<double> values;
  Method method = Method::Lag;

  [[nodiscard]] std::size_t dim() const noexcept { return values.size(); }
};

struct SmoothingConfig {
  std::size_t subarray_size = 0;  // M_sub
  std::size_t n_subarrays = 0;    // L = N - M_sub + 1

  // Default subarray size N - 3 (four subarrays).
  [[nodiscard]] static SmoothingConfig for_array(std::size_t n_antennas, std::size_t subarray_size = 0);
  void validate(std::size_t n_antennas) const;
};

// Everything needed to turn a snapshot matrix into a raw (un-normalized)
// feature vector. Persisted in the model header.
struct FeatureSpec {
  Method method = Method::Lag;
  bool normalize_r0 = true;        // Lag only
  std::size_t subarray_size = 0;   // SpatialSmoothing only; 0 means N - 3

  [[nodiscard]] std::size_t dim(std::size_t n_antennas) const;
};

// r_k = mean of the k-th superdiagonal, k = 0..N-1.
[[nodiscard]] CVector lag_vector(const CovarianceMatrix& r);

// [Re r_0..r_{N-1}, Im r_0..r_{N-1}], optionally divided by |r_0| first.
[[nodiscard]] FeatureVector lag_features(const CovarianceMatrix& r, bool normalize_r0);

// Mean of the L sample covariances of the overlapping subarrays (rows j..j+M_sub-1).
[[nodiscard]] CovarianceMatrix spatial_smoothing(const SnapshotMatrix& x, const SmoothingConfig& cfg);

// Upper triangle including the diagonal, row-major, as [all Re, all Im].
[[nodiscard]] FeatureVector smoothing_features(const CovarianceMatrix& rss);

[[nodiscard]] FeatureVector extract(const SnapshotMatrix& x, const FeatureSpec& spec);

// Per-dimension z-score with population statistics.
struct Normalizer {
  std::vector<double> mean;
  std::vector<double> std;
  std::size_t fitted_on = 0;

  static constexpr double kStdFloor = 1e-12;

  [[nodiscard]] static Normalizer fit(std::span<const FeatureVector> samples);
  [[nodiscard]] FeatureVector apply(const FeatureVector& f) const;
  [[nodiscard]] std::size_t dim() const noexcept { return mean.size(); }

  friend bool operator==(const Normalizer&, const Normalizer&) = default;
};

}  // namespace hyperdoa::features
