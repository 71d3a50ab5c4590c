#pragma once

#include <cstddef>

#include "hyperdoa/decoder.hpp"
#include "hyperdoa/features.hpp"
#include "hyperdoa/signal_model.hpp"
#include "hyperdoa/spectrum.hpp"

// MUSIC: score(theta) = 1 / (a(theta)^H U_N U_N^H a(theta) + eps).
namespace hyperdoa::music {

using linalg::CMatrix;
using linalg::RVector;
using signal::CovarianceMatrix;
using signal::SnapshotMatrix;

inline constexpr double kNullFloor = 1e-12;

struct SubspaceDecomposition {
  RVector eigenvalues;  // descending
  CMatrix signal_basis;  // N x m
  CMatrix noise_basis;   // N x (N - m), orthonormal columns
};

[[nodiscard]] SubspaceDecomposition decompose(const CovarianceMatrix& r, std::size_t m);

[[nodiscard]] PseudoSpectrum music_spectrum(const CovarianceMatrix& r, std::size_t m, const AngularGrid& grid);

// sample_covariance -> music_spectrum -> decode
[[nodiscard]] decoder::DoaEstimate music_estimate(const SnapshotMatrix& x, std::size_t m, const AngularGrid& grid,
                                                  const decoder::DecoderConfig& cfg);

// Same, on the spatially smoothed covariance (steering vectors of length M_sub).
[[nodiscard]] decoder::DoaEstimate music_estimate_smoothed(const SnapshotMatrix& x, std::size_t m,
                                                           const AngularGrid& grid,
                                                           const decoder::DecoderConfig& cfg,
                                                           const features::SmoothingConfig& smoothing);

}  // namespace hyperdoa::music
