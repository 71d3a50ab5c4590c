#include "hyperdoa/music.hpp"

#include <algorithm>
#include <string>

#include "hyperdoa/error.hpp"

namespace hyperdoa::music {

SubspaceDecomposition decompose(const CovarianceMatrix& r, std::size_t m) {
  const auto n = r.size();
  if (m < 1 || m >= n)
    throw ConfigError("music: source count " + std::to_string(m) + " must satisfy 1 <= m < N=" + std::to_string(n));
  auto eig = linalg::hermitian_eigen(r.data);
  const auto mi = static_cast<Eigen::Index>(m);
  return {eig.eigenvalues, eig.eigenvectors.leftCols(mi),
          eig.eigenvectors.rightCols(static_cast<Eigen::Index>(n) - mi)};
}

PseudoSpectrum music_spectrum(const CovarianceMatrix& r, std::size_t m, const AngularGrid& grid) {
  grid.validate();
  const auto sub = decompose(r, m);
  const auto n = r.size();
  PseudoSpectrum spec{std::vector<double>(grid.size()), grid};
  for (std::size_t k = 0; k < spec.scores.size(); ++k) {
    const auto a = signal::steering_vector(std::clamp(grid.angle(k), -90.0, 90.0), n);
    const double proj = (sub.noise_basis.adjoint() * a).squaredNorm();
    spec.scores[k] = 1.0 / (proj + kNullFloor);
  }
  return spec;
}

decoder::DoaEstimate music_estimate(const SnapshotMatrix& x, std::size_t m, const AngularGrid& grid,
                                    const decoder::DecoderConfig& cfg) {
  return decoder::decode(music_spectrum(signal::sample_covariance(x), m, grid), cfg);
}

decoder::DoaEstimate music_estimate_smoothed(const SnapshotMatrix& x, std::size_t m, const AngularGrid& grid,
                                             const decoder::DecoderConfig& cfg,
                                             const features::SmoothingConfig& smoothing) {
  return decoder::decode(music_spectrum(features::spatial_smoothing(x, smoothing), m, grid), cfg);
}

}  // namespace hyperdoa::music
