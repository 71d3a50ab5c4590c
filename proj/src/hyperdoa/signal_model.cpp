#include "hyperdoa/signal_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "hyperdoa/error.hpp"
#include "hyperdoa/rng.hpp"

namespace hyperdoa::signal {

namespace {
constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr int kMaxDoaAttempts = 1000;
}  // namespace

void ArrayConfig::validate() const {
  if (n_antennas < 2) throw ConfigError("array: n_antennas must be >= 2");
  if (n_snapshots < 1) throw ConfigError("array: n_snapshots must be >= 1");
}

void SourceScenario::validate(const ArrayConfig& cfg) const {
  cfg.validate();
  if (doas_deg.empty()) throw ConfigError("scenario: at least one source required");
  if (doas_deg.size() >= cfg.n_antennas)
    throw ConfigError("scenario: source count M=" + std::to_string(doas_deg.size()) +
                      " must be smaller than N=" + std::to_string(cfg.n_antennas));
  for (double d : doas_deg)
    if (!(d >= -90.0 && d <= 90.0)) throw DomainError("scenario: DoA outside [-90, 90] degrees");
  if (!std::isfinite(snr_db)) throw ConfigError("scenario: snr_db must be finite");
  if (min_pairwise_separation(doas_deg) < min_separation_deg)
    throw ConfigError("scenario: sources closer than the minimum separation");
}

CVector steering_vector(double theta_deg, std::size_t n_antennas) {
  if (!(theta_deg >= -90.0 && theta_deg <= 90.0))
    throw DomainError("steering_vector: angle " + std::to_string(theta_deg) + " outside [-90, 90]");
  if (n_antennas < 1) throw DomainError("steering_vector: n_antennas must be >= 1");
  const double s = std::sin(theta_deg * kDegToRad);
  CVector a(static_cast<Eigen::Index>(n_antennas));
  a[0] = 1.0;
  for (std::size_t k = 1; k < n_antennas; ++k)
    a[static_cast<Eigen::Index>(k)] = std::polar(1.0, -std::numbers::pi * static_cast<double>(k) * s);
  return a;
}

CMatrix steering_matrix(std::span<const double> doas_deg, std::size_t n_antennas) {
  CMatrix a(static_cast<Eigen::Index>(n_antennas), static_cast<Eigen::Index>(doas_deg.size()));
  for (std::size_t m = 0; m < doas_deg.size(); ++m)
    a.col(static_cast<Eigen::Index>(m)) = steering_vector(doas_deg[m], n_antennas);
  return a;
}

SnapshotMatrix generate_snapshots(const ArrayConfig& cfg, const SourceScenario& scn) {
  scn.validate(cfg);
  const auto n = static_cast<Eigen::Index>(cfg.n_antennas);
  const auto t = static_cast<Eigen::Index>(cfg.n_snapshots);
  const auto m = static_cast<Eigen::Index>(scn.doas_deg.size());
  const double source_power = std::pow(10.0, scn.snr_db / 10.0);

  // Draw order is part of the dataset contract: gains (coherent only), then
  // source samples row-major, then noise row-major.
  Rng rng(scn.rng_seed);
  CMatrix s(m, t);
  if (scn.coherent) {
    std::vector<std::complex<double>> gains(static_cast<std::size_t>(m));
    for (auto& g : gains) g = std::polar(1.0, rng.phase());
    for (Eigen::Index c = 0; c < t; ++c) {
      const auto w = rng.complex_normal(source_power);
      for (Eigen::Index r = 0; r < m; ++r) s(r, c) = gains[static_cast<std::size_t>(r)] * w;
    }
  } else {
    for (Eigen::Index r = 0; r < m; ++r)
      for (Eigen::Index c = 0; c < t; ++c) s(r, c) = rng.complex_normal(source_power);
  }

  SnapshotMatrix x{steering_matrix(scn.doas_deg, cfg.n_antennas) * s};
  if (!scn.noise_free) {
    for (Eigen::Index r = 0; r < n; ++r)
      for (Eigen::Index c = 0; c < t; ++c) x.data(r, c) += rng.complex_normal(1.0);
  }
  return x;
}

CovarianceMatrix sample_covariance(const SnapshotMatrix& x) {
  const auto n = x.data.rows();
  const auto t = x.data.cols();
  if (t < 1) throw ShapeError("sample_covariance: no snapshots");
  const double inv_t = 1.0 / static_cast<double>(t);
  CovarianceMatrix r{CMatrix(n, n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      std::complex<double> acc = 0.0;
      for (Eigen::Index c = 0; c < t; ++c) acc += x.data(i, c) * std::conj(x.data(j, c));
      acc *= inv_t;
      if (i == j) acc.imag(0.0);
      r.data(i, j) = acc;
      r.data(j, i) = std::conj(acc);
    }
  }
  return r;
}

CovarianceMatrix theoretical_covariance(std::span<const double> doas_deg, std::span<const double> powers,
                                        double noise_var, std::size_t n_antennas) {
  if (doas_deg.size() != powers.size()) throw ShapeError("theoretical_covariance: one power per source");
  const CMatrix a = steering_matrix(doas_deg, n_antennas);
  Eigen::VectorXcd p(static_cast<Eigen::Index>(powers.size()));
  for (std::size_t k = 0; k < powers.size(); ++k) p[static_cast<Eigen::Index>(k)] = powers[k];
  CMatrix r = a * p.asDiagonal() * a.adjoint();
  r.diagonal().array() += noise_var;
  // Exact Hermitian symmetry.
  const CMatrix sym = 0.5 * (r + r.adjoint());
  return CovarianceMatrix{sym};
}

double min_pairwise_separation(std::span<const double> doas_deg) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < doas_deg.size(); ++i)
    for (std::size_t j = i + 1; j < doas_deg.size(); ++j) best = std::min(best, std::abs(doas_deg[i] - doas_deg[j]));
  return best;
}

std::vector<double> sample_doas(std::uint64_t seed, std::size_t m, double min_separation_deg) {
  if (m == 0) throw ConfigError("sample_doas: m must be >= 1");
  if (static_cast<double>(m - 1) * min_separation_deg > 180.0)
    throw ConfigError("sample_doas: cannot place " + std::to_string(m) + " sources at this separation");
  std::vector<double> doas(m);
  for (std::uint64_t round = 0;; ++round) {
    Rng rng(mix_seed(seed, round));
    for (int attempt = 0; attempt < kMaxDoaAttempts; ++attempt) {
      for (auto& d : doas) d = rng.uniform(-90.0, 90.0);
      if (min_pairwise_separation(doas) >= min_separation_deg) return doas;
    }
  }
}

}  // namespace hyperdoa::signal
