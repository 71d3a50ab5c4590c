#include "hyperdoa/features.hpp"

#include <cmath>
#include <string>

#include "hyperdoa/error.hpp"

namespace hyperdoa::features {

std::string_view to_string(Method m) noexcept {
  return m == Method::Lag ? "lag" : "spatial_smoothing";
}

Method method_from_string(std::string_view s) {
  if (s == "lag") return Method::Lag;
  if (s == "spatial_smoothing" || s == "smoothing" || s == "ss") return Method::SpatialSmoothing;
  throw ConfigError("unknown feature method '" + std::string(s) + "' (expected lag or spatial_smoothing)");
}

SmoothingConfig SmoothingConfig::for_array(std::size_t n_antennas, std::size_t subarray_size) {
  SmoothingConfig cfg;
  cfg.subarray_size = subarray_size != 0 ? subarray_size : (n_antennas > 3 ? n_antennas - 3 : 1);
  if (cfg.subarray_size >= n_antennas)
    throw ConfigError("smoothing: subarray size " + std::to_string(cfg.subarray_size) +
                      " must be smaller than N=" + std::to_string(n_antennas));
  cfg.n_subarrays = n_antennas - cfg.subarray_size + 1;
  return cfg;
}

void SmoothingConfig::validate(std::size_t n_antennas) const {
  if (subarray_size < 1 || subarray_size >= n_antennas)
    throw ConfigError("smoothing: subarray size must satisfy 1 <= M_sub < N");
  if (n_subarrays != n_antennas - subarray_size + 1)
    throw ConfigError("smoothing: n_subarrays must equal N - M_sub + 1");
}

std::size_t FeatureSpec::dim(std::size_t n_antennas) const {
  if (method == Method::Lag) return 2 * n_antennas;
  const auto m_sub = SmoothingConfig::for_array(n_antennas, subarray_size).subarray_size;
  return m_sub * (m_sub + 1);
}

CVector lag_vector(const CovarianceMatrix& r) {
  const auto n = r.data.rows();
  if (n != r.data.cols()) throw ShapeError("lag_vector: covariance must be square");
  CVector lags(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    std::complex<double> acc = 0.0;
    for (Eigen::Index i = 0; i + k < n; ++i) acc += r.data(i, i + k);
    lags[k] = acc / static_cast<double>(n - k);
  }
  return lags;
}

FeatureVector lag_features(const CovarianceMatrix& r, bool normalize_r0) {
  CVector lags = lag_vector(r);
  if (normalize_r0) {
    const double r0 = std::abs(lags[0]);
    if (!(r0 > 1e-12)) throw DegenerateInputError("lag_features: |r_0| is zero, cannot normalize");
    lags /= r0;
  }
  const auto n = static_cast<std::size_t>(lags.size());
  FeatureVector f{std::vector<double>(2 * n), Method::Lag};
  for (std::size_t k = 0; k < n; ++k) {
    f.values[k] = lags[static_cast<Eigen::Index>(k)].real();
    f.values[n + k] = lags[static_cast<Eigen::Index>(k)].imag();
  }
  return f;
}

CovarianceMatrix spatial_smoothing(const SnapshotMatrix& x, const SmoothingConfig& cfg) {
  const auto n = x.n_antennas();
  cfg.validate(n);
  const auto p = static_cast<Eigen::Index>(cfg.subarray_size);
  CovarianceMatrix acc{linalg::CMatrix::Zero(p, p)};
  for (std::size_t j = 0; j < cfg.n_subarrays; ++j) {
    const SnapshotMatrix sub{x.data.middleRows(static_cast<Eigen::Index>(j), p)};
    acc.data += signal::sample_covariance(sub).data;
  }
  acc.data /= static_cast<double>(cfg.n_subarrays);
  return acc;
}

FeatureVector smoothing_features(const CovarianceMatrix& rss) {
  const auto p = rss.data.rows();
  if (p != rss.data.cols()) throw ShapeError("smoothing_features: covariance must be square");
  const auto count = static_cast<std::size_t>(p * (p + 1) / 2);
  FeatureVector f{std::vector<double>(2 * count), Method::SpatialSmoothing};
  std::size_t idx = 0;
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = i; j < p; ++j, ++idx) {
      f.values[idx] = rss.data(i, j).real();
      f.values[count + idx] = rss.data(i, j).imag();
    }
  }
  return f;
}

FeatureVector extract(const SnapshotMatrix& x, const FeatureSpec& spec) {
  if (spec.method == Method::Lag) return lag_features(signal::sample_covariance(x), spec.normalize_r0);
  const auto cfg = SmoothingConfig::for_array(x.n_antennas(), spec.subarray_size);
  return smoothing_features(spatial_smoothing(x, cfg));
}

Normalizer Normalizer::fit(std::span<const FeatureVector> samples) {
  if (samples.size() < 2) throw TrainingError("normalizer: need at least 2 samples to fit");
  const std::size_t dim = samples.front().dim();
  const Method method = samples.front().method;
  Normalizer out;
  out.mean.assign(dim, 0.0);
  out.std.assign(dim, 0.0);
  out.fitted_on = samples.size();
  for (const auto& f : samples) {
    if (f.dim() != dim || f.method != method) throw ShapeError("normalizer: samples differ in method or dimension");
    for (std::size_t d = 0; d < dim; ++d) out.mean[d] += f.values[d];
  }
  const double inv_n = 1.0 / static_cast<double>(samples.size());
  for (auto& m : out.mean) m *= inv_n;
  for (const auto& f : samples)
    for (std::size_t d = 0; d < dim; ++d) {
      const double c = f.values[d] - out.mean[d];
      out.std[d] += c * c;
    }
  for (auto& s : out.std) {
    s = std::sqrt(s * inv_n);
    if (s < kStdFloor) s = 1.0;
  }
  return out;
}

FeatureVector Normalizer::apply(const FeatureVector& f) const {
  if (f.dim() != dim())
    throw ShapeError("normalizer: feature dim " + std::to_string(f.dim()) + " != fitted dim " +
                     std::to_string(dim()));
  FeatureVector out{std::vector<double>(f.dim()), f.method};
  for (std::size_t d = 0; d < f.dim(); ++d) out.values[d] = (f.values[d] - mean[d]) / std[d];
  return out;
}

}  // namespace hyperdoa::features
