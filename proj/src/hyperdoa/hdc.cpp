#include "hyperdoa/hdc.hpp"

#include <cmath>
#include <string>

#include "hyperdoa/error.hpp"
#include "hyperdoa/rng.hpp"

namespace hyperdoa::hdc {

EncoderBasis::EncoderBasis(std::size_t feature_dim, std::size_t dim, double bandwidth, std::uint64_t seed)
    : feature_dim_(feature_dim), dim_(dim), bandwidth_(bandwidth), seed_(seed) {
  if (feature_dim == 0) throw ConfigError("encoder: feature_dim must be >= 1");
  if (dim == 0) throw ConfigError("encoder: dimension must be >= 1");
  if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) throw ConfigError("encoder: bandwidth must be > 0");
  Rng rng(seed);
  phases_.resize(feature_dim * dim);
  for (auto& p : phases_) p = rng.phase();
}

Hypervector encode(const EncoderBasis& basis, std::span<const double> f) {
  if (f.size() != basis.feature_dim())
    throw ShapeError("encode: feature dim " + std::to_string(f.size()) + " != basis feature dim " +
                     std::to_string(basis.feature_dim()));
  for (double v : f)
    if (!std::isfinite(v)) throw DegenerateInputError("encode: non-finite feature value");

  const std::size_t dim = basis.dim();
  std::vector<double> phase(dim, 0.0);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double fi = f[i];
    const auto row = basis.phases(i);
    for (std::size_t d = 0; d < dim; ++d) phase[d] += fi * row[d];
  }
  Hypervector h{std::vector<std::complex<double>>(dim)};
  const double bw = basis.bandwidth();
  for (std::size_t d = 0; d < dim; ++d) {
    const double p = bw * phase[d];
    h.values[d] = {std::cos(p), std::sin(p)};
  }
  return h;
}

double similarity(const Hypervector& a, const Hypervector& b) {
  if (a.dim() != b.dim()) throw ShapeError("similarity: dimension mismatch");
  if (a.dim() == 0) return 0.0;
  double acc = 0.0;
  for (std::size_t d = 0; d < a.dim(); ++d)
    acc += a.values[d].real() * b.values[d].real() + a.values[d].imag() * b.values[d].imag();
  return acc / static_cast<double>(a.dim());
}

}  // namespace hyperdoa::hdc
