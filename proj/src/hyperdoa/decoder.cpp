#include "hyperdoa/decoder.hpp"

#include <cmath>

#include "hyperdoa/error.hpp"

namespace hyperdoa::decoder {

namespace {
// Absorbs rounding in min + k*resolution so that a point exactly one window
// away is treated as inside it.
constexpr double kWindowEps = 1e-9;
}  // namespace

void DecoderConfig::validate() const {
  if (n_sources < 1) throw ConfigError("decoder: n_sources must be >= 1");
  if (!(min_separation_deg > 0.0 && min_separation_deg < 180.0))
    throw ConfigError("decoder: min_separation_deg must lie in (0, 180)");
}

DoaEstimate decode(const PseudoSpectrum& spec, const DecoderConfig& cfg) {
  cfg.validate();
  const std::size_t g = spec.scores.size();
  if (g != spec.grid.size()) throw ShapeError("decode: spectrum length does not match its grid");
  for (double s : spec.scores)
    if (!std::isfinite(s)) throw DegenerateInputError("decode: non-finite spectrum score");

  std::vector<bool> alive(g, true);
  DoaEstimate est;
  while (est.angles_deg.size() < cfg.n_sources) {
    std::size_t best = g;
    for (std::size_t k = 0; k < g; ++k)
      if (alive[k] && (best == g || spec.scores[k] > spec.scores[best])) best = k;
    if (best == g) throw DecodeError(est.angles_deg.size(), cfg.n_sources);

    const double theta = spec.grid.angle(best);
    est.angles_deg.push_back(theta);
    est.scores.push_back(spec.scores[best]);
    for (std::size_t k = 0; k < g; ++k)
      if (alive[k] && std::abs(spec.grid.angle(k) - theta) <= cfg.min_separation_deg + kWindowEps) alive[k] = false;
  }
  return est;
}

}  // namespace hyperdoa::decoder
