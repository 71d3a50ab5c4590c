#include "hyperdoa/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hyperdoa/error.hpp"

namespace hyperdoa {

namespace {
constexpr double kGridEps = 1e-9;
}

void AngularGrid::validate() const {
  if (!(resolution_deg > 0.0) || !std::isfinite(resolution_deg)) throw ConfigError("grid: resolution must be > 0");
  if (!(min_deg >= -90.0 && max_deg <= 90.0 && min_deg < max_deg))
    throw ConfigError("grid: range must satisfy -90 <= min < max <= 90");
}

std::size_t AngularGrid::size() const {
  return static_cast<std::size_t>(std::floor((max_deg - min_deg) / resolution_deg + kGridEps)) + 1;
}

std::size_t AngularGrid::nearest_index(double theta_deg) const {
  if (!(theta_deg >= min_deg - kGridEps && theta_deg <= max_deg + kGridEps))
    throw LabelError("label " + std::to_string(theta_deg) + " deg outside grid [" + std::to_string(min_deg) +
                     ", " + std::to_string(max_deg) + "]");
  const double x = (theta_deg - min_deg) / resolution_deg;
  const double k = std::ceil(x - 0.5);
  const auto last = static_cast<double>(size() - 1);
  return static_cast<std::size_t>(std::clamp(k, 0.0, last));
}

}  // namespace hyperdoa
