#pragma once

#include <cstddef>
#include <vector>

namespace hyperdoa {

// Discretized candidate angles min_deg + k*resolution_deg.
struct AngularGrid {
  double min_deg = -90.0;
  double max_deg = 90.0;
  double resolution_deg = 0.1;

  void validate() const;
  [[nodiscard]] std::size_t size() const;
  [[nodiscard]] double angle(std::size_t k) const { return min_deg + static_cast<double>(k) * resolution_deg; }
  // Nearest grid index; ties go to the lower angle. Throws LabelError when
  // theta lies outside [min_deg, max_deg].
  [[nodiscard]] std::size_t nearest_index(double theta_deg) const;

  friend bool operator==(const AngularGrid&, const AngularGrid&) = default;
};

struct PseudoSpectrum {
  std::vector<double> scores;
  AngularGrid grid;
};

}  // namespace hyperdoa
