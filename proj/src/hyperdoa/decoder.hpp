#pragma once

#include <cstddef>
#include <vector>

#include "hyperdoa/spectrum.hpp"

// Greedy non-maximum suppression over a pseudo-spectrum.
namespace hyperdoa::decoder {

inline constexpr double kDefaultMinSeparationDeg = 6.0;

struct DecoderConfig {
  std::size_t n_sources = 1;
  double min_separation_deg = kDefaultMinSeparationDeg;

  void validate() const;
};

struct DoaEstimate {
  std::vector<double> angles_deg;  // in selection order (descending score)
  std::vector<double> scores;
};

// Repeatedly takes the highest remaining score (lowest angle on ties) and
// suppresses every grid point within +/- min_separation_deg of it, inclusive.
// No wraparound at +/-90 degrees. Throws DecodeError when fewer than
// n_sources peaks can be placed.
[[nodiscard]] DoaEstimate decode(const PseudoSpectrum& spec, const DecoderConfig& cfg);

}  // namespace hyperdoa::decoder
