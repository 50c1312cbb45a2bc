#pragma once

#include <cmath>
#include <string>

#include "homsim/errors.hpp"

namespace homsim {

/// Uniform midpoint grid over detunings [-span, span] on each axis.
///
/// Node k sits at -span + (k + 1/2) * spacing, so the grid is mirror
/// symmetric about zero and nu_a + nu_b, nu_a - nu_b are exact multiples of
/// the spacing.
struct FrequencyGrid {
  int points_per_axis = 2048;
  /// Half-width in rad/ps.
  double span = 64.0;

  void validate() const {
    if (points_per_axis <= 1) throw ConfigError("FrequencyGrid: degenerate grid (<= 1 point per axis)");
    if (points_per_axis < 16 || points_per_axis % 2 != 0)
      throw ConfigError("FrequencyGrid: points_per_axis must be even and >= 16, got " +
                        std::to_string(points_per_axis));
    if (!(span > 0.0) || !std::isfinite(span)) throw ConfigError("FrequencyGrid: span must be > 0");
  }

  double spacing() const { return 2.0 * span / points_per_axis; }
  double node(int k) const { return -span + (k + 0.5) * spacing(); }
};

}  // namespace homsim
