#pragma once

#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

#include "srwec/csv.hpp"

namespace srwec::dynamics {

/// Linear second-order tilt response to the local wave slope:
///   theta'' + 2 zeta wn theta' + wn^2 theta = wn^2 gain alpha(t)
struct TiltParams {
  double natural_period = 7.5;  // s
  double damping_ratio = 0.2;
  double static_gain = 2.0;     // steady tilt per unit steady slope

  void validate() const;
};

/// Uniformly sampled tube tilt, radians. Positive tilt lowers the +x end.
struct TiltSeries {
  double dt = 0.0;
  std::vector<double> theta;

  double duration() const { return theta.empty() ? 0.0 : dt * static_cast<double>(theta.size() - 1); }
  /// Linear interpolation; held constant beyond the ends.
  double at(double t) const;
};

/// Integrates the oscillator from rest with RK4; alpha is linearly interpolated inside a step.
/// Throws StabilityError when dt > natural_period / 20.
TiltSeries tilt_from_slope(std::span<const double> slope, double dt, const TiltParams& params);

/// External tilt input: CSV `t_s,theta_rad` with uniform dt.
TiltSeries parse_tilt_csv(std::string_view text);
TiltSeries read_tilt_csv(const std::filesystem::path& path);
csv::Table tilt_table(const TiltSeries& tilt);

}  // namespace srwec::dynamics
