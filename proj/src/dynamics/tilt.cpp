#include "srwec/dynamics/tilt.hpp"

#include <fmt/format.h>

#include <array>
#include <cmath>

#include "srwec/error.hpp"
#include "srwec/sea/spectra.hpp"

namespace srwec::dynamics {

void TiltParams::validate() const {
  if (!(natural_period > 0.0)) throw ValidationError("tilt natural_period must be > 0");
  if (!(damping_ratio > 0.0 && damping_ratio < 2.0)) {
    throw ValidationError("tilt damping_ratio must be in (0, 2)");
  }
  if (!(static_gain > 0.0)) throw ValidationError("tilt static_gain must be > 0");
}

double TiltSeries::at(double t) const {
  if (theta.empty()) return 0.0;
  if (t <= 0.0) return theta.front();
  const double pos = t / dt;
  const auto i = static_cast<std::size_t>(pos);
  if (i + 1 >= theta.size()) return theta.back();
  const double frac = pos - static_cast<double>(i);
  return theta[i] + frac * (theta[i + 1] - theta[i]);
}

TiltSeries tilt_from_slope(std::span<const double> slope, double dt, const TiltParams& params) {
  params.validate();
  if (slope.empty()) throw ValidationError("slope series is empty");
  if (!(dt > 0.0)) throw ValidationError("slope dt must be > 0");
  if (dt > params.natural_period / 20.0) {
    throw StabilityError(fmt::format("dt = {} s exceeds natural_period/20 = {} s", dt,
                                     params.natural_period / 20.0));
  }
  const double wn = 2.0 * sea::kPi / params.natural_period;
  const double two_zeta_wn = 2.0 * params.damping_ratio * wn;
  const double wn2 = wn * wn;
  const double gain = params.static_gain;

  using State = std::array<double, 2>;
  auto deriv = [&](const State& s, double alpha) -> State {
    return {s[1], wn2 * (gain * alpha - s[0]) - two_zeta_wn * s[1]};
  };

  TiltSeries out;
  out.dt = dt;
  out.theta.resize(slope.size());
  State s{0.0, 0.0};
  out.theta[0] = 0.0;
  for (std::size_t i = 0; i + 1 < slope.size(); ++i) {
    const double a0 = slope[i];
    const double a1 = slope[i + 1];
    const double am = 0.5 * (a0 + a1);
    const State k1 = deriv(s, a0);
    const State k2 = deriv({s[0] + 0.5 * dt * k1[0], s[1] + 0.5 * dt * k1[1]}, am);
    const State k3 = deriv({s[0] + 0.5 * dt * k2[0], s[1] + 0.5 * dt * k2[1]}, am);
    const State k4 = deriv({s[0] + dt * k3[0], s[1] + dt * k3[1]}, a1);
    for (int j = 0; j < 2; ++j) s[j] += dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    out.theta[i + 1] = s[0];
  }
  return out;
}

TiltSeries parse_tilt_csv(std::string_view text) {
  const auto table = csv::parse_numeric(text);
  const auto ti = table.column("t_s");
  const auto th = table.column("theta_rad");
  if (table.rows.size() < 2) throw FormatError("tilt series needs at least two samples");
  TiltSeries out;
  out.dt = table.rows[1][ti] - table.rows[0][ti];
  if (!(out.dt > 0.0)) throw FormatError("tilt series time must increase");
  out.theta.reserve(table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const double expected = table.rows[0][ti] + out.dt * static_cast<double>(i);
    if (std::abs(table.rows[i][ti] - expected) > 1e-6 * std::max(1.0, std::abs(expected))) {
      throw FormatError(fmt::format("tilt series row {} breaks the uniform dt", i + 1));
    }
    out.theta.push_back(table.rows[i][th]);
  }
  return out;
}

TiltSeries read_tilt_csv(const std::filesystem::path& path) {
  return parse_tilt_csv(csv::read_text(path));
}

csv::Table tilt_table(const TiltSeries& tilt) {
  csv::Table t({"t_s", "theta_rad"});
  for (std::size_t i = 0; i < tilt.theta.size(); ++i) {
    t.add_row(std::vector<double>{tilt.dt * static_cast<double>(i), tilt.theta[i]});
  }
  return t;
}

}  // namespace srwec::dynamics
