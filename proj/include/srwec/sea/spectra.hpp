#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "srwec/csv.hpp"

namespace srwec::sea {

inline constexpr double kGravity = 9.81;  // m/s^2
inline constexpr double kPi = 3.14159265358979323846;

/// Target sea description.
struct SeaState {
  double hs = 1.0;     // significant wave height, m
  double tp = 8.0;     // peak period, s
  double gamma = 1.0;  // JONSWAP peakedness

  /// Throws ValidationError naming the first violated invariant.
  void validate() const;
};

/// One-sided variance density on a strictly increasing frequency grid.
struct SpectralDensity {
  std::vector<double> freq;  // Hz
  std::vector<double> s;     // m^2/Hz

  void validate() const;
  std::size_t size() const { return freq.size(); }
};

/// Phase-randomised time-domain sea surface at one point.
struct WaveRealization {
  double dt = 0.0;                 // s
  std::vector<double> elevation;   // m
  std::vector<double> slope;       // rad, small-angle surface slope d(eta)/dx
  std::uint64_t seed = 0;

  std::size_t size() const { return elevation.size(); }
};

struct GridOptions {
  std::size_t points = 512;
  double low_factor = 0.25;  // f_lo = low_factor / tp
  double high_factor = 6.0;  // f_hi = high_factor / tp
};

/// Logarithmically spaced frequency grid around the peak 1/tp.
std::vector<double> log_grid(double tp, const GridOptions& opts = {});

/// JONSWAP shape rescaled so that m0 = hs^2/16 by trapezoidal quadrature on `freq`.
SpectralDensity jonswap(const SeaState& state, std::span<const double> freq);
SpectralDensity jonswap(const SeaState& state, const GridOptions& opts = {});

/// Unnormalised JONSWAP shape value (sigma 0.07 below the peak, 0.09 above).
double jonswap_shape(double f, double fp, double gamma);

/// m_n = integral of f^n S(f) df (trapezoidal); n in {-1, 0, 1, 2}.
double moment(const SpectralDensity& s, int n);

double significant_height(const SpectralDensity& s);  // 4 sqrt(m0)
double energy_period(const SpectralDensity& s);       // m_-1 / m0
double peak_period(const SpectralDensity& s);         // 1 / argmax S

struct RealizeOptions {
  std::size_t max_samples = 20'000'000;
};

/// Linear random-phase superposition with amplitudes sqrt(2 S df) and deep-water slopes k a.
WaveRealization realize(const SpectralDensity& s, double duration, double dt, std::uint64_t seed,
                        const RealizeOptions& opts = {});

/// Deep-water wavenumber for frequency f (Hz).
inline double deep_water_k(double f) {
  const double w = 2.0 * kPi * f;
  return w * w / kGravity;
}

/// Trapezoidal quadrature weights for a nonuniform grid.
std::vector<double> trapezoid_weights(std::span<const double> x);

csv::Table spectrum_table(const SpectralDensity& s);
csv::Table realization_table(const WaveRealization& r);

}  // namespace srwec::sea
