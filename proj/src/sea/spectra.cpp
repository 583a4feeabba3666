#include "srwec/sea/spectra.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

#include "srwec/error.hpp"

namespace srwec::sea {

void SeaState::validate() const {
  if (!(hs > 0.0) || !std::isfinite(hs)) throw ValidationError("hs must be > 0");
  if (!(tp > 0.0) || !std::isfinite(tp)) throw ValidationError("tp must be > 0");
  if (!(gamma >= 1.0) || !std::isfinite(gamma)) throw ValidationError("gamma must be >= 1");
}

void SpectralDensity::validate() const {
  if (freq.size() != s.size()) throw ValidationError("spectrum freq and s lengths differ");
  if (freq.size() < 2) throw ValidationError("spectrum needs at least two points");
  for (std::size_t i = 0; i < freq.size(); ++i) {
    if (!std::isfinite(freq[i]) || !std::isfinite(s[i])) {
      throw ValidationError("spectrum contains non-finite values");
    }
    if (s[i] < 0.0) throw ValidationError("spectral density must be >= 0");
    if (i > 0 && !(freq[i] > freq[i - 1])) {
      throw ValidationError("spectrum frequency grid must be strictly increasing");
    }
  }
}

std::vector<double> log_grid(double tp, const GridOptions& opts) {
  if (opts.points < 2) throw ValidationError("frequency grid needs at least two points");
  if (!(opts.low_factor > 0.0) || !(opts.high_factor > opts.low_factor)) {
    throw ValidationError("frequency grid factors must satisfy 0 < low < high");
  }
  const double lo = std::log(opts.low_factor / tp);
  const double hi = std::log(opts.high_factor / tp);
  std::vector<double> f(opts.points);
  for (std::size_t i = 0; i < opts.points; ++i) {
    f[i] = std::exp(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(opts.points - 1));
  }
  return f;
}

std::vector<double> trapezoid_weights(std::span<const double> x) {
  std::vector<double> w(x.size(), 0.0);
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double h = 0.5 * (x[i + 1] - x[i]);
    w[i] += h;
    w[i + 1] += h;
  }
  return w;
}

double jonswap_shape(double f, double fp, double gamma) {
  if (f <= 0.0) return 0.0;
  const double sigma = f <= fp ? 0.07 : 0.09;
  const double r = std::exp(-(f - fp) * (f - fp) / (2.0 * sigma * sigma * fp * fp));
  const double ratio = fp / f;
  return std::pow(f, -5.0) * std::exp(-1.25 * ratio * ratio * ratio * ratio) * std::pow(gamma, r);
}

SpectralDensity jonswap(const SeaState& state, std::span<const double> freq) {
  state.validate();
  if (freq.size() < 2) throw ValidationError("frequency grid needs at least two points");
  for (std::size_t i = 1; i < freq.size(); ++i) {
    if (!(freq[i] > freq[i - 1])) throw ValidationError("frequency grid must be strictly increasing");
  }
  if (freq.front() <= 0.0) throw ValidationError("frequency grid must be positive");
  // Relative slack so the default log grid endpoints pass despite rounding.
  const double need_lo = 0.4 / state.tp * (1.0 + 1e-12);
  const double need_hi = 5.0 / state.tp * (1.0 - 1e-12);
  if (freq.front() > need_lo || freq.back() < need_hi) {
    throw ValidationError(fmt::format("frequency grid must span [{:.4g}, {:.4g}] Hz", 0.4 / state.tp,
                                      5.0 / state.tp));
  }
  const double fp = 1.0 / state.tp;
  const auto near_peak = std::count_if(freq.begin(), freq.end(), [fp](double f) {
    return f >= 0.8 * fp && f <= 1.2 * fp;
  });
  if (near_peak < 10) {
    throw ResolutionError(fmt::format(
        "frequency grid resolves the peak with {} points within +-20% of 1/tp (need 10)", near_peak));
  }

  SpectralDensity out;
  out.freq.assign(freq.begin(), freq.end());
  out.s.resize(freq.size());
  for (std::size_t i = 0; i < freq.size(); ++i) out.s[i] = jonswap_shape(freq[i], fp, state.gamma);
  const double raw_m0 = moment(out, 0);
  const double scale = state.hs * state.hs / 16.0 / raw_m0;
  for (double& v : out.s) v *= scale;
  return out;
}

SpectralDensity jonswap(const SeaState& state, const GridOptions& opts) {
  state.validate();
  const auto grid = log_grid(state.tp, opts);
  return jonswap(state, grid);
}

double moment(const SpectralDensity& s, int n) {
  if (n < -1 || n > 2) throw DomainError(fmt::format("moment order {} not in {{-1,0,1,2}}", n));
  if (s.freq.size() != s.s.size()) throw ValidationError("spectrum freq and s lengths differ");
  if (n == -1 && std::any_of(s.freq.begin(), s.freq.end(), [](double f) { return f == 0.0; })) {
    throw DomainError("m_-1 is undefined on a grid containing f = 0");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < s.freq.size(); ++i) {
    const double a = std::pow(s.freq[i], n) * s.s[i];
    const double b = std::pow(s.freq[i + 1], n) * s.s[i + 1];
    acc += 0.5 * (a + b) * (s.freq[i + 1] - s.freq[i]);
  }
  return acc;
}

double significant_height(const SpectralDensity& s) { return 4.0 * std::sqrt(moment(s, 0)); }

double energy_period(const SpectralDensity& s) {
  const double m0 = moment(s, 0);
  if (!(m0 > 0.0)) throw DomainError("energy period undefined for a zero spectrum");
  return moment(s, -1) / m0;
}

double peak_period(const SpectralDensity& s) {
  const auto it = std::max_element(s.s.begin(), s.s.end());
  if (it == s.s.end() || *it <= 0.0) throw DomainError("peak period undefined for a zero spectrum");
  return 1.0 / s.freq[static_cast<std::size_t>(it - s.s.begin())];
}

namespace {

// 53-bit uniform in [0,1) taken straight from the engine so the phase sequence does not
// depend on the standard library's distribution implementation.
double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

WaveRealization realize(const SpectralDensity& s, double duration, double dt, std::uint64_t seed,
                        const RealizeOptions& opts) {
  s.validate();
  if (!(dt > 0.0) || !(duration >= 0.0)) throw ValidationError("duration and dt must be positive");
  if (!(dt < 1.0 / (2.0 * s.freq.back()))) {
    throw ValidationError(fmt::format("dt = {} s aliases the grid maximum {} Hz", dt, s.freq.back()));
  }
  const double count = std::floor(duration / dt + 1e-9) + 1.0;
  if (count > static_cast<double>(opts.max_samples)) {
    throw SizeError(fmt::format("{} samples exceed the configured maximum {}", count,
                                opts.max_samples));
  }
  const auto n = static_cast<std::size_t>(count);

  WaveRealization out;
  out.dt = dt;
  out.seed = seed;
  out.elevation.assign(n, 0.0);
  out.slope.assign(n, 0.0);

  const auto w = trapezoid_weights(s.freq);
  std::mt19937_64 rng(seed);
  constexpr std::size_t kResync = 512;
  for (std::size_t i = 0; i < s.freq.size(); ++i) {
    // Phases are drawn for every component so the sequence is independent of zeros in S.
    const double phase = 2.0 * kPi * unit_uniform(rng);
    const double amp = std::sqrt(2.0 * s.s[i] * w[i]);
    if (amp == 0.0) continue;
    const double omega = 2.0 * kPi * s.freq[i];
    const double k_amp = deep_water_k(s.freq[i]) * amp;
    const std::complex<double> step = std::polar(1.0, omega * dt);
    std::complex<double> z;
    for (std::size_t j = 0; j < n; ++j) {
      if (j % kResync == 0) z = std::polar(1.0, omega * static_cast<double>(j) * dt + phase);
      out.elevation[j] += amp * z.real();
      out.slope[j] += k_amp * z.imag();
      z *= step;
    }
  }
  return out;
}

csv::Table spectrum_table(const SpectralDensity& s) {
  csv::Table t({"freq_hz", "s_m2_per_hz"});
  for (std::size_t i = 0; i < s.size(); ++i) t.add_row(std::vector<double>{s.freq[i], s.s[i]});
  return t;
}

csv::Table realization_table(const WaveRealization& r) {
  csv::Table t({"t_s", "eta_m", "slope_rad"});
  for (std::size_t i = 0; i < r.size(); ++i) {
    t.add_row(std::vector<double>{static_cast<double>(i) * r.dt, r.elevation[i], r.slope[i]});
  }
  return t;
}

}  // namespace srwec::sea
