#include "srwec/magnetics/machine.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <complex>

#include "srwec/error.hpp"

namespace srwec::magnetics {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kPhaseStep = 2.0 * kPi / 3.0;

// Integral over [a, b] of sin(k z + c), and of cos(k z + c).
double int_sin(double k, double c, double a, double b) {
  if (std::abs(k) < 1e-12) return (b - a) * std::sin(c);
  return (std::cos(k * a + c) - std::cos(k * b + c)) / k;
}
double int_cos(double k, double c, double a, double b) {
  if (std::abs(k) < 1e-12) return (b - a) * std::cos(c);
  return (std::sin(k * b + c) - std::sin(k * a + c)) / k;
}
// Integral of cos(al z + ph) sin(ga z + ps) and cos(al z + ph) cos(ga z + ps).
double int_cos_sin(double al, double ph, double ga, double ps, double a, double b) {
  return 0.5 * (int_sin(ga + al, ps + ph, a, b) + int_sin(ga - al, ps - ph, a, b));
}
double int_cos_cos(double al, double ph, double ga, double ps, double a, double b) {
  return 0.5 * (int_cos(ga - al, ps - ph, a, b) + int_cos(ga + al, ps + ph, a, b));
}

}  // namespace

std::vector<Coil> stator_coils(const GeneratorGeometry& geom) {
  static constexpr int kPhase[6] = {0, 2, 1, 0, 2, 1};
  static constexpr int kPolarity[6] = {1, -1, 1, -1, 1, -1};
  const double ls = geom.effective_stator_length();
  const double w = geom.coil_width();
  const int n = static_cast<int>(std::lround(ls / w));
  std::vector<Coil> coils;
  coils.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const double lo = -0.5 * ls + k * w;
    coils.push_back({lo, lo + w, kPhase[k % 6], kPolarity[k % 6]});
  }
  return coils;
}

Machine::Machine(FieldSolution field, WindingSpec winding)
    : field_(std::move(field)), winding_(winding) {
  winding_.validate();
  const auto& g = geometry();
  coils_ = stator_coils(g);
  if (max_full_overlap() < 0.5 * g.tau_p) {
    throw ValidationError("stator must exceed the translator by at least one pole pitch");
  }
  flux_.reserve(field_.harmonics().size());
  for (std::size_t k = 0; k < field_.harmonics().size(); ++k) {
    flux_.push_back(field_.radial_flux(k, g.ri, g.rs));
  }

  // Average force per ampere splits into cos and sin parts of the load angle.
  const int samples = 48;
  double ac = 0.0, as = 0.0;
  for (int j = 0; j < samples; ++j) {
    const double x = (j + 0.5) * g.tau_p / samples - 0.5 * g.tau_p;
    const double theta = kPi * x / g.tau_p;
    for (int p = 0; p < 3; ++p) {
      const double f = lorentz_phase(p, x);
      ac += std::cos(theta - p * kPhaseStep) * f;
      as += std::sin(theta - p * kPhaseStep) * f;
    }
  }
  q_angle_ = std::atan2(as, ac);
}

double Machine::max_full_overlap() const {
  const auto& g = geometry();
  return 0.5 * (g.effective_stator_length() - g.le);
}

double Machine::lambda_phase(int phase, double x) const {
  const auto& g = geometry();
  const auto& hs = field_.harmonics();
  const double tw = g.winding_t();
  const double w = g.coil_width();
  const double ls = g.effective_stator_length();
  const double lo = std::max(x - 0.5 * g.le, -0.5 * ls);
  const double hi = std::min(x + 0.5 * g.le, 0.5 * ls);
  if (hi <= lo) return 0.0;
  const double shift = 0.5 * g.le - x;  // u = z + shift, measured from the translator end
  const double n_turns = winding_.turns_per_coil;

  if (winding_.distribution == Distribution::Sinusoidal) {
    const double m1 = hs.front().m;
    const double zp = -0.5 * ls + 0.5 * w + phase * 2.0 * w;
    const double dens = 2.0 * n_turns / (kPi * w * tw);
    double sum = 0.0;
    for (std::size_t k = 0; k < hs.size(); ++k) {
      const double m = hs[k].m;
      const double integral = int_cos(m1, -m1 * zp, lo, hi) -
                              int_cos_cos(m1, -m1 * zp, m, m * shift, lo, hi);
      sum += flux_[k] * integral / m;
    }
    return -dens * sum;
  }

  double total = 0.0;
  for (const auto& c : coils_) {
    if (c.phase != phase) continue;
    const double a = std::max(c.z_lo, lo);
    const double b = std::min(c.z_hi, hi);
    if (b <= a) continue;
    const double ua = a + shift, ub = b + shift;
    double sum = 0.0;
    for (std::size_t k = 0; k < hs.size(); ++k) {
      const double m = hs[k].m;
      const double q = ((ub - ua) - (std::sin(m * ub) - std::sin(m * ua)) / m) / m;
      sum += flux_[k] * q;
    }
    total += c.polarity * sum;
  }
  return -n_turns / (w * tw) * total;
}

double Machine::lorentz_phase(int phase, double x) const {
  const auto& g = geometry();
  const auto& hs = field_.harmonics();
  const double tw = g.winding_t();
  const double w = g.coil_width();
  const double ls = g.effective_stator_length();
  const double lo = std::max(x - 0.5 * g.le, -0.5 * ls);
  const double hi = std::min(x + 0.5 * g.le, 0.5 * ls);
  if (hi <= lo) return 0.0;
  const double shift = 0.5 * g.le - x;
  const double n_turns = winding_.turns_per_coil;

  if (winding_.distribution == Distribution::Sinusoidal) {
    const double m1 = hs.front().m;
    const double zp = -0.5 * ls + 0.5 * w + phase * 2.0 * w;
    const double dens = 2.0 * n_turns / (kPi * w * tw);
    double sum = 0.0;
    for (std::size_t k = 0; k < hs.size(); ++k) {
      const double m = hs[k].m;
      sum += flux_[k] * int_cos_sin(m1, -m1 * zp, m, m * shift, lo, hi);
    }
    return dens * sum;
  }

  double total = 0.0;
  for (const auto& c : coils_) {
    if (c.phase != phase) continue;
    const double a = std::max(c.z_lo, lo);
    const double b = std::min(c.z_hi, hi);
    if (b <= a) continue;
    double sum = 0.0;
    for (std::size_t k = 0; k < hs.size(); ++k) {
      const double m = hs[k].m;
      sum += flux_[k] * (std::cos(m * (a + shift)) - std::cos(m * (b + shift))) / m;
    }
    total += c.polarity * sum;
  }
  return n_turns / (w * tw) * total;
}

Phases Machine::flux_linkage(double x) const {
  return {lambda_phase(0, x), lambda_phase(1, x), lambda_phase(2, x)};
}

Phases Machine::ke(double x) const {
  const double h = geometry().tau_p * 1e-3;
  Phases out{};
  for (int p = 0; p < 3; ++p) {
    const double d = (-lambda_phase(p, x + 2 * h) + 8 * lambda_phase(p, x + h) -
                      8 * lambda_phase(p, x - h) + lambda_phase(p, x - 2 * h)) /
                     (12 * h);
    out[static_cast<std::size_t>(p)] = -d;
  }
  return out;
}

double Machine::force(double x, const Phases& currents) const {
  double f = 0.0;
  for (int p = 0; p < 3; ++p) {
    const double i = currents[static_cast<std::size_t>(p)];
    if (i != 0.0) f += i * lorentz_phase(p, x);
  }
  return f;
}

Phases Machine::phase_currents(double x, double i_peak, double delta) const {
  const double theta = kPi * x / geometry().tau_p;
  return {i_peak * std::cos(theta - delta), i_peak * std::cos(theta - kPhaseStep - delta),
          i_peak * std::cos(theta - 2 * kPhaseStep - delta)};
}

ForceProfile force_profile(const Machine& machine, double i_peak, int samples) {
  if (samples < 6) throw ValidationError("force profile needs at least 6 samples");
  const double tau = machine.geometry().tau_p;
  ForceProfile out;
  out.i_peak = i_peak;
  double sum = 0.0;
  for (int j = 0; j < samples; ++j) {
    const double x = (j + 0.5) * tau / samples - 0.5 * tau;
    const double f = machine.force(x, machine.phase_currents(x, i_peak, machine.qaxis_angle()));
    out.x.push_back(x);
    out.force.push_back(f);
    sum += f;
  }
  out.mean = sum / samples;
  const auto [lo, hi] = std::minmax_element(out.force.begin(), out.force.end());
  const double scale = std::max(std::abs(*lo), std::abs(*hi));
  out.ripple = std::abs(out.mean) > 1e-9 * scale && scale > 0.0 ? (*hi - *lo) / std::abs(out.mean)
                                                                 : NAN;
  return out;
}

double thrust(const Machine& machine, double i_peak) {
  return force_profile(machine, i_peak).mean;
}

double thrust(const Machine& machine) {
  return thrust(machine, machine.winding().rated_peak_current());
}

double force_ripple(const Machine& machine) {
  const auto p = force_profile(machine, machine.winding().rated_peak_current());
  if (!std::isfinite(p.ripple)) throw NumericError("force ripple undefined: mean force is zero");
  return p.ripple;
}

double yoke_sensitivity(const GeneratorGeometry& geom, const MagnetSpec& magnet,
                        const WindingSpec& winding, int n_harmonics) {
  const Machine with(solve_field(geom, magnet, n_harmonics, OuterBoundary::Iron), winding);
  const Machine without(solve_field(geom, magnet, n_harmonics, OuterBoundary::Open), winding);
  const double ref = thrust(with);
  if (ref == 0.0) throw NumericError("yoke sensitivity undefined: zero thrust with yoke");
  return thrust(without) / ref;
}

double ke_amplitude(const Machine& machine, int samples) {
  const double tau = machine.geometry().tau_p;
  std::complex<double> acc = 0.0;
  for (int j = 0; j < samples; ++j) {
    const double x = -tau + 2.0 * tau * j / samples;
    acc += machine.ke(x)[0] * std::polar(1.0, -kPi * x / tau);
  }
  return 2.0 * std::abs(acc) / samples;
}

KeTable::KeTable(double x0, double dx, std::vector<Phases> values)
    : x0_(x0), dx_(dx), values_(std::move(values)) {
  if (!(dx > 0.0)) throw ValidationError("ke table spacing must be > 0");
}

Phases KeTable::operator()(double x) const {
  if (values_.size() < 2) return values_.empty() || x != x0_ ? Phases{} : values_.front();
  const double s = (x - x0_) / dx_;
  if (s < 0.0 || s > static_cast<double>(values_.size() - 1)) return {};
  const auto i = std::min(static_cast<std::size_t>(s), values_.size() - 2);
  const double t = s - static_cast<double>(i);
  Phases out{};
  for (std::size_t p = 0; p < 3; ++p) {
    out[p] = (1.0 - t) * values_[i][p] + t * values_[i + 1][p];
  }
  return out;
}

KeTable emf_profile(const Machine& machine, double x_lo, double x_hi, double dx) {
  if (!(x_hi > x_lo) || !(dx > 0.0)) throw ValidationError("emf profile needs x_hi > x_lo, dx > 0");
  const auto n = static_cast<std::size_t>(std::ceil((x_hi - x_lo) / dx - 1e-9)) + 1;
  std::vector<Phases> v;
  v.reserve(n);
  for (std::size_t j = 0; j < n; ++j) v.push_back(machine.ke(x_lo + static_cast<double>(j) * dx));
  return KeTable(x_lo, dx, std::move(v));
}

csv::Table ke_table(const KeTable& t) {
  csv::Table out({"x_m", "ke_a_vspm", "ke_b_vspm", "ke_c_vspm"});
  for (std::size_t j = 0; j < t.values().size(); ++j) {
    const auto& k = t.values()[j];
    out.add_row(std::vector<double>{t.x0() + static_cast<double>(j) * t.dx(), k[0], k[1], k[2]});
  }
  return out;
}

}  // namespace srwec::magnetics
