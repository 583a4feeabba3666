#include "srwec/magnetics/geometry.hpp"

#include <fmt/format.h>

#include <cmath>
#include <limits>

#include "srwec/error.hpp"
#include "srwec/magnetics/winding.hpp"

namespace srwec::magnetics {

namespace {
constexpr double kTol = 1e-9;  // m
constexpr double kPi = 3.14159265358979323846;
}  // namespace

GeneratorGeometry GeneratorGeometry::from_stack(double shaft_r, double backiron_t, double magnet_t,
                                                double airgap, double winding_t, double yoke_t,
                                                double le, int poles, double stator_length) {
  GeneratorGeometry g;
  g.shaft_r = shaft_r;
  g.backiron_t = backiron_t;
  g.r0 = shaft_r + backiron_t;
  g.rm = g.r0 + magnet_t;
  g.g = airgap;
  g.ri = g.rm + airgap;
  g.rs = g.ri + winding_t;
  g.yoke_t = yoke_t;
  g.re = g.rs + yoke_t;
  g.le = le;
  g.poles = poles;
  g.tau_p = poles > 0 ? le / poles : 0.0;
  g.stator_length = stator_length;
  return g;
}

double GeneratorGeometry::effective_stator_length() const {
  return stator_length > 0.0 ? stator_length : le + 4.0 * tau_p;
}

double GeneratorGeometry::magnet_volume() const { return kPi * (rm * rm - r0 * r0) * le; }

DesignConstraints DesignConstraints::none() {
  return {0.0, std::numeric_limits<double>::infinity()};
}

std::vector<std::string> consistency_violations(const GeneratorGeometry& g) {
  std::vector<std::string> v;
  if (!(g.r0 > 0.0 && g.r0 < g.rm && g.rm < g.ri && g.ri < g.rs && g.rs < g.re)) {
    v.emplace_back("radial ordering r0 < rm < ri < rs < re violated");
  }
  if (std::abs(g.ri - (g.rm + g.g)) > kTol) v.emplace_back("coil inner radius differs from rm + g");
  if (std::abs(g.re - (g.rs + g.yoke_t)) > kTol) {
    v.emplace_back("stator outer radius differs from rs + yoke");
  }
  if (g.shaft_r < 0.0 || g.shaft_r - (g.r0 - g.backiron_t) > kTol) {
    v.emplace_back("shaft radius exceeds r0 minus back-iron thickness");
  }
  if (g.poles < 2 || g.poles % 2 != 0) v.emplace_back("pole count must be even and >= 2");
  if (!(g.tau_p > 0.0) || std::abs(g.le - g.poles * g.tau_p) > kTol) {
    v.emplace_back("translator length differs from poles * tau_p");
  }
  if (g.stator_length != 0.0) {
    const double periods = g.stator_length / (2.0 * g.tau_p);
    if (g.stator_length < g.le || std::abs(periods - std::round(periods)) > 1e-6) {
      v.emplace_back("stator length must cover the translator in whole pole pairs");
    }
  }
  return v;
}

std::vector<std::string> validate_geometry(const GeneratorGeometry& g, const DesignConstraints& c) {
  auto v = consistency_violations(g);
  if (g.shaft_r + kTol < c.min_shaft_r) {
    v.push_back(fmt::format("shaft radius below {:g} mm", c.min_shaft_r * 1e3));
  }
  if (g.re > c.max_outer_r + kTol) {
    v.push_back(fmt::format("outer radius exceeds {:g} mm", c.max_outer_r * 1e3));
  }
  return v;
}

GeneratorGeometry fullscale_geometry() {
  return GeneratorGeometry::from_stack(0.050, 0.025, 0.004, 0.001, 0.005, 0.005, 0.300, 8);
}

GeneratorGeometry prototype_geometry() {
  const double tau_p = 0.01905;
  const double winding_t = thickness_for_turns(70, tau_p / 3.0, 0.75, awg_area(20));
  GeneratorGeometry g;
  g.shaft_r = 0.0085;  // r0 less the 23.25 mm back iron
  g.r0 = 0.03175;
  g.backiron_t = g.r0 - g.shaft_r;
  g.rm = 0.0381;
  g.g = 0.003;
  g.ri = 0.0411;
  g.rs = g.ri + winding_t;
  g.re = 0.0511;
  g.yoke_t = g.re - g.rs;
  g.poles = 12;
  g.tau_p = tau_p;
  g.le = 12 * tau_p;
  g.stator_length = 48 * tau_p;  // 914.4 mm
  return g;
}

MagnetSpec MagnetSpec::grade(std::string_view name) {
  if (name == "N50") return {1.40, 1.05};
  if (name == "N42") return {1.30, 1.05};
  throw ValidationError(fmt::format("unknown magnet grade '{}'", name));
}

void MagnetSpec::validate() const {
  if (!(br >= 0.0 && br <= 1.5)) throw ValidationError("magnet br must be in [0, 1.5] T");
  if (!(mu_r >= 1.0 && mu_r <= 1.2)) throw ValidationError("magnet mu_r must be in [1.0, 1.2]");
}

}  // namespace srwec::magnetics
