#include "srwec/magnetics/winding.hpp"

#include <fmt/format.h>

#include <cmath>

#include "srwec/error.hpp"

namespace srwec::magnetics {

void WindingSpec::validate() const {
  if (turns_per_coil < 0) throw ValidationError("winding turns must be >= 0");
  if (!(wire_area > 0.0)) throw ValidationError("winding wire area must be > 0");
  if (!(fill > 0.0 && fill <= 1.0)) throw ValidationError("winding fill must be in (0, 1]");
  if (!(j_rms >= 0.0)) throw ValidationError("winding current density must be >= 0");
}

double WindingSpec::rated_peak_current() const { return std::sqrt(2.0) * j_rms * wire_area; }

double awg_area(int gauge) {
  if (gauge < 0 || gauge > 40) throw DomainError(fmt::format("AWG {} outside 0..40", gauge));
  const double d = 0.127e-3 * std::pow(92.0, (36.0 - gauge) / 39.0);
  return 0.25 * 3.14159265358979323846 * d * d;
}

int turns_for(double width, double thickness, double fill, double wire_area) {
  if (!(width > 0.0) || !(thickness > 0.0) || !(fill > 0.0) || !(wire_area > 0.0) || fill > 1.0) {
    throw DomainError("turns_for needs positive width, thickness, wire area and fill in (0, 1]");
  }
  // Guard the floor against representation error at exact integers.
  return static_cast<int>(std::floor(width * thickness * fill / wire_area + 1e-9));
}

double thickness_for_turns(int turns, double width, double fill, double wire_area) {
  if (turns <= 0 || !(width > 0.0) || !(fill > 0.0) || !(wire_area > 0.0)) {
    throw DomainError("thickness_for_turns needs positive inputs");
  }
  return (turns + 0.5) * wire_area / (fill * width);
}

WindingSpec fullscale_winding() {
  WindingSpec w;
  w.turns_per_coil = 90;
  w.wire_area = awg_area(20);
  w.fill = 0.75;
  w.j_rms = 5.0e6;
  return w;
}

WindingSpec prototype_winding() {
  WindingSpec w = fullscale_winding();
  w.turns_per_coil = 70;
  return w;
}

}  // namespace srwec::magnetics
