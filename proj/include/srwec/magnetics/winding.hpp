#pragma once

namespace srwec::magnetics {

enum class Distribution {
  Coils,       // rectangular coils of width tau_p/3, one per phase per pole
  Sinusoidal,  // ideal sinusoidal conductor density with the coil layout's fundamental
};

struct WindingSpec {
  int turns_per_coil = 90;
  double wire_area = 0.0;   // m^2, bare copper
  double fill = 0.75;
  double j_rms = 5.0e6;     // A/m^2 in the wire at rated force
  Distribution distribution = Distribution::Coils;

  void validate() const;
  /// Peak sinusoidal phase current at the rated wire current density.
  double rated_peak_current() const;
};

/// Bare copper cross-section of an AWG gauge, m^2.
double awg_area(int gauge);

/// floor(width * thickness * fill / wire_area). Throws DomainError on nonpositive inputs.
int turns_for(double width, double thickness, double fill, double wire_area);

/// Winding thickness that yields `turns` with half a turn of margin on either side.
double thickness_for_turns(int turns, double width, double fill, double wire_area);

WindingSpec fullscale_winding();
WindingSpec prototype_winding();

}  // namespace srwec::magnetics
