#pragma once

#include <string>
#include <variant>

#include "srwec/dynamics/body.hpp"

namespace srwec::pto {

/// Generator ratings applied to every strategy.
struct Limits {
  double f_max = 1000.0;  // N
  double p_max = 3000.0;  // W

  void validate() const;
};

/// Viscous damper: F = -c v.
struct Passive {
  double c = 500.0;  // N s/m
};

/// Spring plus damper: F = -k x - c v.
struct Reactive {
  double k = 0.0;    // N/m
  double c = 500.0;  // N s/m
};

/// Bang-bang generator: OFF (no force) or ON at the largest force the ratings allow.
struct Discrete {
  bool on = false;
  double v_stop = 0.02;  // m/s, ON -> OFF below this speed
  double safety = 1.5;   // braking-distance multiplier
};

struct PtoMode {
  std::variant<Passive, Reactive, Discrete> law;
  Limits limits;

  void validate() const;
  std::string kind() const;  // "passive" | "reactive" | "discrete"
  bool is_discrete() const { return std::holds_alternative<Discrete>(law); }
};

struct PtoOutput {
  double force = 0.0;  // N, applied to the translator
  PtoMode mode;        // carries the updated discrete state
};

/// Largest force magnitude allowed at speed v by both ratings.
double force_cap(const Limits& limits, double v);

/// Clamps F so that |F| <= f_max and |F v| <= p_max.
double saturate(double force, double v, const Limits& limits);

/// Worst-case braking-distance test against the end stop the mass is heading for.
bool braking_trigger(double x, double v, double theta, const dynamics::BodyParams& body,
                     const Discrete& discrete, const Limits& limits);

/// Advances the discrete state machine (if any) and returns the saturated force.
PtoOutput pto_force(const PtoMode& mode, double x, double v, double theta,
                    const dynamics::BodyParams& body);

/// Instantaneous generated power; positive when the force opposes the motion.
inline double net_power(double force, double v) { return -force * v; }

}  // namespace srwec::pto
