#pragma once

#include "srwec/dynamics/body.hpp"

namespace srwec::dynamics {

/// Sliding-mass kinematics relative to the stator mid-stroke.
struct TranslatorState {
  double x = 0.0;  // m
  double v = 0.0;  // m/s

  bool operator==(const TranslatorState&) const = default;
};

/// Velocity scale of the tanh-smoothed Coulomb friction.
inline constexpr double kFrictionVelocityScale = 1e-3;  // m/s

/// Friction force magnitude signed with v (opposes the motion when subtracted).
double friction_force(double v, const BodyParams& body);

/// Penalty reaction of the stops, signed so that the force on the mass is -endstop_force.
/// Never pulls the mass back into a stop.
double endstop_force(double x, double v, const BodyParams& body);

/// Stored energy of the penalty spring.
double endstop_energy(double x, const BodyParams& body);

/// Acceleration m dv/dt = m g sin(theta) + f_pto - friction - endstop.
/// `f_pto` is the force applied to the translator (negative when braking +v motion).
double acceleration(double x, double v, double theta, double f_pto, const BodyParams& body);

/// One RK4 step with theta and f_pto held over the step.
TranslatorState step_translator(const TranslatorState& s, double theta, double f_pto,
                                const BodyParams& body, double dt);

}  // namespace srwec::dynamics
