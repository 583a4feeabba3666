#include "srwec/dynamics/translator.hpp"

#include <algorithm>
#include <cmath>

#include "srwec/error.hpp"
#include "srwec/sea/spectra.hpp"

namespace srwec::dynamics {

void BodyParams::validate() const {
  if (!(mass > 0.0)) throw ValidationError("body mass must be > 0");
  if (!(stroke > 0.0)) throw ValidationError("body stroke must be > 0");
  if (!(coulomb_friction >= 0.0)) throw ValidationError("body coulomb_friction must be >= 0");
  if (!(endstop_stiffness > 0.0)) throw ValidationError("body endstop_stiffness must be > 0");
  if (!(endstop_damping >= 0.0)) throw ValidationError("body endstop_damping must be >= 0");
}

double friction_force(double v, const BodyParams& body) {
  if (body.coulomb_friction == 0.0) return 0.0;
  return body.coulomb_friction * std::tanh(v / kFrictionVelocityScale);
}

double endstop_force(double x, double v, const BodyParams& body) {
  const double h = body.half_stroke();
  if (x > h) return std::max(0.0, body.endstop_stiffness * (x - h) + body.endstop_damping * v);
  if (x < -h) return std::min(0.0, body.endstop_stiffness * (x + h) + body.endstop_damping * v);
  return 0.0;
}

double endstop_energy(double x, const BodyParams& body) {
  const double h = body.half_stroke();
  const double pen = x > h ? x - h : (x < -h ? -h - x : 0.0);
  return 0.5 * body.endstop_stiffness * pen * pen;
}

double acceleration(double x, double v, double theta, double f_pto, const BodyParams& body) {
  return sea::kGravity * std::sin(theta) +
         (f_pto - friction_force(v, body) - endstop_force(x, v, body)) / body.mass;
}

TranslatorState step_translator(const TranslatorState& s, double theta, double f_pto,
                                const BodyParams& body, double dt) {
  if (!(dt > 0.0)) throw ValidationError("translator dt must be > 0");
  if (!std::isfinite(s.x) || !std::isfinite(s.v) || !std::isfinite(theta) || !std::isfinite(f_pto)) {
    throw NumericError("non-finite translator input");
  }
  const double a1 = acceleration(s.x, s.v, theta, f_pto, body);
  const double x2 = s.x + 0.5 * dt * s.v, v2 = s.v + 0.5 * dt * a1;
  const double a2 = acceleration(x2, v2, theta, f_pto, body);
  const double x3 = s.x + 0.5 * dt * v2, v3 = s.v + 0.5 * dt * a2;
  const double a3 = acceleration(x3, v3, theta, f_pto, body);
  const double x4 = s.x + dt * v3, v4 = s.v + dt * a3;
  const double a4 = acceleration(x4, v4, theta, f_pto, body);
  return {s.x + dt / 6.0 * (s.v + 2.0 * v2 + 2.0 * v3 + v4),
          s.v + dt / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4)};
}

}  // namespace srwec::dynamics
