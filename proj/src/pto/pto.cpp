#include "srwec/pto/pto.hpp"

#include <algorithm>
#include <cmath>

#include "srwec/error.hpp"
#include "srwec/sea/spectra.hpp"

namespace srwec::pto {

void Limits::validate() const {
  if (!(f_max > 0.0)) throw ValidationError("pto f_max must be > 0");
  if (!(p_max > 0.0)) throw ValidationError("pto p_max must be > 0");
}

void PtoMode::validate() const {
  limits.validate();
  std::visit(
      [](const auto& law) {
        using T = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<T, Passive>) {
          if (!(law.c >= 0.0)) throw ValidationError("pto c must be >= 0");
        } else if constexpr (std::is_same_v<T, Reactive>) {
          if (!(law.c >= 0.0)) throw ValidationError("pto c must be >= 0");
          if (!(law.k >= 0.0)) throw ValidationError("pto k must be >= 0");
        } else {
          if (!(law.v_stop > 0.0)) throw ValidationError("pto v_stop must be > 0");
          if (!(law.safety >= 1.0)) throw ValidationError("pto safety must be >= 1");
        }
      },
      law);
}

std::string PtoMode::kind() const {
  switch (law.index()) {
    case 0: return "passive";
    case 1: return "reactive";
    default: return "discrete";
  }
}

double force_cap(const Limits& limits, double v) {
  const double speed = std::abs(v);
  if (speed * limits.f_max <= limits.p_max) return limits.f_max;
  return limits.p_max / speed;
}

double saturate(double force, double v, const Limits& limits) {
  const double cap = force_cap(limits, v);
  return std::clamp(force, -cap, cap);
}

bool braking_trigger(double x, double v, double theta, const dynamics::BodyParams& body,
                     const Discrete& discrete, const Limits& limits) {
  // Only the nearer stop is watched; heading for the far one is left to later steps.
  if (v == 0.0 || (x >= 0.0) != (v > 0.0)) return false;
  const double remaining = v > 0.0 ? body.half_stroke() - x : x + body.half_stroke();
  // Gravity is taken as assisting the motion.
  const double decel_force = std::max(limits.f_max - body.mass * sea::kGravity * std::abs(std::sin(theta)),
                                      0.1 * limits.f_max);
  const double distance = discrete.safety * body.mass * v * v / (2.0 * decel_force);
  return remaining <= distance;
}

PtoOutput pto_force(const PtoMode& mode, double x, double v, double theta,
                    const dynamics::BodyParams& body) {
  PtoOutput out{0.0, mode};
  const Limits& lim = mode.limits;
  if (const auto* p = std::get_if<Passive>(&mode.law)) {
    out.force = saturate(-p->c * v, v, lim);
  } else if (const auto* r = std::get_if<Reactive>(&mode.law)) {
    out.force = saturate(-r->k * x - r->c * v, v, lim);
  } else {
    auto d = std::get<Discrete>(mode.law);
    const double speed = std::abs(v);
    if (!d.on) {
      const bool uphill = v * std::sin(theta) < 0.0;
      if (speed > d.v_stop && (uphill || braking_trigger(x, v, theta, body, d, lim))) d.on = true;
    } else if (speed < d.v_stop) {
      d.on = false;
    }
    if (d.on && v != 0.0) out.force = -std::copysign(force_cap(lim, v), v);
    out.mode.law = d;
  }
  return out;
}

}  // namespace srwec::pto
