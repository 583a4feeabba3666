#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "srwec/error.hpp"
#include "srwec/pto/pto.hpp"

using namespace srwec;
using namespace srwec::pto;

namespace {

const dynamics::BodyParams kBody{};

PtoMode discrete_mode(bool on, Limits lim = {}) { return {Discrete{on, 0.02, 1.5}, lim}; }

}  // namespace

TEST(PtoLaw, PassiveForce) {
  const auto out = pto_force({Passive{500.0}, {}}, 0.0, 1.0, 0.0, kBody);
  EXPECT_DOUBLE_EQ(out.force, -500.0);
}

TEST(PtoLaw, ReactiveForce) {
  const auto out = pto_force({Reactive{2000.0, 400.0}, {}}, 0.1, 0.5, 0.0, kBody);
  EXPECT_DOUBLE_EQ(out.force, -400.0);
}

TEST(PtoLaw, DiscreteOnUsesTheLargerOfTheTwoRatings) {
  const auto slow = pto_force(discrete_mode(true), 0.0, 0.5, 0.0, kBody);
  EXPECT_DOUBLE_EQ(slow.force, -1000.0);
  const auto fast = pto_force(discrete_mode(true), 0.0, -4.0, 0.0, kBody);
  EXPECT_DOUBLE_EQ(fast.force, 750.0);
  EXPECT_DOUBLE_EQ(net_power(fast.force, -4.0), 3000.0);
}

TEST(PtoLaw, ReactiveMotoringIsNegativePower) {
  const auto out = pto_force({Reactive{2000.0, 0.0}, {}}, 0.1, -0.5, 0.0, kBody);
  EXPECT_DOUBLE_EQ(out.force, -200.0);
  EXPECT_DOUBLE_EQ(net_power(out.force, -0.5), -100.0);
}

TEST(PtoLaw, PassiveForceScalesWithDamping) {
  const double v = 0.3;
  const double f1 = pto_force({Passive{400.0}, {}}, 0.0, v, 0.0, kBody).force;
  const double f2 = pto_force({Passive{800.0}, {}}, 0.0, v, 0.0, kBody).force;
  EXPECT_DOUBLE_EQ(f2, 2.0 * f1);
}

TEST(PtoLaw, SaturationClampsBothRatings) {
  const Limits lim{1000.0, 3000.0};
  EXPECT_DOUBLE_EQ(saturate(-5000.0, 1.0, lim), -1000.0);
  EXPECT_DOUBLE_EQ(saturate(-5000.0, 6.0, lim), -500.0);
  EXPECT_DOUBLE_EQ(saturate(200.0, -1.0, lim), 200.0);
  EXPECT_DOUBLE_EQ(force_cap(lim, 0.0), 1000.0);
  EXPECT_DOUBLE_EQ(force_cap(lim, 3.0), 1000.0);
}

TEST(BrakingTrigger, HandCheckedDistance) {
  // d = m v^2 / (2 F) = 30 * 4 / 2000 = 0.06 m.
  dynamics::BodyParams b;
  b.mass = 30.0;
  const Discrete d{false, 0.02, 1.0};
  const Limits lim{1000.0, 3000.0};
  const double h = b.half_stroke();
  EXPECT_TRUE(braking_trigger(h - 0.05, 2.0, 0.0, b, d, lim));
  EXPECT_FALSE(braking_trigger(h - 0.07, 2.0, 0.0, b, d, lim));
  EXPECT_TRUE(braking_trigger(-h + 0.05, -2.0, 0.0, b, d, lim));
}

TEST(BrakingTrigger, AtRestNeverFires) {
  dynamics::BodyParams b;
  EXPECT_FALSE(braking_trigger(b.half_stroke() - 0.01, 0.0, 0.3, b, {}, {}));
}

TEST(BrakingTrigger, MovingAwayNeverFires) {
  dynamics::BodyParams b;
  for (double v : {0.1, 1.0, 10.0, 100.0}) {
    EXPECT_FALSE(braking_trigger(-b.half_stroke() + 0.01, v, 0.0, b, {}, {}))
        << v;
  }
}

TEST(BrakingTrigger, GravityFloorKeepsTheDenominatorPositive) {
  // m g |sin| far above f_max: denominator floors at 0.1 f_max, so d = 1.5 * 28 * 0.01 / 200.
  dynamics::BodyParams b;
  const Limits lim{100.0, 3000.0};
  const double d = 1.5 * b.mass * 0.01 / (2.0 * 0.1 * lim.f_max);
  EXPECT_TRUE(braking_trigger(b.half_stroke() - 0.99 * d, 0.1, 1.2, b, {}, lim));
  EXPECT_FALSE(braking_trigger(b.half_stroke() - 1.01 * d, 0.1, 1.2, b, {}, lim));
}

TEST(DiscreteMachine, TurnsOnWhenSlidingUphill) {
  // Positive tilt pulls toward +x; moving -x is uphill.
  const auto out = pto_force(discrete_mode(false), 0.0, -0.5, 0.2, kBody);
  EXPECT_TRUE(std::get<Discrete>(out.mode.law).on);
  EXPECT_GT(out.force, 0.0);
  const auto down = pto_force(discrete_mode(false), 0.0, 0.5, 0.2, kBody);
  EXPECT_FALSE(std::get<Discrete>(down.mode.law).on);
  EXPECT_EQ(down.force, 0.0);
}

TEST(DiscreteMachine, TurnsOffBelowStopSpeed) {
  const auto out = pto_force(discrete_mode(true), 0.0, 0.01, 0.0, kBody);
  EXPECT_FALSE(std::get<Discrete>(out.mode.law).on);
  EXPECT_EQ(out.force, 0.0);
}

TEST(DiscreteMachine, NearTheStopTurnsOn) {
  const auto out = pto_force(discrete_mode(false), kBody.half_stroke() - 0.01, 1.0, 0.0, kBody);
  EXPECT_TRUE(std::get<Discrete>(out.mode.law).on);
  EXPECT_DOUBLE_EQ(out.force, -1000.0);
}

TEST(PtoValidation, RejectsBadParameters) {
  EXPECT_THROW((PtoMode{Passive{-1.0}, {}}.validate()), ValidationError);
  EXPECT_THROW((PtoMode{Reactive{-1.0, 0.0}, {}}.validate()), ValidationError);
  EXPECT_THROW((PtoMode{Discrete{false, 0.0, 1.5}, {}}.validate()), ValidationError);
  EXPECT_THROW((PtoMode{Discrete{false, 0.02, 0.9}, {}}.validate()), ValidationError);
  EXPECT_THROW((PtoMode{Passive{1.0}, {0.0, 3000.0}}.validate()), ValidationError);
  EXPECT_THROW((PtoMode{Passive{1.0}, {1000.0, -1.0}}.validate()), ValidationError);
  EXPECT_EQ((PtoMode{Reactive{}, {}}.kind()), "reactive");
}

TEST(PtoProperties, SaturationHoldsOverAMillionFuzzedStates) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> x(-0.6, 0.6), v(-8.0, 8.0), th(-0.6, 0.6),
      coef(0.0, 2e4), fmax(1.0, 3000.0), pmax(1.0, 8000.0);
  std::uniform_int_distribution<int> kind(0, 2), flag(0, 1);
  long violations = 0, opposing = 0, passive_neg = 0, spurious_on = 0, force_when_off = 0;
  for (int i = 0; i < 1'000'000; ++i) {
    const Limits lim{fmax(rng), pmax(rng)};
    PtoMode mode{Passive{coef(rng)}, lim};
    const int k = kind(rng);
    if (k == 1) mode.law = Reactive{coef(rng), coef(rng)};
    if (k == 2) mode.law = Discrete{flag(rng) == 1, 0.02, 1.5};
    const double xi = x(rng), vi = (i % 10 == 0) ? 0.01 * v(rng) : v(rng), ti = th(rng);
    const auto out = pto_force(mode, xi, vi, ti, kBody);
    if (std::abs(out.force) > lim.f_max + 1e-9 || std::abs(out.force * vi) > lim.p_max + 1e-9) {
      ++violations;
    }
    if (k == 0 && net_power(out.force, vi) < 0.0) ++passive_neg;
    if (k == 2) {
      const auto& d = std::get<Discrete>(out.mode.law);
      if (d.on && out.force * vi > 0.0) ++opposing;
      const bool was_on = std::get<Discrete>(mode.law).on;
      if (!was_on && d.on && std::abs(vi) < d.v_stop) ++spurious_on;
      if (!d.on && out.force != 0.0) ++force_when_off;
    }
  }
  EXPECT_EQ(violations, 0);
  EXPECT_EQ(opposing, 0);
  EXPECT_EQ(passive_neg, 0);
  EXPECT_EQ(spurious_on, 0);
  EXPECT_EQ(force_when_off, 0);
}
