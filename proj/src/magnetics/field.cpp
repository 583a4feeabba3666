#include "srwec/magnetics/field.hpp"

#include <fmt/format.h>
#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>
#include <gsl/gsl_sf_bessel.h>

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <memory>
#include <mutex>

#include "srwec/error.hpp"

namespace srwec::magnetics {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kMaxCondition = 1e12;

void quiet_gsl() {
  static std::once_flag once;
  std::call_once(once, [] { gsl_set_error_handler_off(); });
}

// Exponentially scaled modified Bessel functions: I*(x) = e^-x I(x), K*(x) = e^x K(x).
double i0s(double x) { return gsl_sf_bessel_I0_scaled(x); }
double i1s(double x) { return gsl_sf_bessel_I1_scaled(x); }
double k0s(double x) { return gsl_sf_bessel_K0_scaled(x); }
double k1s(double x) { return gsl_sf_bessel_K1_scaled(x); }

double integrate(const std::function<double(double)>& fn, double a, double b) {
  if (b <= a) return 0.0;
  struct Deleter {
    void operator()(gsl_integration_workspace* w) const { gsl_integration_workspace_free(w); }
  };
  std::unique_ptr<gsl_integration_workspace, Deleter> ws(gsl_integration_workspace_alloc(256));
  gsl_function f;
  f.function = [](double x, void* p) { return (*static_cast<const std::function<double(double)>*>(p))(x); };
  f.params = const_cast<std::function<double(double)>*>(&fn);
  double result = 0.0, err = 0.0;
  gsl_integration_qag(&f, a, b, 0.0, 1e-11, 256, GSL_INTEG_GAUSS31, ws.get(), &result, &err);
  if (!std::isfinite(result)) throw NumericError("radial quadrature produced a non-finite value");
  return result;
}

// Pieces of the magnet-layer particular solution
//   a_p(r) = -K1(mr) int_{r0}^{r} I1(ms) s f ds - I1(mr) int_{r}^{rm} K1(ms) s f ds
// Both kernels decay away from s = r, so the combination stays bounded for any m.
double lower_part(double m, double r0, double r, double (*outer)(double)) {
  return integrate([&](double s) { return outer(m * r) * i1s(m * s) * std::exp(-m * (r - s)) * s; },
                   r0, r);
}
double upper_part(double m, double r, double rm, double (*outer)(double)) {
  return integrate([&](double s) { return outer(m * r) * k1s(m * s) * std::exp(-m * (s - r)) * s; },
                   r, rm);
}

double particular_a(double m, double f, double r0, double rm, double r) {
  return -f * (lower_part(m, r0, r, k1s) + upper_part(m, r, rm, i1s));
}
double particular_g(double m, double f, double r0, double rm, double r) {
  return f * m * (lower_part(m, r0, r, k0s) - upper_part(m, r, rm, i0s));
}

// I1(m r)/I1(m R) and K1(m r)/K1(m R) without overflow.
double i1_ratio(double m, double r, double big_r) {
  return i1s(m * r) / i1s(m * big_r) * std::exp(m * (r - big_r));
}
double k1_ratio(double m, double r, double big_r) {
  return k1s(m * r) / k1s(m * big_r) * std::exp(-m * (r - big_r));
}
// m I0(m r)/I1(m R) and -m K0(m r)/K1(m R): B_z profiles of the normalized bases.
double gi_ratio(double m, double r, double big_r) {
  return m * i0s(m * r) / i1s(m * big_r) * std::exp(m * (r - big_r));
}
double gk_ratio(double m, double r, double big_r) {
  return -m * k0s(m * r) / k1s(m * big_r) * std::exp(-m * (r - big_r));
}

}  // namespace

FieldSolution::FieldSolution(GeneratorGeometry geom, MagnetSpec magnet, OuterBoundary boundary,
                             std::vector<Harmonic> harmonics)
    : geom_(geom), magnet_(magnet), boundary_(boundary), harmonics_(std::move(harmonics)) {}

double FieldSolution::a_region2(const Harmonic& h, double r) const {
  const double ci = h.c2 == 0.0 ? 0.0 : h.c2 * i1_ratio(h.m, r, geom_.rs);
  return ci + h.d2 * k1_ratio(h.m, r, geom_.rm);
}

double FieldSolution::g_region2(const Harmonic& h, double r) const {
  const double ci = h.c2 == 0.0 ? 0.0 : h.c2 * gi_ratio(h.m, r, geom_.rs);
  return ci + h.d2 * gk_ratio(h.m, r, geom_.rm);
}

double FieldSolution::a_region1(const Harmonic& h, double r) const {
  return h.c1 * i1_ratio(h.m, r, geom_.rm) + h.d1 * k1_ratio(h.m, r, geom_.r0) +
         particular_a(h.m, h.source, geom_.r0, geom_.rm, r);
}

double FieldSolution::g_region1(const Harmonic& h, double r) const {
  return h.c1 * gi_ratio(h.m, r, geom_.rm) + h.d1 * gk_ratio(h.m, r, geom_.r0) +
         particular_g(h.m, h.source, geom_.r0, geom_.rm, r);
}

double FieldSolution::a(std::size_t k, double r) const {
  const auto& h = harmonics_.at(k);
  if (r < geom_.r0 || (boundary_ == OuterBoundary::Iron && r > geom_.rs)) {
    throw DomainError(fmt::format("radius {} m outside the solved field regions", r));
  }
  return r <= geom_.rm ? a_region1(h, r) : a_region2(h, r);
}

double FieldSolution::g(std::size_t k, double r) const {
  const auto& h = harmonics_.at(k);
  if (r < geom_.r0 || (boundary_ == OuterBoundary::Iron && r > geom_.rs)) {
    throw DomainError(fmt::format("radius {} m outside the solved field regions", r));
  }
  return r <= geom_.rm ? g_region1(h, r) : g_region2(h, r);
}

double FieldSolution::br(double r, double u) const {
  double sum = 0.0;
  for (std::size_t k = 0; k < harmonics_.size(); ++k) {
    sum += harmonics_[k].m * a(k, r) * std::sin(harmonics_[k].m * u);
  }
  return sum;
}

double FieldSolution::bz(double r, double u) const {
  double sum = 0.0;
  for (std::size_t k = 0; k < harmonics_.size(); ++k) {
    sum += g(k, r) * std::cos(harmonics_[k].m * u);
  }
  return sum;
}

double FieldSolution::radial_flux(std::size_t k, double r_a, double r_b) const {
  const auto& h = harmonics_.at(k);
  if (r_a < geom_.rm || (boundary_ == OuterBoundary::Iron && r_b > geom_.rs * (1 + 1e-12))) {
    throw DomainError("radial flux integral must stay inside the airgap/winding region");
  }
  return integrate([&](double r) { return h.m * a_region2(h, r) * 2.0 * kPi * r; }, r_a, r_b);
}

FieldSolution solve_field(const GeneratorGeometry& geom, const MagnetSpec& magnet, int n_harmonics,
                          OuterBoundary boundary) {
  quiet_gsl();
  if (auto v = consistency_violations(geom); !v.empty()) {
    throw ValidationError("infeasible geometry: " + v.front());
  }
  magnet.validate();
  if (n_harmonics < 1) throw ValidationError("need at least one harmonic");

  const double r0 = geom.r0, rm = geom.rm, rs = geom.rs;
  std::vector<Harmonic> out;
  out.reserve(static_cast<std::size_t>(n_harmonics));
  for (int j = 0; j < n_harmonics; ++j) {
    Harmonic h;
    h.order = 2 * j + 1;
    h.m = h.order * kPi / geom.tau_p;
    // Square-wave remanence +-Br over alternate poles.
    h.source = -h.m * 4.0 * magnet.br / (h.order * kPi);
    const double m = h.m;
    const double gp0 = particular_g(m, h.source, r0, rm, r0) / m;
    const double gpm = particular_g(m, h.source, r0, rm, rm) / m;
    const double apm = particular_a(m, h.source, r0, rm, rm);

    // Unknowns c1, d1, c2, d2. Rows: B_z = 0 on the back iron, continuity of a and H_z at the
    // magnet surface, B_z = 0 at the stator yoke. g rows are divided by m.
    const bool iron = boundary == OuterBoundary::Iron;
    const int n = iron ? 4 : 3;
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
    const int ic2 = iron ? 2 : -1;
    const int id2 = iron ? 3 : 2;
    A(0, 0) = gi_ratio(m, r0, rm) / m;
    A(0, 1) = gk_ratio(m, r0, r0) / m;
    b(0) = -gp0;
    A(1, 0) = 1.0;
    A(1, 1) = k1_ratio(m, rm, r0);
    if (iron) A(1, ic2) = -i1_ratio(m, rm, rs);
    A(1, id2) = -1.0;
    b(1) = -apm;
    A(2, 0) = gi_ratio(m, rm, rm) / m;
    A(2, 1) = gk_ratio(m, rm, r0) / m;
    if (iron) A(2, ic2) = -magnet.mu_r * gi_ratio(m, rm, rs) / m;
    A(2, id2) = -magnet.mu_r * gk_ratio(m, rm, rm) / m;
    b(2) = -gpm;
    if (iron) {
      A(3, ic2) = gi_ratio(m, rs, rs) / m;
      A(3, id2) = gk_ratio(m, rs, rm) / m;
    }
    for (int row = 0; row < n; ++row) {
      const double s = A.row(row).cwiseAbs().maxCoeff();
      if (s > 0.0) {
        A.row(row) /= s;
        b(row) /= s;
      }
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
    const auto& sv = svd.singularValues();
    h.condition = sv(n - 1) > 0.0 ? sv(0) / sv(n - 1) : INFINITY;
    if (!std::isfinite(h.condition) || h.condition > kMaxCondition) {
      throw ConditioningError(h.order, fmt::format("field system for harmonic {} is ill-conditioned "
                                                   "(condition {:.3g})",
                                                   h.order, h.condition));
    }
    const Eigen::VectorXd x = A.fullPivLu().solve(b);
    if (!x.allFinite()) {
      throw ConditioningError(h.order, fmt::format("field system for harmonic {} has no finite "
                                                   "solution",
                                                   h.order));
    }
    h.c1 = x(0);
    h.d1 = x(1);
    h.c2 = iron ? x(ic2) : 0.0;
    h.d2 = x(id2);
    out.push_back(h);
  }
  return FieldSolution(geom, magnet, boundary, std::move(out));
}

}  // namespace srwec::magnetics
