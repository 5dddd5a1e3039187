#include "g2inst/instantons.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <string>

namespace g2inst::instantons {

namespace {

void require_positive(const MetricProfile& m) {
  for (int i = 0; i < 3; ++i)
    if (m.A[i] == 0.0 || m.B[i] == 0.0) throw std::domain_error("instanton ODE: zero denominator");
}

Lie half_bracket(const Lie& a, const Lie& b) { return 0.5 * calculus::bracket(a, b); }

}  // namespace

StateFull embed(const StateSU23& s) { return {s.x, s.x, s.y, s.y}; }

StateFull rhs_full(const StateFull& s, const MetricProfile& m) {
  require_positive(m);
  const double A1 = m.A[0], A2 = m.A[1], B1 = m.B[0], B2 = m.B[1];
  const double K = (A2 * A2 + B1 * B1 + B2 * B2) / (A2 * B1 * B2);
  StateFull d;
  d.f_plus = -0.5 * (A1 / (B2 * B2) - A1 / (A2 * A2)) * s.f_plus + s.g_minus * s.g_minus - s.g_plus * s.g_plus;
  d.g_plus = -0.5 * (K - (A1 * A1 + 2 * A2 * A2) / (A1 * A2 * A2)) * s.g_plus + s.f_minus * s.g_minus -
             s.f_plus * s.g_plus;
  d.f_minus = -K * s.f_minus + 2 * s.g_minus * s.g_plus;
  d.g_minus = -0.5 * (K + (A1 * A1 + 2 * B2 * B2) / (A1 * B2 * B2)) * s.g_minus + s.g_minus * s.f_plus +
              s.g_plus * s.f_minus;
  return d;
}

GeneralDerivative rhs_general(const GeneralState& s, const MetricProfile& m) {
  require_positive(m);
  GeneralDerivative out;
  out.constraint = Lie::su2(0, 0, 0);
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3, k = (i + 2) % 3;
    const double Ai = m.A[i], Aj = m.A[j], Ak = m.A[k], Bi = m.B[i], Bj = m.B[j], Bk = m.B[k];
    const double kp = m.dA[i] / Ai + Ai / (Bj * Bk) - Ai / (Aj * Ak);
    const double km = m.dB[i] / Bi + Bi / (Bj * Ak) + Bi / (Aj * Bk);
    out.d.c_plus[i] = (-kp) * s.c_plus[i] + half_bracket(s.c_minus[j], s.c_minus[k]) -
                      half_bracket(s.c_plus[j], s.c_plus[k]);
    out.d.c_minus[i] = (-km) * s.c_minus[i] + half_bracket(s.c_minus[j], s.c_plus[k]) +
                       half_bracket(s.c_plus[j], s.c_minus[k]);
    out.constraint = out.constraint + calculus::bracket(s.c_plus[i], s.c_minus[i]);
  }
  return out;
}

GeneralState general_from_full(const StateFull& s) {
  GeneralState g;
  g.c_plus = {s.f_plus * Lie::T(1), s.g_plus * Lie::T(2), s.g_plus * Lie::T(3)};
  g.c_minus = {s.f_minus * Lie::T(1), s.g_minus * Lie::T(2), s.g_minus * Lie::T(3)};
  return g;
}

StateSU23 rhs_su23(const StateSU23& s, double A1, double B1, double dA1) {
  if (A1 == 0.0) throw std::domain_error("SU(2)^3 system is singular at A1 = 0; use a series seed");
  (void)B1;
  return {(dA1 / A1) * s.x + s.y * s.y - s.x * s.x, ((2 * dA1 - 3) / A1) * s.y + 2 * s.x * s.y};
}

StateFG rhs_fg(const StateFG& s, double H) { return {-s.G * s.G, (H - s.F) * s.G, std::nullopt}; }

double h_of_r(double r) {
  if (!(r >= 2.25)) throw std::domain_error("H requires r >= 9/4");
  const double q = r - 0.45;
  return 1.0 - (5.0 * q * q - 2.7) / (2.0 * r * (r - 0.75) * (r + 2.25));
}

StateFG to_fg(const StateFull& s, double A1) {
  if (A1 == 0.0) throw std::domain_error("F, G undefined at A1 = 0");
  return {s.f_plus / A1, s.g_plus / A1, std::nullopt};
}

AbelianState abelian_rates(const MetricProfile& m) {
  require_positive(m);
  AbelianState k;
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3, l = (i + 2) % 3;
    k.plus[i] = m.A[i] / (m.B[j] * m.B[l]) - m.A[i] / (m.A[j] * m.A[l]);
    k.minus[i] = m.B[i] / (m.B[j] * m.A[l]) + m.B[i] / (m.A[j] * m.B[l]);
  }
  return k;
}

AbelianState abelian_solution(const metrics::CoordinateMap& map, double t0, const AbelianState& init, double t) {
  if (!(t0 > 0.0) || !(t > 0.0)) throw std::domain_error("abelian solution needs t, t0 > 0");
  const auto model = map.model();
  const double w0 = std::sqrt(map.offset_of_t(t0));
  const double w1 = std::sqrt(map.offset_of_t(t));
  AbelianState out;
  for (int comp = 0; comp < 6; ++comp) {
    const bool plus = comp < 3;
    const int i = comp % 3;
    const double a0 = plus ? init.plus[i] : init.minus[i];
    if (a0 == 0.0) continue;
    auto integrand = [&](double w) {
      const auto k = abelian_rates(metrics::closed_profile_offset(model, w * w));
      return (plus ? k.plus[i] : k.minus[i]) * metrics::dt_dw(model, w);
    };
    const double I = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, w0, w1, 10, 1e-13);
    (plus ? out.plus[i] : out.minus[i]) = a0 * std::exp(-I);
  }
  return out;
}

double clarke_pole(double x1) {
  if (!(x1 < 0.0)) throw std::domain_error("the Clarke solution has no pole for x1 >= 0");
  return std::sqrt(1.0 - 3.0 / x1);
}

ClosedPoint clarke_closed_form_offset(double x1, double u) {
  if (!(u >= 0.0)) throw std::domain_error("Clarke solution requires r >= 1");
  const double r = 1.0 + u;
  const double D = 3.0 + x1 * u * (2.0 + u);
  if (x1 < 0.0 && D <= 0.0) {
    const double rp = clarke_pole(x1);
    throw PoleError("Clarke solution with x1 = " + std::to_string(x1) + " has a pole at r = " + std::to_string(rp),
                    rp);
  }
  const auto p = metrics::bs_profile_offset(u);
  const double A = p.A[0], dA = p.dA[0];
  const double drdt = p.dB[0] * std::sqrt(3.0);
  ClosedPoint out;
  out.state = {6.0 * x1 * A / D, 0.0};
  out.dt = {6.0 * x1 * (dA * D - 2.0 * x1 * r * drdt * A) / (D * D), 0.0};
  return out;
}

ClosedPoint clarke_closed_form(double x1, double r) {
  if (!(r >= 1.0)) throw std::domain_error("Clarke solution requires r >= 1");
  return clarke_closed_form_offset(x1, r - 1.0);
}

ClosedPoint alim_closed_form_offset(double u) {
  if (!(u > 0.0)) throw std::domain_error("A^lim closed form requires r > 1");
  const double r = 1.0 + u;
  const double D = u * (2.0 + u);
  const auto p = metrics::bs_profile_offset(u);
  const double A = p.A[0], dA = p.dA[0];
  const double drdt = p.dB[0] * std::sqrt(3.0);
  ClosedPoint out;
  out.state = {6.0 * A / D, 0.0};
  out.dt = {6.0 * (dA * D - 2.0 * r * drdt * A) / (D * D), 0.0};
  return out;
}

ClosedPoint alim_closed_form(double r) {
  if (!(r > 1.0)) throw std::domain_error("A^lim closed form requires r > 1");
  return alim_closed_form_offset(r - 1.0);
}

double alim_A1x_offset(double u) {
  if (!(u >= 0.0)) throw std::domain_error("A^lim requires r >= 1");
  const double r = 1.0 + u;
  return (2.0 / 3.0) * (3.0 + 3.0 * u + u * u) / (r * (2.0 + u));
}

ConnectionData connection_data(const StateFull& s, const StateFull& ds, const MetricProfile& m) {
  ConnectionData c;
  const double vals_p[3] = {s.f_plus, s.g_plus, s.g_plus};
  const double vals_m[3] = {s.f_minus, s.g_minus, s.g_minus};
  const double d_p[3] = {ds.f_plus, ds.g_plus, ds.g_plus};
  const double d_m[3] = {ds.f_minus, ds.g_minus, ds.g_minus};
  for (int i = 0; i < 3; ++i) {
    const auto Ti = Lie::T(i + 1);
    c.a_plus[i] = (m.A[i] * vals_p[i]) * Ti;
    c.a_minus[i] = (m.B[i] * vals_m[i]) * Ti;
    c.adot_plus[i] = (m.dA[i] * vals_p[i] + m.A[i] * d_p[i]) * Ti;
    c.adot_minus[i] = (m.dB[i] * vals_m[i] + m.B[i] * d_m[i]) * Ti;
  }
  return c;
}

double unreduced_residual(const ConnectionData& c, const MetricProfile& m) {
  const auto Fa = calculus::curvature(c.a_plus, c.a_minus);
  const auto adot = calculus::connection_form(c.adot_plus, c.adot_minus);
  return calculus::instanton_residual(Fa, adot, m.frame());
}

double unreduced_residual(const StateFull& s, const StateFull& ds, const MetricProfile& m) {
  return unreduced_residual(connection_data(s, ds, m), m);
}

}  // namespace g2inst::instantons
