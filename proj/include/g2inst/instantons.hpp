#pragma once

// Reduced G2-instanton ODE systems for invariant SU(2) connections on the
// cohomogeneity-one metrics, and their closed-form solutions.
//
// Connection ansatz (SU(2)^2 x U(1) symmetry):
//   A = A1 f+ T1 eta1+ + A2 g+ (T2 eta2+ + T3 eta3+) + B1 f- T1 eta1- + B2 g- (T2 eta2- + T3 eta3-)
// SU(2)^3 ansatz on BS: f+ = g+ = x, f- = g- = y.
// Transformed variables on P1: F = f+/A1, G = g+/A1 with ds/dt = A1.

#include "g2inst/calculus.hpp"
#include "g2inst/metrics.hpp"

#include <array>
#include <optional>
#include <stdexcept>

namespace g2inst::instantons {

using Lie = calculus::LieValue<double>;
using metrics::MetricProfile;

struct StateFull {
  double f_plus = 0.0, g_plus = 0.0, f_minus = 0.0, g_minus = 0.0;
};

struct StateSU23 {
  double x = 0.0, y = 0.0;
};

struct StateFG {
  double F = 0.0, G = 0.0;
  std::optional<double> c_first_integral;  // F^2 - G^2 on BS
};

struct AbelianState {
  std::array<double, 3> plus{}, minus{};
};

struct GeneralState {
  std::array<Lie, 3> c_plus{Lie::su2(0, 0, 0), Lie::su2(0, 0, 0), Lie::su2(0, 0, 0)};
  std::array<Lie, 3> c_minus{Lie::su2(0, 0, 0), Lie::su2(0, 0, 0), Lie::su2(0, 0, 0)};
};

StateFull embed(const StateSU23& s);

/// The four SU(2)^2 x U(1) instanton ODEs.
StateFull rhs_full(const StateFull& s, const MetricProfile& m);

struct GeneralDerivative {
  GeneralState d;
  Lie constraint;  // sum_i [c_i^+, c_i^-]
};

/// Bracket ODEs for c_i^+ = a_i^+/A_i, c_i^- = a_i^-/B_i on any six-function metric with derivatives.
GeneralDerivative rhs_general(const GeneralState& s, const MetricProfile& m);

/// U(1)-ansatz embedding: c1 = f T1, c2 = g T2, c3 = g T3.
GeneralState general_from_full(const StateFull& s);

/// SU(2)^3 system on BS.
StateSU23 rhs_su23(const StateSU23& s, double A1, double B1, double dA1);

/// F' = -G^2, G' = (H - F) G in the s-variable (H = 0 on BS).
StateFG rhs_fg(const StateFG& s, double H);

/// H(r) for the BGGG metric, r >= 9/4.
double h_of_r(double r);

/// (F, G) from the full state and the metric value A1.
StateFG to_fg(const StateFull& s, double A1);

/// Abelian solutions by quadrature of the exponent integrals on a closed-form model.
AbelianState abelian_solution(const metrics::CoordinateMap& map, double t0, const AbelianState& init, double t);

/// Growth exponents k with a' = -k a for the six abelian components at a metric slice.
AbelianState abelian_rates(const MetricProfile& m);

class PoleError : public std::domain_error {
 public:
  PoleError(const std::string& what, double r_pole) : std::domain_error(what), r_pole_(r_pole) {}
  double r_pole() const { return r_pole_; }

 private:
  double r_pole_;
};

/// A state and its t-derivative from a closed-form solution.
struct ClosedPoint {
  StateSU23 state;
  StateSU23 dt;
};

/// Clarke family on BS: x = 2 x1 r sqrt(1 - r^-3) / (3 + x1 (r^2 - 1)), y = 0.
ClosedPoint clarke_closed_form(double x1, double r);
ClosedPoint clarke_closed_form_offset(double x1, double u);
/// Pole r* = sqrt(1 - 3/x1) of the Clarke solution for x1 < 0.
double clarke_pole(double x1);

/// Limit connection A^lim on BS: x = 2 r sqrt(1 - r^-3) / (r^2 - 1), y = 0.
ClosedPoint alim_closed_form(double r);
ClosedPoint alim_closed_form_offset(double u);
/// A1 x for A^lim from the offset u = r - 1; finite (-> 1) at the singular orbit.
double alim_A1x_offset(double u);

/// Connection coefficients of the U(1) ansatz.
struct ConnectionData {
  std::array<Lie, 3> a_plus, a_minus;      // a_i^{+-}
  std::array<Lie, 3> adot_plus, adot_minus;  // t-derivatives
};
ConnectionData connection_data(const StateFull& s, const StateFull& ds, const MetricProfile& m);

/// |F_A ^ psi| for a connection slice, computed with the invariant exterior calculus.
double unreduced_residual(const ConnectionData& c, const MetricProfile& m);
double unreduced_residual(const StateFull& s, const StateFull& ds, const MetricProfile& m);

}  // namespace g2inst::instantons
