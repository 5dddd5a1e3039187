#include "g2inst/calculus.hpp"

#include <cmath>

namespace g2inst::calculus {

double instanton_residual(const InvariantForm<double>& Fa, const InvariantForm<double>& adot,
                          const CoframeMetric<double>& m) {
  return std::sqrt(instanton_residual_sq(Fa, adot, m));
}

namespace {

InvariantForm<double> values(const InvariantForm<DualD>& f) {
  return f.map<double>([](const DualD& x) { return x.v; });
}

InvariantForm<double> derivatives(const InvariantForm<DualD>& f) {
  return f.map<double>([](const DualD& x) { return x.d; });
}

}  // namespace

HitchinReport hitchin_residual(const MetricJet& jet) {
  CoframeMetric<DualD> dm;
  CoframeMetric<double> m;
  for (std::size_t i = 0; i < 3; ++i) {
    dm.A[i] = DualD(jet.A[i], jet.dA[i]);
    dm.B[i] = DualD(jet.B[i], jet.dB[i]);
    m.A[i] = jet.A[i];
    m.B[i] = jet.B[i];
  }
  require_nondegenerate(m);
  const auto su3 = su3_structure(dm);
  const auto omega = values(su3.omega);
  const auto omega_dot = derivatives(su3.omega);
  const auto Omega1 = values(su3.Omega1);
  const auto Omega1_dot = derivatives(su3.Omega1);
  const auto Omega2 = values(su3.Omega2);

  HitchinReport r;
  r.flow_omega1 = std::sqrt(norm_sq(Omega1_dot - d_invariant(omega), m));
  r.flow_omega2 = std::sqrt(norm_sq(wedge(omega, omega_dot) + d_invariant(Omega2), m));
  r.half_flat_Omega1 = std::sqrt(norm_sq(d_invariant(Omega1), m));
  r.half_flat_omega2 = std::sqrt(norm_sq(d_invariant(wedge(omega, omega)), m));
  return r;
}

std::vector<IdentityCheck> sasaki_einstein_check() {
  using F = InvariantForm<Rational>;
  const Rational four_thirds(4, 3);
  const F alpha = F::wedge_of({minus(1)}, -four_thirds);
  const F omega1 = F::wedge_of({plus(2), minus(3)}, four_thirds) + F::wedge_of({minus(2), plus(3)}, four_thirds);
  const F omega2 = F::wedge_of({plus(2), plus(3)}, four_thirds) - F::wedge_of({minus(2), minus(3)}, four_thirds);
  const F omega3 = F::wedge_of({plus(2), minus(2)}, four_thirds) + F::wedge_of({plus(3), minus(3)}, four_thirds);
  const F eta_inf = F::wedge_of({plus(1)}, Rational(2));
  const F deta_expected =
      F::wedge_of({plus(2), plus(3)}, Rational(-4)) + F::wedge_of({minus(2), minus(3)}, Rational(-4));

  std::vector<IdentityCheck> out;
  auto record = [&out](std::string name, const F& diff) {
    out.push_back({std::move(name), diff.is_zero(), diff.max_abs()});
  };
  record("d alpha = -2 omega_1", d_invariant(alpha) + Rational(2) * omega1);
  record("d omega_2 = 3 alpha ^ omega_3", d_invariant(omega2) - Rational(3) * wedge(alpha, omega3));
  record("d omega_3 = -3 alpha ^ omega_2", d_invariant(omega3) + Rational(3) * wedge(alpha, omega2));
  record("d eta_inf = -4(eta_23^+ + eta_23^-)", d_invariant(eta_inf) - deta_expected);
  const F deta = d_invariant(eta_inf);
  record("d eta_inf ^ omega_1 = 0", wedge(deta, omega1));
  record("d eta_inf ^ omega_2 = 0", wedge(deta, omega2));
  record("d eta_inf ^ omega_3 = 0", wedge(deta, omega3));
  return out;
}

}  // namespace g2inst::calculus
