#pragma once

// Metric-dependent operations on invariant forms: Hodge star, the SU(3)-structure
// (omega, Omega_1, Omega_2) of the cohomogeneity-one G2 metric, curvature of an
// invariant connection, and residuals of the instanton and Hitchin-flow equations.

#include "g2inst/form.hpp"

#include <array>
#include <cmath>
#include <string>
#include <vector>

namespace g2inst::calculus {

/// Coframe scales (A_1..A_3, B_1..B_3) of g_t = sum (2A_i)^2 (eta_i^+)^2 + (2B_i)^2 (eta_i^-)^2.
template <class S>
struct CoframeMetric {
  std::array<S, 3> A{S(1), S(1), S(1)};
  std::array<S, 3> B{S(1), S(1), S(1)};

  /// Orthonormal scale factors lambda with e_k = lambda_k eta_k.
  std::array<S, 6> lambda() const {
    return {S(2) * A[0], S(2) * A[1], S(2) * A[2], S(2) * B[0], S(2) * B[1], S(2) * B[2]};
  }
};

/// Orientation sign attached to e_1^+ e_2^+ e_3^+ e_1^- e_2^- e_3^-.
inline constexpr int kOrientation = 1;

/// Squared norm |T_i|^2 of the su(2) basis elements in the inner product -tr.
inline constexpr int kSu2NormSq = 2;

template <class S>
void require_nondegenerate(const CoframeMetric<S>& m) {
  for (const auto& x : m.A)
    if (is_zero(x)) throw std::domain_error("degenerate metric: some A_i vanishes");
  for (const auto& x : m.B)
    if (is_zero(x)) throw std::domain_error("degenerate metric: some B_i vanishes");
}

template <class S>
S product_over(Mask m, const std::array<S, 6>& lam) {
  S p(1);
  for (int i = 0; i < kCoframeDim; ++i)
    if ((m >> i) & 1U) p = p * lam[static_cast<std::size_t>(i)];
  return p;
}

template <class S>
InvariantForm<S> hodge_star(const InvariantForm<S>& a, const CoframeMetric<S>& metric) {
  require_nondegenerate(metric);
  const auto lam = metric.lambda();
  InvariantForm<S> out(kCoframeDim - a.degree(), a.kind());
  for (Mask m = 0; m <= kFullMask; ++m) {
    if (degree_of(m) != a.degree()) continue;
    const auto v = a.value(m);
    if (v.is_zero()) continue;
    const Mask mc = kFullMask & ~m;
    const S factor = S(kOrientation * wedge_sign(m, mc)) * product_over(mc, lam) / product_over(m, lam);
    out.add(mc, factor * v);
  }
  return out;
}

/// Pointwise squared norm; su(2) values use |T_i|^2 = kSu2NormSq.
template <class S>
S norm_sq(const InvariantForm<S>& a, const CoframeMetric<S>& metric) {
  const auto lam = metric.lambda();
  S total(0);
  const S weight = a.is_su2() ? S(kSu2NormSq) : S(1);
  for (Mask m = 0; m <= kFullMask; ++m) {
    if (degree_of(m) != a.degree()) continue;
    const auto& c = a.coefficients(m);
    S sq(0);
    for (const auto& x : c) sq = sq + x * x;
    if (is_zero(sq)) continue;
    const S p = product_over(m, lam);
    total = total + weight * sq / (p * p);
  }
  return total;
}

template <class S>
struct Su3Structure {
  InvariantForm<S> omega;
  InvariantForm<S> Omega1;
  InvariantForm<S> Omega2;
};

template <class S>
Su3Structure<S> su3_structure(const CoframeMetric<S>& m) {
  const auto& A = m.A;
  const auto& B = m.B;
  InvariantForm<S> omega(2, ValueKind::Scalar);
  for (int i = 1; i <= 3; ++i) {
    const auto k = static_cast<std::size_t>(i - 1);
    omega += InvariantForm<S>::wedge_of({minus(i), plus(i)}, S(4) * A[k] * B[k]);
  }
  auto Omega1 = InvariantForm<S>::wedge_of({minus(1), minus(2), minus(3)}, S(8) * B[0] * B[1] * B[2]);
  auto Omega2 = InvariantForm<S>::wedge_of({plus(1), plus(2), plus(3)}, S(-8) * A[0] * A[1] * A[2]);
  const int perms[6][4] = {{1, 2, 3, 1}, {2, 3, 1, 1}, {3, 1, 2, 1}, {2, 1, 3, -1}, {1, 3, 2, -1}, {3, 2, 1, -1}};
  for (const auto& p : perms) {
    const int i = p[0], j = p[1], k = p[2], eps = p[3];
    const auto ui = static_cast<std::size_t>(i - 1), uj = static_cast<std::size_t>(j - 1),
               uk = static_cast<std::size_t>(k - 1);
    Omega1 -= InvariantForm<S>::wedge_of({plus(i), plus(j), minus(k)}, S(4 * eps) * A[ui] * A[uj] * B[uk]);
    Omega2 += InvariantForm<S>::wedge_of({minus(i), minus(j), plus(k)}, S(4 * eps) * B[ui] * B[uj] * A[uk]);
  }
  return {omega, Omega1, Omega2};
}

/// Invariant connection a = sum a_i^+ (x) eta_i^+ + a_i^- (x) eta_i^-.
template <class S>
InvariantForm<S> connection_form(const std::array<LieValue<S>, 3>& ap, const std::array<LieValue<S>, 3>& am) {
  InvariantForm<S> a(1, ValueKind::Su2);
  for (int i = 1; i <= 3; ++i) {
    a.add(Mask{1} << plus(i), ap[static_cast<std::size_t>(i - 1)]);
    a.add(Mask{1} << minus(i), am[static_cast<std::size_t>(i - 1)]);
  }
  return a;
}

/// F_a = da + 1/2 [a ^ a] on a fixed-t slice.
template <class S>
InvariantForm<S> curvature(const std::array<LieValue<S>, 3>& ap, const std::array<LieValue<S>, 3>& am) {
  const auto a = connection_form(ap, am);
  auto F = d_invariant(a);
  const S half = S(1) / S(2);
  F += half * bracket_wedge(a, a);
  return F;
}

/// Closed curvature formula term by term (cyclic (i,j,k)); the reference for curvature().
template <class S>
InvariantForm<S> curvature_closed_form(const std::array<LieValue<S>, 3>& ap, const std::array<LieValue<S>, 3>& am) {
  InvariantForm<S> F(2, ValueKind::Su2);
  auto put = [&F](int p, int q, const LieValue<S>& v) {
    auto [m, s] = ordered_mask({p, q});
    F.add(m, S(s) * v);
  };
  const int cyc[3][3] = {{1, 2, 3}, {2, 3, 1}, {3, 1, 2}};
  auto at = [](const std::array<LieValue<S>, 3>& x, int i) { return x[static_cast<std::size_t>(i - 1)]; };
  for (const auto& c : cyc) {
    const int i = c[0], j = c[1], k = c[2];
    put(plus(i), minus(i), bracket(at(ap, i), at(am, i)));
    put(plus(j), plus(k), S(-2) * at(ap, i) + bracket(at(ap, j), at(ap, k)));
    put(minus(j), minus(k), S(-2) * at(ap, i) + bracket(at(am, j), at(am, k)));
    put(minus(j), plus(k), S(-2) * at(am, i) + bracket(at(am, j), at(ap, k)));
    put(plus(j), minus(k), S(-2) * at(am, i) + bracket(at(ap, j), at(am, k)));
  }
  return F;
}

/// The two pieces of F_A ^ psi for F_A = dt ^ adot + F_a and psi = omega^2/2 - dt ^ Omega_2.
template <class S>
struct InstantonResidualParts {
  InvariantForm<S> dt_part;     // adot ^ omega^2/2 - F_a ^ Omega_2, coefficient of dt
  InvariantForm<S> slice_part;  // F_a ^ omega^2/2, the constraint
};

template <class S>
InstantonResidualParts<S> instanton_residual_parts(const InvariantForm<S>& Fa, const InvariantForm<S>& adot,
                                                   const CoframeMetric<S>& m) {
  if (Fa.degree() != 2 || adot.degree() != 1) throw std::domain_error("instanton residual needs a 2-form and a 1-form");
  const auto su3 = su3_structure(m);
  const S half = S(1) / S(2);
  const auto omega2_half = half * wedge(su3.omega, su3.omega);
  InvariantForm<S> dt_part = wedge(adot, omega2_half) - wedge(Fa, su3.Omega2);
  InvariantForm<S> slice_part = wedge(Fa, omega2_half);
  return {dt_part, slice_part};
}

/// Squared norm of F_A ^ psi in the metric dt^2 + g_t.
template <class S>
S instanton_residual_sq(const InvariantForm<S>& Fa, const InvariantForm<S>& adot, const CoframeMetric<S>& m) {
  const auto parts = instanton_residual_parts(Fa, adot, m);
  return norm_sq(parts.dt_part, m) + norm_sq(parts.slice_part, m);
}

double instanton_residual(const InvariantForm<double>& Fa, const InvariantForm<double>& adot,
                          const CoframeMetric<double>& m);

/// Metric values with t-derivatives for the Hitchin-flow residual.
struct MetricJet {
  std::array<double, 3> A{}, B{}, dA{}, dB{};
};

struct HitchinReport {
  double flow_omega1 = 0.0;   // |dOmega_1/dt - d omega|
  double flow_omega2 = 0.0;   // |omega ^ d omega/dt + d Omega_2|
  double half_flat_Omega1 = 0.0;  // |d Omega_1|
  double half_flat_omega2 = 0.0;  // |d(omega^2)|
  double total() const { return flow_omega1 + flow_omega2; }
};

HitchinReport hitchin_residual(const MetricJet& jet);

struct IdentityCheck {
  std::string name;
  bool holds = false;
  double defect = 0.0;  // largest coefficient of the difference
};

/// Exact checks of the homogeneous Sasaki-Einstein SU(2)-structure identities on S^2 x S^3.
std::vector<IdentityCheck> sasaki_einstein_check();

}  // namespace g2inst::calculus
