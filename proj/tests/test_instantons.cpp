#include "doctest.h"

#include "g2inst/instantons.hpp"
#include "g2inst/rng.hpp"

#include <cmath>

using namespace g2inst;
using namespace g2inst::instantons;
using metrics::Model;

namespace {

double lie_dist(const Lie& a, const Lie& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < 3; ++k) m = std::max(m, std::abs(a.c[k] - b.c[k]));
  return m;
}

// Random U(1)-symmetric slice whose derivatives come from the metric ODEs.
MetricProfile random_symmetric_profile(CounterRng& rng) {
  const double A1 = rng.uniform(0.2, 2.0), A2 = rng.uniform(0.2, 2.0);
  const double B1 = rng.uniform(0.2, 2.0), B2 = rng.uniform(0.2, 2.0);
  MetricProfile p;
  p.A = {A1, A2, A2};
  p.B = {B1, B2, B2};
  const auto d = metrics::metric_ode_rhs(p.A, p.B);
  p.dA = d.dA;
  p.dB = d.dB;
  return p;
}

StateFull random_full(CounterRng& rng) {
  return {rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
}

}  // namespace

TEST_CASE("general bracket system restricts to the U(1) ansatz system") {
  CounterRng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const auto m = random_symmetric_profile(rng);
    const auto s = random_full(rng);
    const auto gen = rhs_general(general_from_full(s), m);
    const auto expect = general_from_full(rhs_full(s, m));
    double err = 0.0;
    for (int i = 0; i < 3; ++i) {
      err = std::max(err, lie_dist(gen.d.c_plus[i], expect.c_plus[i]));
      err = std::max(err, lie_dist(gen.d.c_minus[i], expect.c_minus[i]));
    }
    CHECK(err < 1e-12 * (1.0 + std::abs(s.f_plus) + std::abs(s.g_plus)) * 10);
    CHECK(lie_dist(gen.constraint, Lie::su2(0, 0, 0)) < 1e-14);
  }
}

TEST_CASE("U(1) ansatz system restricts to the SU(2)^3 system on BS") {
  CounterRng rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    const double u = rng.uniform(1e-3, 30.0);
    const auto m = metrics::bs_profile_offset(u);
    const StateSU23 s{rng.uniform(-3, 3), rng.uniform(-3, 3)};
    const auto full = rhs_full(embed(s), m);
    const auto red = rhs_su23(s, m.A[0], m.B[0], m.dA[0]);
    const double scale = 1.0 + std::abs(red.x) + std::abs(red.y);
    CHECK(std::abs(full.f_plus - red.x) < 1e-12 * scale);
    CHECK(std::abs(full.g_plus - red.x) < 1e-12 * scale);
    CHECK(std::abs(full.f_minus - red.y) < 1e-12 * scale);
    CHECK(std::abs(full.g_minus - red.y) < 1e-12 * scale);
  }
  CHECK_THROWS_AS(rhs_su23({1.0, 1.0}, 0.0, 1.0, 0.5), std::domain_error);
  const auto z = rhs_su23({0.0, 0.0}, 0.7, 1.0, 0.3);
  CHECK(z.x == 0.0);
  CHECK(z.y == 0.0);
}

TEST_CASE("transport to (F, G, s) gives the reduced system with the right H") {
  CounterRng rng(13);
  for (Model model : {Model::BS, Model::BGGG}) {
    for (int trial = 0; trial < 100; ++trial) {
      const double u = rng.uniform(1e-2, 40.0);
      const auto m = metrics::closed_profile_offset(model, u);
      const StateFull s{rng.uniform(-2, 2), rng.uniform(-2, 2), 0.0, 0.0};
      const auto ds = rhs_full(s, m);
      const double A1 = m.A[0];
      // d/ds = (1/A1) d/dt with F = f+/A1.
      const double dF = (ds.f_plus / A1 - s.f_plus * m.dA[0] / (A1 * A1)) / A1;
      const double dG = (ds.g_plus / A1 - s.g_plus * m.dA[0] / (A1 * A1)) / A1;
      const double H = model == Model::BS ? 0.0 : h_of_r(metrics::r_min(model) + u);
      const auto fg = rhs_fg(to_fg(s, A1), H);
      const double scale = 1.0 + std::abs(fg.F) + std::abs(fg.G);
      CHECK(std::abs(dF - fg.F) < 1e-10 * scale);
      CHECK(std::abs(dG - fg.G) < 1e-10 * scale);
      CHECK(ds.f_minus == 0.0);
      CHECK(ds.g_minus == 0.0);
    }
  }
  CHECK_THROWS_AS(to_fg({1, 1, 0, 0}, 0.0), std::domain_error);
}

TEST_CASE("H on BGGG") {
  // Frozen from tests/oracles/h_function.py.
  CHECK(std::abs(h_of_r(2.25) - 5.0 / 9.0) < 1e-15);
  CHECK(std::abs(h_of_r(2.3) - 0.55573879136291479) < 1e-14);
  CHECK(std::abs(h_of_r(3.0) - 73.0 / 126.0) < 1e-15);
  CHECK(std::abs(h_of_r(10.0) - 0.79997242140099283) < 1e-14);
  CHECK(std::abs(h_of_r(1e8) - 1.0) < 1e-7);
  CHECK_THROWS_AS(h_of_r(2.0), std::domain_error);

  double prev = h_of_r(2.25);
  for (int i = 1; i <= 20000; ++i) {
    const double r = 2.25 + 0.005 * i;
    const double h = h_of_r(r);
    CHECK(h > prev);
    CHECK(h > 0.0);
    CHECK(h < 1.0);
    prev = h;
  }

  for (double r : {2.4, 3.0, 7.7, 50.0}) {
    const auto p = metrics::bggg_profile(r);
    const double A1 = p.A[0], A2 = p.A[1], B1 = p.B[0], B2 = p.B[1];
    const double quotient =
        0.5 * (2.0 / (A1 * A1) + 1.0 / (B2 * B2) - (A2 * A2 + B1 * B1 + B2 * B2) / (A1 * A2 * B1 * B2));
    CHECK(std::abs(quotient - h_of_r(r)) < 1e-12);
  }
}

TEST_CASE("reduced system identities") {
  CounterRng rng(14);
  for (int trial = 0; trial < 100; ++trial) {
    const StateFG s{rng.uniform(-3, 3), rng.uniform(-3, 3), std::nullopt};
    const double H = rng.uniform(0, 1);
    const auto d = rhs_fg(s, H);
    CHECK(std::abs((d.G - d.F) - (H + s.G - s.F) * s.G) < 1e-12);
    const double lhs = 2 * (s.F - 1) * d.F - 2 * s.G * d.G;
    CHECK(std::abs(lhs - 2 * (1 - H) * s.G * s.G) < 1e-11);
    const auto flipped = rhs_fg({s.F, -s.G, std::nullopt}, H);
    CHECK(flipped.F == doctest::Approx(d.F));
    CHECK(flipped.G == doctest::Approx(-d.G));
  }
  const auto ab = rhs_fg({1.7, 0.0, std::nullopt}, 0.4);
  CHECK(ab.F == 0.0);
  CHECK(ab.G == 0.0);
}

TEST_CASE("g -> -g symmetry of the full system") {
  CounterRng rng(15);
  for (int trial = 0; trial < 100; ++trial) {
    const auto m = random_symmetric_profile(rng);
    const auto s = random_full(rng);
    const auto d = rhs_full(s, m);
    const auto df = rhs_full({s.f_plus, -s.g_plus, s.f_minus, -s.g_minus}, m);
    CHECK(df.f_plus == doctest::Approx(d.f_plus));
    CHECK(df.f_minus == doctest::Approx(d.f_minus));
    CHECK(df.g_plus == doctest::Approx(-d.g_plus));
    CHECK(df.g_minus == doctest::Approx(-d.g_minus));
  }
}

TEST_CASE("BS first integral F^2 - G^2") {
  CounterRng rng(16);
  integrator::StepControl ctl;
  ctl.growth_window = 1e9;
  const integrator::Rhs rhs = [](double, const integrator::State& y, integrator::State& d) {
    const auto r = rhs_fg({y[0], y[1], std::nullopt}, 0.0);
    d[0] = r.F;
    d[1] = r.G;
  };
  for (int trial = 0; trial < 10; ++trial) {
    const double f1 = rng.uniform(0.1, 2.0), g1 = rng.uniform(-1.0, 1.0);
    integrator::Monitors mon;
    mon.conserved = [](double, const integrator::State& y) { return y[0] * y[0] - y[1] * y[1]; };
    const auto traj = integrator::integrate(rhs, 0.0, {2 * f1, 2 * g1}, 20.0, ctl, mon);
    double peak = 1.0;
    for (const auto& smp : traj.samples) peak = std::max(peak, smp.y[0] * smp.y[0] + smp.y[1] * smp.y[1]);
    CHECK(traj.diagnostics.max_conserved_drift < 1e-9 * peak);
  }
}

TEST_CASE("sign of G is preserved on BGGG") {
  CounterRng rng(17);
  integrator::StepControl ctl;
  ctl.growth_window = 1e9;
  const integrator::Rhs rhs = [](double s, const integrator::State& y, integrator::State& d) {
    const auto r = rhs_fg({y[0], y[1], std::nullopt}, h_of_r(2.25 + s));
    d[0] = r.F;
    d[1] = r.G;
  };
  for (int trial = 0; trial < 20; ++trial) {
    const double f1 = rng.uniform(-1.0, 2.0), g1 = rng.uniform(0.01, 1.5);
    const auto traj = integrator::integrate(rhs, 0.0, {2 * f1, 2 * g1}, 30.0, ctl);
    for (const auto& smp : traj.samples) CHECK(smp.y[1] > 0.0);
  }
}

TEST_CASE("abelian solutions") {
  const metrics::CoordinateMap bs(Model::BS), bg(Model::BGGG);
  AbelianState init;
  init.plus = {1.0, 1.0, 1.0};
  init.minus = {1.0, 1.0, 1.0};
  const double t0 = 0.5;

  const double r0 = bs.r_of_t(t0);
  auto fbs = [](double r) { return (r * r * r - 1) / r; };
  for (double t : {0.01, 0.1, 1.0, 3.0, 10.0, 50.0}) {
    const auto a = abelian_solution(bs, t0, init, t);
    const double ref = fbs(bs.r_of_t(t)) / fbs(r0);
    for (int i = 0; i < 3; ++i) CHECK(std::abs(a.plus[i] / ref - 1.0) < 1e-8);
  }

  const double R0 = bg.r_of_t(t0);
  auto f1 = [](double r) { return (r - 2.25) * (r + 2.25) / ((r - 0.75) * (r + 0.75)); };
  auto f2 = [](double r) { return (r - 2.25) * std::exp(r) / (std::sqrt(r) * (r + 2.25) * (r + 2.25)); };
  for (double t : {0.01, 0.1, 1.0, 3.0, 10.0, 30.0}) {
    const auto a = abelian_solution(bg, t0, init, t);
    const double r = bg.r_of_t(t);
    CHECK(std::abs(a.plus[0] / (f1(r) / f1(R0)) - 1.0) < 1e-8);
    CHECK(std::abs(a.plus[1] / (f2(r) / f2(R0)) - 1.0) < 1e-8);
    CHECK(a.plus[2] == doctest::Approx(a.plus[1]).epsilon(1e-12));
  }

  // a_i^- = a_i^-(t0) t0^4 t^-4 + O(1): t^4 a^- settles to a constant as t -> 0.
  for (const auto* map : {&bs, &bg}) {
    const double c1 = abelian_solution(*map, t0, init, 1e-3).minus[0] * 1e-12;
    const double c2 = abelian_solution(*map, t0, init, 2e-3).minus[0] * 16e-12;
    CHECK(std::abs(c1 / c2 - 1.0) < 1e-3);
    CHECK(c1 > 0.0);
  }

  const auto zero = abelian_solution(bs, t0, AbelianState{}, 3.0);
  for (int i = 0; i < 3; ++i) {
    CHECK(zero.plus[i] == 0.0);
    CHECK(zero.minus[i] == 0.0);
  }
  CHECK_THROWS_AS(abelian_solution(bs, 0.0, init, 1.0), std::domain_error);
}

TEST_CASE("Clarke family") {
  for (double r : {1.0, 1.5, 4.0, 100.0}) CHECK(clarke_closed_form(0.0, r).state.x == 0.0);
  CHECK(std::abs(clarke_closed_form(1.0, 2.0).state.x - 4.0 * std::sqrt(7.0 / 8.0) / 6.0) < 1e-15);
  for (double x1 : {0.1, 1.0, 10.0}) {
    const double r = 1e5;
    const auto p = metrics::bs_profile(r);
    CHECK(std::abs(p.A[0] * clarke_closed_form(x1, r).state.x - 2.0 / 3.0) < 1e-4);
  }
  for (double x1 : {0.1, 1.0, 10.0, -0.5}) {
    double worst = 0.0, worst_unreduced = 0.0;
    for (int i = 1; i <= 40; ++i) {
      const double u = 0.01 * i * i;
      if (x1 < 0 && 1.0 + u >= clarke_pole(x1) - 0.05) break;
      const auto m = metrics::bs_profile_offset(u);
      const auto cp = clarke_closed_form_offset(x1, u);
      const auto rhs = rhs_su23(cp.state, m.A[0], m.B[0], m.dA[0]);
      worst = std::max(worst, std::abs(rhs.x - cp.dt.x) + std::abs(rhs.y - cp.dt.y));
      worst_unreduced = std::max(worst_unreduced, unreduced_residual(embed(cp.state), embed(cp.dt), m));
    }
    CHECK(worst < 1e-10);
    CHECK(worst_unreduced < 1e-10);
  }
  CHECK(clarke_pole(-1.0) == doctest::Approx(2.0));
  CHECK_THROWS_AS(clarke_pole(1.0), std::domain_error);
  try {
    (void)clarke_closed_form(-1.0, 2.5);
    FAIL("expected a pole error");
  } catch (const PoleError& e) {
    CHECK(e.r_pole() == doctest::Approx(2.0));
  }
  CHECK_THROWS_AS(clarke_closed_form(1.0, 0.9), std::domain_error);
}

TEST_CASE("limit connection A^lim") {
  CHECK(std::abs(alim_A1x_offset(0.0) - 1.0) < 1e-15);
  CHECK(std::abs(alim_A1x_offset(1e-6) - 1.0) < 1e-5);
  CHECK(std::abs(alim_A1x_offset(1e5) - 2.0 / 3.0) < 1e-4);
  const auto p = metrics::bs_profile_offset(0.5);
  CHECK(std::abs(p.A[0] * alim_closed_form_offset(0.5).state.x - alim_A1x_offset(0.5)) < 1e-14);
  CHECK(std::abs(alim_closed_form(2.0).state.x - 4.0 * std::sqrt(7.0 / 8.0) / 3.0) < 1e-14);
  double worst = 0.0, worst_unreduced = 0.0;
  for (int i = 1; i <= 40; ++i) {
    const double u = 0.01 * i * i;
    const auto m = metrics::bs_profile_offset(u);
    const auto cp = alim_closed_form_offset(u);
    const auto rhs = rhs_su23(cp.state, m.A[0], m.B[0], m.dA[0]);
    const double scale = 1.0 + std::abs(cp.dt.x);
    worst = std::max(worst, std::abs(rhs.x - cp.dt.x) / scale);
    worst_unreduced = std::max(worst_unreduced, unreduced_residual(embed(cp.state), embed(cp.dt), m) / scale);
  }
  CHECK(worst < 1e-10);
  CHECK(worst_unreduced < 1e-10);
  CHECK_THROWS_AS(alim_closed_form(1.0), std::domain_error);
}

TEST_CASE("unreduced residual of the full system") {
  CounterRng rng(18);
  for (int trial = 0; trial < 30; ++trial) {
    const double u = rng.uniform(0.05, 10.0);
    const auto m = metrics::closed_profile_offset(trial % 2 ? Model::BS : Model::BGGG, u);
    const auto s = random_full(rng);
    auto ds = rhs_full(s, m);
    CHECK(unreduced_residual(s, ds, m) < 1e-11);
    ds.g_minus += 0.01;
    CHECK(unreduced_residual(s, ds, m) > 1e-4);
  }
}
