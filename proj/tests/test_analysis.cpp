#include "doctest.h"

#include "g2inst/analysis.hpp"
#include "g2inst/rng.hpp"

#include <cmath>

using namespace g2inst;
using namespace g2inst::analysis;
using metrics::Model;

namespace {

solve::InstantonRun bggg_run(double f1, double g1, double horizon = 200.0) {
  solve::SolveOptions o;
  o.horizon = horizon;
  return solve::solve(seeds::seed_p1(f1, g1, metrics::seed_of(Model::BGGG)), Model::BGGG, o);
}

solve::InstantonRun clarke_run(double x1, double horizon) {
  solve::SolveOptions o;
  o.horizon = horizon;
  return solve::solve(seeds::seed_su23_p1(x1), Model::BS, o);
}

const LimitState kConeLimit{{2.0 / 3.0, 2.0 / 3.0, 0.0, 0.0}};

}  // namespace

TEST_CASE("BS curvature norm") {
  CHECK(curvature_norm_bs(0.0, 0.0, 2.0) == 0.0);
  CHECK_THROWS_AS(curvature_norm_bs(1.0, 0.0, 1.0), std::domain_error);
  const metrics::CoordinateMap map(Model::BS);
  for (int i = 0; i < 20; ++i) {
    const double r = 1.05 + 0.9 * i * i;
    const auto cp = instantons::clarke_closed_form(1.0, r);
    const auto m = metrics::bs_profile(r);
    const double drdt = metrics::drdt_offset(Model::BS, r - 1.0);
    const StateFull s{cp.state.x, cp.state.x, 0.0, 0.0}, ds{cp.dt.x, cp.dt.x, 0.0, 0.0};
    const double general = curvature_parts_general(s, ds, m).total();
    CHECK(std::abs(curvature_norm_bs(cp.state.x, cp.dt.x / drdt, r) - general) <= 1e-8 * general);
  }
}

TEST_CASE("closed curvature formulas agree with the general computation") {
  CounterRng rng(21);
  for (int i = 0; i < 30; ++i) {
    const auto m = metrics::closed_profile_offset(i % 2 ? Model::BGGG : Model::BS, rng.uniform(0.05, 20.0));
    const StateFull s{rng.uniform(-2, 2), rng.uniform(-2, 2), 0.0, 0.0};
    const auto ds = instantons::rhs_full(s, m);
    const auto a = curvature_parts(s, ds, m), b = curvature_parts_general(s, ds, m);
    CHECK(std::abs(a.slice - b.slice) <= 1e-11 * (1.0 + b.slice));
    CHECK(std::abs(a.dt - b.dt) <= 1e-11 * (1.0 + b.dt));
    CHECK(curvature_norm_full(s, ds, m) == doctest::Approx(a.slice + a.dt).epsilon(1e-15));
  }
  // Non-zero f-, g- falls back to the general computation.
  const auto m = metrics::bggg_profile(4.0);
  const StateFull s{0.3, 0.2, 0.5, -0.1};
  const auto ds = instantons::rhs_full(s, m);
  CHECK(curvature_parts(s, ds, m).total() == curvature_parts_general(s, ds, m).total());
}

TEST_CASE("curvature decay") {
  const auto c = curvature_report(clarke_run(1.0, 5000.0));
  REQUIRE(c.decay_exponent);
  CHECK(std::abs(*c.decay_exponent - 2.0) < 0.05);
  for (const auto& s : c.samples) CHECK(s.norm_sq == doctest::Approx(s.slice + s.dt).epsilon(1e-15));

  const auto e = curvature_report(bggg_run(1.0, 0.3));
  REQUIRE(e.decay_exponent);
  CHECK(std::abs(*e.decay_exponent - 2.0) < 0.05);
  CHECK(std::isfinite(e.sup_norm));

  const auto ab = curvature_report(bggg_run(0.8, 0.0));
  REQUIRE(ab.decay_exponent);
  CHECK(*ab.decay_exponent > 1.9);
  CHECK(ab.samples.back().norm_sq < 1e-6);
}

TEST_CASE("energy difference") {
  CHECK(std::abs(energy_limit() - 299.94221300) < 1e-6);
  for (double x1 : {1.0, 100.0, 1e4}) {
    CHECK(std::isfinite(energy_density_difference(x1, 1e-12)));
    CHECK(std::isfinite(energy_density_difference(x1, 0.0)));
  }
  // High-precision quadrature in tests/oracles/energy.py.
  const double e2 = energy_difference(1e2, 100.0), e3 = energy_difference(1e3, 100.0), e4 = energy_difference(1e4, 100.0);
  CHECK(e2 == doctest::Approx(300.097444).epsilon(1e-8));
  CHECK(e3 == doctest::Approx(299.957952).epsilon(1e-8));
  CHECK(e4 == doctest::Approx(299.943789).epsilon(1e-8));
  CHECK(std::abs(e4 - energy_limit()) < std::abs(e3 - energy_limit()));
  CHECK(std::abs(e3 - energy_limit()) < std::abs(e2 - energy_limit()));
  CHECK(std::abs(e4 / energy_limit() - 1.0) < 0.02);
  // The integrand decays like r^-2, so the tail beyond r_max shrinks like 1/r_max.
  const double d100 = energy_density_difference(1.0, 100.0), d200 = energy_density_difference(1.0, 200.0);
  CHECK(std::abs(std::log(d100 / d200) / std::log(201.0 / 101.0) - 2.0) < 0.05);
  CHECK(std::abs(energy_difference(1e4, 200.0) - e4) < 1e-3);
  CHECK_THROWS_AS(energy_difference(-1.0, 10.0), std::domain_error);
}

TEST_CASE("holonomy at infinity") {
  const auto ab = holonomy_infinity(bggg_run(0.7, 0.0));
  CHECK(std::abs(ab.F_inf - 1.4) < 1e-12);
  CHECK(std::abs(ab.angle - 0.4) < 1e-12);

  const auto h = holonomy_infinity(bggg_run(1.0, 0.3));
  CHECK(h.in_bracket);
  CHECK(h.bracket_low == doctest::Approx(1.8));
  CHECK(h.bracket_high == 2.0);
  CHECK(h.F_inf > 1.8);
  CHECK(h.F_inf < 2.0);

  double prev = 1.0 + 2.0 * 0.1;
  for (double f1 : {0.7, 1.0, 2.0, 5.0, 10.0}) {
    const double F = holonomy_infinity(bggg_run(f1, 0.1)).F_inf;
    CHECK(F > prev);
    prev = F;
  }
  CHECK_THROWS_AS(holonomy_infinity(bggg_run(0.4, 0.5)), std::domain_error);
}

TEST_CASE("asymptotic rates") {
  // Window fits from tests/oracles/asymptotics.py.
  for (double x1 : {1.0, 2.0, 4.0}) {
    const auto fit = asymptotic_rate(clarke_run(x1, 5000.0), kConeLimit);
    CHECK(std::abs(fit.fit.exponent - 3.0) < 0.1);
  }
  solve::SolveOptions o;
  o.horizon = 200.0;
  const auto alim = asymptotic_rate(solve::solve(seeds::seed_su23_pid(0.0), Model::BS, o), kConeLimit);
  CHECK(std::abs(alim.fit.exponent - 3.0) < 0.1);
  CHECK_THROWS_AS(asymptotic_rate(bggg_run(0.4, 0.5), kConeLimit), std::domain_error);
}

TEST_CASE("bubbling comparison") {
  std::vector<double> ratios;
  for (double l : {0.01, 0.02, 0.05, 0.1})
    for (double x1 : {10.0, 1e2, 1e3, 1e4}) ratios.push_back(bubbling_compare(x1, l) * x1 / (l * l));
  double lc = 0.0;
  for (double r : ratios) lc += std::log(r);
  const double c = std::exp(lc / static_cast<double>(ratios.size()));
  for (double r : ratios) CHECK(std::abs(r / c - 1.0) < 0.1);
  for (double l : {0.25, 1.0, 2.0})
    for (double x1 : {10.0, 1e3}) CHECK(bubbling_compare(x1, l) <= l * l / x1);

  double prev = 1.0;
  for (double x1 : {10.0, 1e2, 1e3, 1e4}) {
    const double v = bubbling_compare(x1, 1.0);
    CHECK(v < prev);
    prev = v;
  }
  CHECK(prev < 1e-3);
  CHECK(bubbling_compare(100.0, 1e-6) < 1e-12);
}

TEST_CASE("classification examples") {
  auto tag = [](const solve::InstantonRun& r) { return classify(r, curvature_report(r)).tag; };
  CHECK(tag(bggg_run(1.0, 0.3)) == Tag::GlobalBoundedCurvature);
  const auto bad = tag(bggg_run(0.4, 0.5));
  CHECK((bad == Tag::CurvatureUnbounded || bad == Tag::FiniteBlowUp));
  CHECK(tag(bggg_run(0.3, 0.05)) == Tag::CurvatureUnbounded);
  for (double f1 : {0.2, 0.5, 1.7}) CHECK(tag(bggg_run(f1, 0.0)) == Tag::GlobalBoundedCurvature);
  CHECK(tag(bggg_run(0.711864406779661, 0.3620689655172414)) == Tag::Inconclusive);

  const auto v = classify(bggg_run(1.0, 0.3), curvature_report(bggg_run(1.0, 0.3)));
  const auto j = to_json(v);
  CHECK(j["tag"] == "GlobalBoundedCurvature");
  CHECK(j["evidence"]["tail_checks"]["G_rate"] == true);
}

TEST_CASE("existence-region monotone facts") {
  const auto run = bggg_run(1.2, 0.4);
  double prevF = 1e300, prevQ = -1e300;
  for (const auto& p : run.points) {
    if (p.G * p.G > 1e-14 * p.F) CHECK(p.F < prevF);
    CHECK(p.F <= prevF);
    CHECK(p.F > 1.0);
    CHECK(p.G > 0.0);
    CHECK(p.G < p.F - 1.0);
    const double q = (p.F - 1.0) * (p.F - 1.0) - p.G * p.G;
    CHECK(q > prevQ - 1e-12);
    prevF = p.F;
    prevQ = q;
  }
  const auto h = holonomy_infinity(run);
  std::vector<double> s, logG;
  for (double x = 4.0; x <= 16.0; x += 1.5) {
    s.push_back(x);
    logG.push_back(std::log(run.at_param(x).G));
  }
  const double slope = (logG.back() - logG.front()) / (s.back() - s.front());
  CHECK(slope <= -(h.F_inf - 1.0) / 2.0);
}
