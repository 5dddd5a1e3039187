#include "doctest.h"

#include "g2inst/solve.hpp"

#include <cmath>

using namespace g2inst;
using metrics::Model;

TEST_CASE("Clarke family reproduced from the P1 seed") {
  for (double x1 : {0.5, 1.0, 2.0}) {
    const auto run = solve::solve(seeds::seed_su23_p1(x1), Model::BS);
    CHECK(run.variable == solve::Variable::S);
    CHECK(run.trajectory.stop.kind == integrator::StopKind::ReachedEnd);
    for (double t : {1.0, 3.0, 10.0}) {
      const auto p = run.at_t(t);
      CHECK(std::abs(p.t - t) < 1e-9);
      const double x = instantons::clarke_closed_form(x1, p.r).state.x;
      CHECK(std::abs(p.state.f_plus - x) < 1e-8);
      CHECK(std::abs(p.state.g_plus - x) < 1e-8);
    }
    CHECK(run.trajectory.diagnostics.max_conserved_drift < 1e-9);
  }
}

TEST_CASE("A^lim reproduced from the P_id seed") {
  solve::SolveOptions o;
  o.horizon = 20.0;
  const auto run = solve::solve(seeds::seed_su23_pid(0.0), Model::BS, o);
  CHECK(run.variable == solve::Variable::W);
  for (double t : {0.5, 2.0, 10.0}) {
    const auto p = run.at_t(t);
    CHECK(std::abs(p.t - t) < 1e-9);
    const double x = instantons::alim_closed_form(p.r).state.x;
    CHECK(std::abs(p.state.f_plus - x) < 1e-8);
    CHECK(std::abs(p.state.f_minus) < 1e-10);
  }
}

TEST_CASE("results do not depend on the seed start") {
  const auto bg = metrics::seed_of(Model::BGGG);
  auto seed = seeds::seed_p1(0.9, 0.2, bg);
  solve::SolveOptions o;
  o.horizon = 20.0;
  const auto a = solve::solve(seed, Model::BGGG, o).at_param(20.0);
  const double t0 = seed.t_start / 2;
  seed.t_start = t0;
  seed.state_at_start = seed.state(t0);
  const auto b = solve::solve(seed, Model::BGGG, o).at_param(20.0);
  CHECK(std::abs(a.F - b.F) < 1e-9);
  CHECK(std::abs(a.G - b.G) < 1e-9);
}

TEST_CASE("g1 = 0 stays abelian") {
  const auto run = solve::solve(seeds::seed_p1(0.7, 0.0, metrics::seed_of(Model::BGGG)), Model::BGGG);
  for (const auto& p : run.points) CHECK(p.G == 0.0);
  CHECK(run.trajectory.stop.kind == integrator::StopKind::ReachedEnd);
}

TEST_CASE("BGGG data outside the existence region grow") {
  const auto run = solve::solve(seeds::seed_p1(0.4, 0.5, metrics::seed_of(Model::BGGG)), Model::BGGG);
  CHECK(run.trajectory.stop.kind != integrator::StopKind::ReachedEnd);
}

TEST_CASE("general metric run agrees with the closed-form metric") {
  const auto bs = metrics::seed_of(Model::BS);
  auto seed = seeds::seed_su23_p1(1.0);
  solve::SolveOptions o;
  o.horizon = 3.0;
  const auto gen = solve::solve(seed, Model::TaylorSeed, o);
  CHECK(gen.variable == solve::Variable::T);
  const auto p = gen.at_param(3.0);
  CHECK(std::isnan(p.r));
  const auto cl = solve::solve(seed, Model::BS).at_t(3.0);
  CHECK(std::abs(p.metric.A[0] - cl.metric.A[0]) < 1e-7);
  CHECK(std::abs(p.state.f_plus - cl.state.f_plus) < 1e-7);
  CHECK(bs.b > 0.0);
}

TEST_CASE("solver argument checks") {
  CHECK_THROWS(solve::offset_of_s(Model::BS, -1.0));
  CHECK(std::abs(solve::offset_of_s(Model::BS, 4.0) - (std::sqrt(25.0) - 1.0)) < 1e-14);
  solve::SolveOptions o;
  o.horizon = -1.0;
  CHECK_THROWS(solve::solve(seeds::seed_su23_p1(1.0), Model::BS, o));
  CHECK_THROWS(solve::solve(seeds::seed_su23_p1(1.0), Model::BGGG));
}
