#include "g2inst/solve.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>

namespace g2inst::solve {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool closed(Model m) { return m == Model::BS || m == Model::BGGG; }

double s_of_offset(Model m, double u) { return m == Model::BS ? u * (2.0 + u) / 6.0 : u; }

}  // namespace

std::string to_string(Variable v) {
  switch (v) {
    case Variable::S: return "s";
    case Variable::W: return "w";
    case Variable::T: return "t";
  }
  return "?";
}

integrator::StepControl default_control() {
  integrator::StepControl c;
  c.rel_tol = 1e-12;
  c.abs_tol = 1e-14;
  return c;
}

double offset_of_s(Model m, double s) {
  if (!closed(m)) throw std::domain_error("s is only defined on the closed-form models");
  if (s < 0.0) throw std::domain_error("s must be non-negative");
  if (m == Model::BGGG) return s;
  const double r = std::sqrt(1.0 + 6.0 * s);
  return 6.0 * s / (r + 1.0);
}

std::shared_ptr<const metrics::CoordinateMap> coordinate_map(Model m, double r_max) {
  static std::mutex mu;
  static std::map<std::pair<int, long>, std::shared_ptr<const metrics::CoordinateMap>> cache;
  const long bucket = static_cast<long>(std::ceil(r_max / 50.0));
  const std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{static_cast<int>(m), bucket}];
  if (!slot) {
    const double rm = 50.0 * static_cast<double>(bucket);
    slot = std::make_shared<const metrics::CoordinateMap>(m, rm, static_cast<std::size_t>(400 + rm));
  }
  return slot;
}

Point InstantonRun::make_point(double p, const integrator::State& y) const {
  Point pt;
  pt.param = p;
  if (variable == Variable::S) {
    const double u = offset_of_s(model, p);
    pt.metric = metrics::closed_profile_offset(model, u);
    pt.r = metrics::r_min(model) + u;
    pt.s = p;
    pt.t = map_->t_of_offset(u);
    pt.F = y[0];
    pt.G = y[1];
    const double A1 = pt.metric.A[0];
    pt.state = {A1 * y[0], A1 * y[1], 0.0, 0.0};
  } else if (variable == Variable::W) {
    const double u = p * p;
    pt.metric = metrics::closed_profile_offset(model, u);
    pt.r = metrics::r_min(model) + u;
    pt.s = s_of_offset(model, u);
    pt.t = y[4];
    pt.state = {y[0], y[1], y[2], y[3]};
  } else {
    const auto d = metrics::reduced_metric_rhs(y[0], y[1], y[2], y[3]);
    pt.metric.A = {y[0], y[1], y[1]};
    pt.metric.B = {y[2], y[3], y[3]};
    pt.metric.dA = {d[0], d[1], d[1]};
    pt.metric.dB = {d[2], d[3], d[3]};
    pt.metric.coord_value = p;
    pt.metric.b = seed.metric.b;
    pt.metric.c = seed.metric.c;
    pt.r = kNaN;
    pt.s = kNaN;
    pt.t = p;
    pt.state = {y[4], y[5], y[6], y[7]};
  }
  if (variable != Variable::S) {
    pt.F = pt.state.f_plus / pt.metric.A[0];
    pt.G = pt.state.g_plus / pt.metric.A[0];
  }
  pt.dstate = instantons::rhs_full(pt.state, pt.metric);
  return pt;
}

Point InstantonRun::at_param(double p) const { return make_point(p, trajectory.at(p)); }

double InstantonRun::param_of_t(double t) const {
  if (variable == Variable::T) return t;
  if (!map_) throw std::logic_error("run has no coordinate map");
  const double u = map_->offset_of_t(t);
  return variable == Variable::S ? s_of_offset(model, u) : std::sqrt(u);
}

Point InstantonRun::at_t(double t) const { return at_param(param_of_t(t)); }

InstantonRun solve(const seeds::SingularSeed& seed, Model model, const SolveOptions& options) {
  if (!(options.horizon > 0.0)) throw std::domain_error("horizon must be positive");
  InstantonRun run;
  run.model = model;
  run.seed = seed;
  auto control = options.control;
  integrator::Monitors monitors;
  integrator::Rhs rhs;
  integrator::State y0;
  double p0 = 0.0, p1 = 0.0;

  if (closed(model)) {
    const auto ms = metrics::seed_of(model);
    if (std::abs(ms.b - seed.metric.b) > 1e-12 || std::abs(ms.c - seed.metric.c) > 1e-12)
      throw std::invalid_argument("seed metric data do not match the " + metrics::to_string(model) + " metric");
  }

  if (closed(model) && seed.bundle == seeds::Bundle::P1) {
    run.variable = Variable::S;
    const double r_h = metrics::r_of_s(model, options.horizon);
    run.map_ = coordinate_map(model, r_h + 10.0);
    const double u0 = run.map_->offset_of_t(seed.t_start);
    const auto prof = metrics::closed_profile_offset(model, u0);
    const auto st = seed.state_at_start;
    y0 = {st.f_plus / prof.A[0], st.g_plus / prof.A[0]};
    p0 = s_of_offset(model, u0);
    p1 = options.horizon;
    if (!(p1 > p0)) throw std::domain_error("horizon lies inside the seed region");
    if (model == Model::BS) {
      rhs = [](double, const integrator::State& y, integrator::State& d) {
        d[0] = -y[1] * y[1];
        d[1] = -y[0] * y[1];
      };
      monitors.conserved = [](double, const integrator::State& y) { return y[0] * y[0] - y[1] * y[1]; };
    } else {
      rhs = [](double s, const integrator::State& y, integrator::State& d) {
        const auto r = instantons::rhs_fg({y[0], y[1], std::nullopt}, instantons::h_of_r(2.25 + s));
        d[0] = r.F;
        d[1] = r.G;
      };
    }
    monitors.growth_component = 1;
  } else if (closed(model)) {
    run.variable = Variable::W;
    run.map_ = coordinate_map(model, options.horizon + 30.0);
    const double w0 = std::sqrt(run.map_->offset_of_t(seed.t_start));
    const auto st = seed.state_at_start;
    y0 = {st.f_plus, st.g_plus, st.f_minus, st.g_minus, seed.t_start};
    p0 = w0;
    p1 = std::sqrt(run.map_->offset_of_t(options.horizon));
    control.growth_window = std::numeric_limits<double>::infinity();
    const bool diagonal = seed.symmetry == seeds::Symmetry::SU23;
    rhs = [model, diagonal](double w, const integrator::State& y, integrator::State& d) {
      const auto prof = metrics::closed_profile_offset(model, w * w);
      const double jac = metrics::dt_dw(model, w);
      const auto ds = instantons::rhs_full({y[0], y[1], y[2], y[3]}, prof);
      d[0] = ds.f_plus * jac;
      d[1] = ds.g_plus * jac;
      d[2] = ds.f_minus * jac;
      d[3] = ds.g_minus * jac;
      d[4] = jac;
      if (diagonal) {
        d[0] = d[1] = 0.5 * (d[0] + d[1]);
        d[2] = d[3] = 0.5 * (d[2] + d[3]);
      }
    };
  } else {
    run.variable = Variable::T;
    const auto m0 = metrics::taylor_seed_metric(seed.metric.b, seed.metric.c, seed.t_start);
    const auto st = seed.state_at_start;
    y0 = {m0.A[0], m0.A[1], m0.B[0], m0.B[1], st.f_plus, st.g_plus, st.f_minus, st.g_minus};
    p0 = seed.t_start;
    p1 = options.horizon;
    control.growth_window = std::numeric_limits<double>::infinity();
    control.rel_tol = std::min(control.rel_tol, metrics::metric_step_control().rel_tol);
    rhs = [](double, const integrator::State& y, integrator::State& d) {
      const auto dm = metrics::reduced_metric_rhs(y[0], y[1], y[2], y[3]);
      MetricProfile prof;
      prof.A = {y[0], y[1], y[1]};
      prof.B = {y[2], y[3], y[3]};
      prof.dA = {dm[0], dm[1], dm[1]};
      prof.dB = {dm[2], dm[3], dm[3]};
      const auto ds = instantons::rhs_full({y[4], y[5], y[6], y[7]}, prof);
      std::copy(dm.begin(), dm.end(), d.begin());
      d[4] = ds.f_plus;
      d[5] = ds.g_plus;
      d[6] = ds.f_minus;
      d[7] = ds.g_minus;
    };
  }

  run.trajectory = integrator::integrate(rhs, p0, y0, p1, control, monitors);
  run.points.reserve(run.trajectory.samples.size());
  for (const auto& smp : run.trajectory.samples) run.points.push_back(run.make_point(smp.t, smp.y));
  return run;
}

}  // namespace g2inst::solve
