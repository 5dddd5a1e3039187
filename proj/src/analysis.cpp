#include "g2inst/analysis.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace g2inst::analysis {

using metrics::Model;

namespace {

constexpr double kPi = boost::math::constants::pi<double>();

double sq(double x) { return x * x; }

std::vector<double> log_spaced(double a, double b, std::size_t n) {
  std::vector<double> out(n);
  const double la = std::log(a), lb = std::log(b);
  for (std::size_t i = 0; i < n; ++i) out[i] = std::exp(la + (lb - la) * static_cast<double>(i) / static_cast<double>(n - 1));
  out.back() = b;
  return out;
}

// A1 x and d(A1 x)/dr for Clarke (x1 finite) or A^lim (x1 infinite) on BS, at the offset u = r - 1.
struct BsProfileValue {
  double y = 0.0, y_minus_1 = 0.0, dy = 0.0;
};

BsProfileValue clarke_y(double x1, double u) {
  const double r = 1.0 + u, r2 = r * r, r3 = r2 * r;
  BsProfileValue v;
  if (std::isinf(x1)) {
    v.y_minus_1 = -u * (u + 3.0) / (3.0 * r * (r + 1.0));
    v.y = 1.0 + v.y_minus_1;
    v.dy = -2.0 * (2.0 * r + 1.0) / (3.0 * r2 * sq(r + 1.0));
    return v;
  }
  const double k = 3.0 / x1 - 1.0;
  const double D = (u * (u + 2.0) + 3.0 / x1) / r2;
  const double N = u * (u * u + 3.0 * u + 3.0) / r3;
  v.y = (2.0 / 3.0) * N / D;
  v.y_minus_1 = -(r3 + 3.0 * k * r + 2.0) / (3.0 * r3 * D);
  v.dy = (2.0 / 3.0) * (3.0 / (r2 * r2) * D + 2.0 * k / r3 * N) / (D * D);
  return v;
}

double bs_norm_from_y(const BsProfileValue& v, double u) {
  const auto m = metrics::bs_profile_offset(u);
  const double A1 = m.A[0], B1 = m.B[0];
  return 4.5 / sq(B1) * sq(v.dy) + 1.5 * sq(v.y * v.y_minus_1) / sq(sq(A1)) + 1.5 * sq(v.y) / sq(sq(B1));
}

double param_or(const seeds::SingularSeed& s, const char* name, const char* fallback) {
  for (const auto& p : s.params)
    if (p.name == name || p.name == fallback) return p.value;
  throw std::domain_error(std::string("seed has no parameter ") + name);
}

}  // namespace

double curvature_norm_bs(double x, double dxdr, double r) {
  if (!(r > 1.0)) throw std::domain_error("curvature_norm_bs requires r > 1");
  const auto m = metrics::bs_profile(r);
  const double A1 = m.A[0], B1 = m.B[0];
  const double w = 1.0 - 1.0 / (r * r * r);
  const double dA1dr = std::sqrt(w) / 3.0 + 0.5 / (r * r * r * std::sqrt(w));
  const double dy = dA1dr * x + A1 * dxdr;
  return 4.5 / sq(B1) * sq(dy) + 1.5 * sq(x) * sq(A1 * x - 1.0) / sq(A1) + 1.5 * sq(A1 * x) / sq(sq(B1));
}

CurvatureParts curvature_parts_general(const StateFull& s, const StateFull& sdot, const MetricProfile& m) {
  const auto c = instantons::connection_data(s, sdot, m);
  const auto frame = m.frame();
  CurvatureParts p;
  p.slice = calculus::norm_sq(calculus::curvature(c.a_plus, c.a_minus), frame);
  p.dt = calculus::norm_sq(calculus::connection_form(c.adot_plus, c.adot_minus), frame);
  return p;
}

CurvatureParts curvature_parts(const StateFull& s, const StateFull& sdot, const MetricProfile& m) {
  if (s.f_minus != 0.0 || s.g_minus != 0.0) return curvature_parts_general(s, sdot, m);
  const double A1 = m.A[0], A2 = m.A[1], B1 = m.B[0], B2 = m.B[1];
  const double f = s.f_plus, g = s.g_plus;
  // The su(2) norm |T_i|^2 = 2 doubles every term relative to the unit-normalized expressions.
  CurvatureParts p;
  p.slice = 0.5 * sq(g * g - A1 / sq(A2) * f) + sq(g) * sq(f - 1.0 / A1) + sq(A1 * f) / (2.0 * sq(sq(B2))) +
            sq(A2 * g) / sq(B1 * B2);
  p.dt = 0.5 * sq(g * g - A1 * f / sq(A2) + A1 * f / sq(B2)) + sq(g) * sq(f - 1.0 / A1 + A2 / (B1 * B2));
  return p;
}

double curvature_norm_full(const StateFull& s, const StateFull& sdot, const MetricProfile& m) {
  return curvature_parts(s, sdot, m).total();
}

PowerFit fit_power(const std::vector<double>& t, const std::vector<double>& y) {
  if (t.size() != y.size() || t.size() < 3) throw std::invalid_argument("power fit needs at least 3 samples");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(t[i] > 0.0) || !(y[i] > 0.0)) throw std::domain_error("power fit needs positive samples");
    const double lx = std::log(t[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double icpt = (sy - slope * sx) / n;
  double res = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) res += sq(std::log(y[i]) - icpt - slope * std::log(t[i]));
  return {-slope, std::exp(icpt), std::sqrt(res / n)};
}

CurvatureReport curvature_report(const solve::InstantonRun& run) {
  CurvatureReport rep;
  rep.samples.reserve(run.points.size());
  double sup = 0.0;
  for (const auto& p : run.points) {
    const auto parts = curvature_parts(p.state, p.dstate, p.metric);
    rep.samples.push_back({p.t, parts.slice, parts.dt, parts.total()});
    sup = std::max(sup, parts.total());
  }
  rep.sup_norm = std::sqrt(sup);
  if (run.trajectory.stop.kind == integrator::StopKind::ReachedEnd && !run.points.empty()) {
    const double t_end = run.points.back().t, t0 = run.points.front().t;
    if (t_end > 4.0 * std::max(t0, 1.0)) {
      std::vector<double> ts, ys;
      for (double t : log_spaced(t_end / 2.0, t_end, 40)) {
        const auto p = run.at_t(t);
        const double v = curvature_parts(p.state, p.dstate, p.metric).total();
        if (v > 0.0) {
          ts.push_back(p.t);
          ys.push_back(std::sqrt(v));
        }
      }
      if (ts.size() >= 10) rep.decay_exponent = fit_power(ts, ys).exponent;
    }
  }
  return rep;
}

double energy_limit() { return 16.0 * std::pow(kPi, 4) / (3.0 * std::sqrt(3.0)); }

double energy_density_difference(double x1, double u) {
  if (u == 0.0) return 0.0;
  const double r = 1.0 + u;
  const double vol = 8.0 * r * r * r * u * (u * u + 3.0 * u + 3.0) * 4.0 * std::pow(kPi, 4) / (81.0 * std::sqrt(3.0));
  return (bs_norm_from_y(clarke_y(x1, u), u) - bs_norm_from_y(clarke_y(INFINITY, u), u)) * vol;
}

double energy_difference(double x1, double r_max) {
  if (!(x1 > 0.0)) throw std::domain_error("energy_difference requires x1 > 0");
  if (!(r_max > 1.0)) throw std::domain_error("energy_difference requires r_max > 1");
  const double u_max = r_max - 1.0;
  std::vector<double> cuts{0.0};
  for (double b = 1e-2 / x1; b < u_max; b *= 4.0) cuts.push_back(b);
  cuts.push_back(u_max);
  auto f = [x1](double u) { return u > 0.0 ? energy_density_difference(x1, u) : 0.0; };
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, cuts[i], cuts[i + 1], 10, 1e-13);
  return total;
}

Holonomy holonomy_infinity(const solve::InstantonRun& run) {
  if (run.variable != solve::Variable::S) throw std::domain_error("holonomy needs a P1 run integrated in s");
  if (run.trajectory.stop.kind != integrator::StopKind::ReachedEnd)
    throw std::domain_error("holonomy needs a run that reached its horizon");
  const double s = run.trajectory.t_end();
  Holonomy h;
  h.tail = {run.at_param(s / 4.0).F, run.at_param(s / 2.0).F, run.at_param(s).F};
  const double d1 = h.tail[1] - h.tail[0], d2 = h.tail[2] - h.tail[1];
  const double scale = std::max(1.0, std::abs(h.tail[2]));
  if (std::abs(d2) <= 1e-14 * scale || d2 == d1) {
    h.F_inf = h.tail[2];
  } else {
    if (std::abs(d2) > std::abs(d1)) throw std::domain_error("F does not converge along the tail");
    h.F_inf = h.tail[2] - d2 * d2 / (d2 - d1);
  }
  h.angle = h.F_inf - std::floor(h.F_inf);
  const double f1 = param_or(run.seed, "f1", "x1"), g1 = param_or(run.seed, "g1", "x1");
  const double disc = sq(2.0 * f1 - 1.0) - sq(2.0 * g1);
  h.bracket_low = disc >= 0.0 ? 1.0 + std::sqrt(disc) : std::nan("");
  h.bracket_high = 2.0 * f1;
  const double tol = 1e-9 * scale;
  h.in_bracket = disc >= 0.0 && h.F_inf >= h.bracket_low - tol && h.F_inf <= h.bracket_high + tol;
  return h;
}

double distance_to_limit(const solve::Point& p, const LimitState& lim) {
  const auto& m = p.metric;
  const auto& L = lim.coefficients;
  const double d = sq(m.A[0] * p.state.f_plus - L[0]) / (2.0 * sq(m.A[0])) +
                   sq(m.A[1] * p.state.g_plus - L[1]) / sq(m.A[1]) +
                   sq(m.B[0] * p.state.f_minus - L[2]) / (2.0 * sq(m.B[0])) +
                   sq(m.B[1] * p.state.g_minus - L[3]) / sq(m.B[1]);
  return std::sqrt(d);
}

RateFit asymptotic_rate(const solve::InstantonRun& run, const LimitState& lim, std::optional<double> t_from) {
  if (run.trajectory.stop.kind != integrator::StopKind::ReachedEnd || run.points.empty())
    throw std::domain_error("asymptotic rate needs a run that reached its horizon");
  RateFit out;
  out.t_to = run.points.back().t;
  out.t_from = t_from.value_or(out.t_to / 2.0);
  if (!(out.t_from > 0.0 && out.t_from < out.t_to)) throw std::domain_error("fit window outside the run");
  std::vector<double> ts, ds;
  for (double t : log_spaced(out.t_from, out.t_to, 60)) {
    const auto p = run.at_t(t);
    const double d = distance_to_limit(p, lim);
    if (d > 0.0) {
      ts.push_back(p.t);
      ds.push_back(d);
    }
  }
  if (ts.size() < 10) throw std::domain_error("trajectory does not approach the limit");
  out.samples = ts.size();
  out.fit = fit_power(ts, ds);
  if (!(out.fit.exponent > 0.0)) throw std::domain_error("trajectory does not converge to the limit");
  return out;
}

double bubbling_compare(double x1, double lambda) {
  if (!(x1 > 0.0) || !(lambda > 0.0)) throw std::domain_error("bubbling_compare requires x1 > 0 and lambda > 0");
  const double delta = std::sqrt(2.0 * lambda / x1);
  const auto map = solve::coordinate_map(Model::BS, 50.0 + 2.0 * delta);
  auto diff = [&](double t) {
    const double u = map->offset_of_t(delta * t);
    const double l = lambda * t * t;
    return std::abs(clarke_y(x1, u).y - l / (1.0 + l));
  };
  constexpr int kGrid = 4000;
  double best = 0.0, t_best = 1.0;
  for (int i = 1; i <= kGrid; ++i) {
    const double t = static_cast<double>(i) / kGrid;
    const double v = diff(t);
    if (v > best) {
      best = v;
      t_best = t;
    }
  }
  double a = std::max(t_best - 1.0 / kGrid, 1e-12), b = std::min(t_best + 1.0 / kGrid, 1.0);
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int it = 0; it < 80; ++it) {
    const double c = b - phi * (b - a), d = a + phi * (b - a);
    if (diff(c) > diff(d))
      b = d;
    else
      a = c;
  }
  return std::max(best, diff(0.5 * (a + b)));
}

std::string to_string(Tag t) {
  switch (t) {
    case Tag::GlobalBoundedCurvature: return "GlobalBoundedCurvature";
    case Tag::CurvatureUnbounded: return "CurvatureUnbounded";
    case Tag::FiniteBlowUp: return "FiniteBlowUp";
    case Tag::Inconclusive: return "Inconclusive";
  }
  return "?";
}

Verdict classify(const solve::InstantonRun& run, const CurvatureReport& curvature, const ClassifyOptions& options) {
  Verdict v;
  const auto& stop = run.trajectory.stop;
  auto& ev = v.evidence;
  ev["stop"] = integrator::to_string(stop.kind);
  ev["stop_param"] = stop.t;
  ev["sup_curvature"] = curvature.sup_norm;
  if (curvature.decay_exponent) ev["decay_exponent"] = *curvature.decay_exponent;
  if (!run.points.empty()) {
    ev["F_end"] = run.points.back().F;
    ev["G_end"] = run.points.back().G;
  }

  if (stop.kind == integrator::StopKind::FiniteBlowUp) {
    v.tag = Tag::FiniteBlowUp;
    return v;
  }
  if (stop.kind == integrator::StopKind::ExponentialGrowth) {
    ev["growth_rate"] = stop.rate;
    v.tag = Tag::CurvatureUnbounded;
    return v;
  }
  if (!std::isfinite(curvature.sup_norm) || curvature.sup_norm > options.curvature_threshold) {
    v.tag = Tag::CurvatureUnbounded;
    return v;
  }
  if (stop.kind != integrator::StopKind::ReachedEnd || run.points.size() < 2) {
    v.tag = Tag::Inconclusive;
    return v;
  }

  const double p0 = run.trajectory.t_begin(), p1 = run.trajectory.t_end();
  const auto a = run.at_param(p1 - options.tail_fraction * (p1 - p0));
  const auto b = run.at_param(p1);
  auto settles = [&](double qa, double qb) {
    return std::abs(qb) <= std::abs(qa) || std::abs(qb - qa) <= options.tail_tolerance * std::max(1.0, std::abs(qb));
  };
  const double ca = curvature_norm_full(a.state, a.dstate, a.metric);
  const double cb = curvature_norm_full(b.state, b.dstate, b.metric);
  nlohmann::json tail;
  tail["F"] = settles(a.F, b.F);
  tail["G"] = settles(a.G, b.G);
  tail["f_minus"] = settles(a.state.f_minus, b.state.f_minus);
  tail["g_minus"] = settles(a.state.g_minus, b.state.g_minus);
  tail["curvature"] = cb <= ca * (1.0 + options.tail_tolerance) || std::sqrt(cb) <= options.tail_tolerance;
  if (run.variable == solve::Variable::S && b.G != 0.0) {
    const double h_inf = run.model == Model::BGGG ? 1.0 : 0.0;
    ev["G_log_rate_limit"] = h_inf - b.F;
    tail["G_rate"] = h_inf - b.F < 0.0;
  }
  bool ok = true;
  for (const auto& [key, val] : tail.items()) ok = ok && val.get<bool>();
  ev["tail_checks"] = tail;
  v.tag = ok ? Tag::GlobalBoundedCurvature : Tag::Inconclusive;
  return v;
}

nlohmann::json to_json(const CurvatureReport& c, bool with_samples) {
  nlohmann::json j;
  j["sup_norm"] = c.sup_norm;
  j["decay_exponent"] = c.decay_exponent ? nlohmann::json(*c.decay_exponent) : nlohmann::json(nullptr);
  if (with_samples) {
    j["samples"] = nlohmann::json::array();
    for (const auto& s : c.samples) j["samples"].push_back({{"t", s.t}, {"slice", s.slice}, {"dt", s.dt}});
  }
  return j;
}

nlohmann::json to_json(const Holonomy& h) {
  nlohmann::json j;
  j["F_inf"] = h.F_inf;
  j["angle"] = h.angle;
  j["tail"] = h.tail;
  j["bracket"] = {std::isnan(h.bracket_low) ? nlohmann::json(nullptr) : nlohmann::json(h.bracket_low), h.bracket_high};
  j["in_bracket"] = h.in_bracket;
  return j;
}

nlohmann::json to_json(const Verdict& v) { return {{"tag", to_string(v.tag)}, {"evidence", v.evidence}}; }

}  // namespace g2inst::analysis
