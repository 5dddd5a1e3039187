#include "g2inst/verify.hpp"

#include "g2inst/analysis.hpp"
#include "g2inst/calculus.hpp"
#include "g2inst/rng.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

namespace g2inst::verify {

namespace {

using calculus::InvariantForm;
using calculus::LieValue;
using calculus::ValueKind;
using metrics::Model;
using RF = InvariantForm<Rational>;
using RL = LieValue<Rational>;

Check below(std::string name, double value, double bound, std::string detail = {}) {
  return {std::move(name), value, bound, std::isfinite(value) && value < bound, std::move(detail)};
}

Check exact(std::string name, std::size_t mismatches, std::string detail = {}) {
  return {std::move(name), static_cast<double>(mismatches), 0.0, mismatches == 0, std::move(detail)};
}

SuiteReport timed(const std::string& name, const std::function<void(std::vector<Check>&)>& body) {
  SuiteReport r;
  r.suite = name;
  const auto t0 = std::chrono::steady_clock::now();
  body(r.checks);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

Rational random_rational(CounterRng& rng) { return Rational(rng.integer(-9, 9), rng.integer(1, 5)); }

RL random_su2(CounterRng& rng) { return RL::su2(random_rational(rng), random_rational(rng), random_rational(rng)); }

calculus::CoframeMetric<Rational> rational_metric(CounterRng& rng) {
  calculus::CoframeMetric<Rational> m;
  for (auto& a : m.A) a = Rational(rng.integer(1, 9), rng.integer(1, 4));
  for (auto& b : m.B) b = Rational(rng.integer(1, 9), rng.integer(1, 4));
  return m;
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

bool same_multiset(std::vector<double> a, std::vector<double> b) {
  if (a.size() != b.size()) return false;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  for (std::size_t k = 0; k < a.size(); ++k)
    if (std::abs(a[k] - b[k]) > 1e-12) return false;
  return true;
}

std::string list(const std::vector<double>& v) {
  std::string s = "{";
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? ", " : "") + fmt(v[k]);
  return s + "}";
}

// Scaled residual of the SU(2)^3 closed forms at offset u.
struct ClosedResidual {
  double reduced = 0.0, unreduced = 0.0;
};

ClosedResidual closed_residual(const instantons::ClosedPoint& cp, const metrics::MetricProfile& m) {
  const auto rhs = instantons::rhs_su23(cp.state, m.A[0], m.B[0], m.dA[0]);
  const double scale = 1.0 + std::abs(cp.state.x) + std::abs(cp.dt.x);
  return {(std::abs(rhs.x - cp.dt.x) + std::abs(rhs.y - cp.dt.y)) / scale,
          instantons::unreduced_residual(instantons::embed(cp.state), instantons::embed(cp.dt), m) / scale};
}

// Abelian plus components in closed form: d log a / dr.
double abelian_log_slope(Model model, int i, double r) {
  if (model == Model::BS) return 3.0 * r * r / (r * r * r - 1.0) - 1.0 / r;
  if (i == 0) return 1.0 / (r - 2.25) + 1.0 / (r + 2.25) - 1.0 / (r - 0.75) - 1.0 / (r + 0.75);
  return 1.0 / (r - 2.25) + 1.0 - 0.5 / r - 2.0 / (r + 2.25);
}

}  // namespace

bool SuiteReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"calculus", "metrics", "closed-forms", "seeds",
                                              "energy",   "bubbling", "sasaki"};
  return names;
}

SuiteReport run_suite(const std::string& name, const Options& options) {
  if (name == "calculus") return calculus_suite();
  if (name == "metrics") return metrics_suite();
  if (name == "closed-forms") return closed_forms_suite();
  if (name == "seeds") return seeds_suite();
  if (name == "energy") return energy_suite(options);
  if (name == "bubbling") return bubbling_suite();
  if (name == "sasaki") return sasaki_suite();
  throw std::invalid_argument("unknown suite: " + name);
}

SuiteReport calculus_suite() {
  return timed("calculus", [](std::vector<Check>& out) {
    using calculus::d_invariant;
    std::size_t bad = 0;
    for (calculus::Mask m = 0; m <= calculus::kFullMask; ++m)
      if (!d_invariant(d_invariant(RF::basis(m))).is_zero()) ++bad;
    CounterRng rng(101);
    for (int deg = 0; deg <= 4; ++deg)
      for (int n = 0; n < 5; ++n) {
        RF f(deg, ValueKind::Scalar);
        for (calculus::Mask m = 0; m <= calculus::kFullMask; ++m)
          if (calculus::degree_of(m) == deg) f.set(m, RL::scalar(random_rational(rng)));
        if (!d_invariant(d_invariant(f)).is_zero()) ++bad;
      }
    out.push_back(exact("d^2 = 0 on all basis forms and 25 random forms", bad));

    bad = 0;
    for (int trial = 0; trial < 3; ++trial) {
      const auto g = rational_metric(rng);
      for (calculus::Mask m = 0; m <= calculus::kFullMask; ++m) {
        const int k = calculus::degree_of(m);
        const Rational sign = ((k * (6 - k)) % 2 == 0) ? 1 : -1;
        if (calculus::hodge_star(calculus::hodge_star(RF::basis(m), g), g) != sign * RF::basis(m)) ++bad;
      }
    }
    out.push_back(exact("** = (-1)^{k(6-k)} on all basis forms, 3 rational metrics", bad));

    bad = 0;
    for (int n = 0; n < 100; ++n) {
      std::array<RL, 3> ap, am;
      for (auto& v : ap) v = random_su2(rng);
      for (auto& v : am) v = random_su2(rng);
      if (calculus::curvature(ap, am) != calculus::curvature_closed_form(ap, am)) ++bad;
    }
    out.push_back(exact("closed curvature formula = da + [a^a]/2, 100 rational draws", bad));
  });
}

SuiteReport metrics_suite() {
  return timed("metrics", [](std::vector<Check>& out) {
    for (Model model : {Model::BS, Model::BGGG}) {
      double ode = 0.0, flow = 0.0, half_flat = 0.0;
      for (int i = 1; i <= 50; ++i) {
        const double u = 0.02 * i * i;
        const auto p = metrics::closed_profile_offset(model, u);
        double scale = 1.0;
        for (int k = 0; k < 3; ++k) scale = std::max({scale, p.A[k], p.B[k]});
        ode = std::max(ode, metrics::metric_ode_residual(p) / scale);
        const auto h = calculus::hitchin_residual(p.jet());
        flow = std::max(flow, h.total() / (scale * scale));
        half_flat = std::max(half_flat, (h.half_flat_Omega1 + h.half_flat_omega2) / (scale * scale * scale));
      }
      const auto name = metrics::to_string(model);
      out.push_back(below(name + " metric ODE residual, 50 points", ode, 1e-10));
      out.push_back(below(name + " Hitchin flow residual, 50 points", flow, 1e-10));
      out.push_back(below(name + " half-flat residual, 50 points", half_flat, 1e-10));
    }
  });
}

SuiteReport closed_forms_suite() {
  return timed("closed-forms", [](std::vector<Check>& out) {
    for (double x1 : {0.1, 1.0, 10.0}) {
      ClosedResidual worst;
      for (int i = 1; i <= 20; ++i) {
        const double u = 0.01 * i * i;
        const auto c = closed_residual(instantons::clarke_closed_form_offset(x1, u), metrics::bs_profile_offset(u));
        worst.reduced = std::max(worst.reduced, c.reduced);
        worst.unreduced = std::max(worst.unreduced, c.unreduced);
      }
      out.push_back(below("Clarke x1 = " + fmt(x1) + " reduced ODE, 20 slices", worst.reduced, 1e-9));
      out.push_back(below("Clarke x1 = " + fmt(x1) + " F_A ^ psi, 20 slices", worst.unreduced, 1e-9));
    }
    ClosedResidual worst;
    for (int i = 1; i <= 20; ++i) {
      const double u = 0.01 * i * i;
      const auto c = closed_residual(instantons::alim_closed_form_offset(u), metrics::bs_profile_offset(u));
      worst.reduced = std::max(worst.reduced, c.reduced);
      worst.unreduced = std::max(worst.unreduced, c.unreduced);
    }
    out.push_back(below("A^lim reduced ODE, 20 slices", worst.reduced, 1e-9));
    out.push_back(below("A^lim F_A ^ psi, 20 slices", worst.unreduced, 1e-9));

    for (Model model : {Model::BS, Model::BGGG}) {
      const metrics::CoordinateMap map(model);
      instantons::AbelianState init;
      init.plus = {1.0, 1.0, 1.0};
      init.minus = {1.0, 1.0, 1.0};
      double reduced = 0.0, unreduced = 0.0;
      for (int i = 1; i <= 20; ++i) {
        const double t = 0.05 * std::pow(1.3, i);
        const double u = map.offset_of_t(t);
        const auto m = metrics::closed_profile_offset(model, u);
        const auto k = instantons::abelian_rates(m);
        const double drdt = metrics::drdt_offset(model, u);
        for (int c = 0; c < 3; ++c) {
          const double slope = drdt * abelian_log_slope(model, c, u + metrics::r_min(model));
          reduced = std::max(reduced, std::abs(slope + k.plus[static_cast<std::size_t>(c)]) / (1.0 + std::abs(slope)));
        }
        const auto a = instantons::abelian_solution(map, 0.5, init, t);
        instantons::ConnectionData cd;
        double scale = 1.0;
        for (std::size_t c = 0; c < 3; ++c) {
          cd.a_plus[c] = instantons::Lie::su2(a.plus[c], 0.0, 0.0);
          cd.a_minus[c] = instantons::Lie::su2(a.minus[c], 0.0, 0.0);
          cd.adot_plus[c] = instantons::Lie::su2(-k.plus[c] * a.plus[c], 0.0, 0.0);
          cd.adot_minus[c] = instantons::Lie::su2(-k.minus[c] * a.minus[c], 0.0, 0.0);
          scale = std::max({scale, std::abs(a.plus[c]), std::abs(a.minus[c]), std::abs(k.plus[c] * a.plus[c]),
                            std::abs(k.minus[c] * a.minus[c])});
        }
        unreduced = std::max(unreduced, instantons::unreduced_residual(cd, m) / scale);
      }
      const auto name = metrics::to_string(model);
      out.push_back(below(name + " abelian reduced ODE, 20 slices", reduced, 1e-9));
      out.push_back(below(name + " abelian F_A ^ psi, 20 slices", unreduced, 1e-9));
    }
  });
}

std::vector<Check> indicial_checks() {
  using seeds::Bundle;
  using seeds::Symmetry;
  std::vector<Check> out;
  auto table = [&](const std::string& name, const seeds::IndicialData& d, const std::vector<double>& expect) {
    const bool ok = same_multiset(d.eigenvalues, expect);
    out.push_back({name, ok ? 0.0 : 1.0, 0.0, ok, "computed " + list(d.eigenvalues) + ", expected " + list(expect)});
  };
  table("P1 indicial eigenvalues", seeds::indicial_data(Bundle::P1, Symmetry::SU2xU1), {-2, -2, -6, -6});
  table("P_id indicial eigenvalues", seeds::indicial_data(Bundle::Pid, Symmetry::SU2xU1, 0.8), {-8, -6, -3, -2});
  table("SU(2)^3 P_id indicial eigenvalues", seeds::indicial_data(Bundle::Pid, Symmetry::SU23, 0.8), {-2, -4});
  return out;
}

SuiteReport seeds_suite() {
  return timed("seeds", [](std::vector<Check>& out) {
    for (double x1 : {0.5, 1.0, 2.0}) {
      const auto run = solve::solve(seeds::seed_su23_p1(x1), Model::BS);
      const auto p = run.at_t(10.0);
      const double x = instantons::clarke_closed_form(x1, p.r).state.x;
      const double err = std::max(std::abs(p.state.f_plus - x), std::abs(p.state.g_plus - x)) / std::abs(x);
      out.push_back(below("P1 seed x1 = " + fmt(x1) + " vs Clarke at t = 10 (relative)", err, 1e-8));
    }
    solve::SolveOptions o;
    o.horizon = 20.0;
    const auto run = solve::solve(seeds::seed_su23_pid(0.0), Model::BS, o);
    const auto p = run.at_t(10.0);
    const double x = instantons::alim_closed_form(p.r).state.x;
    const double err = std::max({std::abs(p.state.f_plus - x), std::abs(p.state.g_plus - x), std::abs(p.state.f_minus),
                                 std::abs(p.state.g_minus)}) /
                       std::abs(x);
    out.push_back(below("P_id seed y0 = 0 vs A^lim at t = 10 (relative)", err, 1e-8));
    for (auto& c : indicial_checks()) out.push_back(std::move(c));
  });
}

double q20_numeric() {
  // N(x1, u) = (|F_{A^x1}|^2 - |F_{A^lim}|^2) (r+1)^4 r^6 (x1 (r^2-1) + 3)^4 / 6 is a polynomial of degree 4 in x1.
  auto numerator = [](double x1, double u) {
    const double r = 1.0 + u;
    const double drdt = metrics::drdt_offset(Model::BS, u);
    const auto c = instantons::clarke_closed_form_offset(x1, u);
    const auto l = instantons::alim_closed_form_offset(u);
    const double d = analysis::curvature_norm_bs(c.state.x, c.dt.x / drdt, r) -
                     analysis::curvature_norm_bs(l.state.x, l.dt.x / drdt, r);
    return d * std::pow(r + 1.0, 4) * std::pow(r, 6) * std::pow(x1 * (r * r - 1.0) + 3.0, 4) / 6.0;
  };
  // x1^2 coefficient from 5 nodes (Lagrange basis), then quadratic extrapolation in u.
  const std::array<double, 5> nodes{-2.0, -1.0, 0.0, 1.0, 2.0};
  auto q2 = [&](double u) {
    std::array<double, 5> v{};
    for (std::size_t k = 0; k < 5; ++k) v[k] = numerator(nodes[k], u);
    // Second-derivative-at-0 / 2 stencil, exact for quartics: c2 = (-f(2) + 16 f(1) - 30 f(0) + 16 f(-1) - f(-2)) / 24.
    return (-v[4] + 16.0 * v[3] - 30.0 * v[2] + 16.0 * v[1] - v[0]) / 24.0;
  };
  const double h = 1e-3;
  const double a = q2(h), b = q2(2 * h), c = q2(3 * h);
  return 3.0 * a - 3.0 * b + c;
}

SuiteReport energy_suite(const Options& options) {
  return timed("energy", [&](std::vector<Check>& out) {
    const double limit = analysis::energy_limit();
    std::vector<double> xs;
    for (double x = 1e2; x <= options.x1 * (1 + 1e-12); x *= 10.0) xs.push_back(x);
    if (xs.empty() || xs.back() != options.x1) xs.push_back(options.x1);
    std::vector<double> dev;
    std::string detail;
    for (double x : xs) {
      const double e = analysis::energy_difference(x, options.r_max);
      dev.push_back(std::abs(e / limit - 1.0));
      detail += (detail.empty() ? "" : ", ") + ("E(" + fmt(x) + ") = " + fmt(e));
    }
    std::size_t nonmono = 0;
    for (std::size_t k = 1; k < dev.size(); ++k)
      if (!(dev[k] < dev[k - 1])) ++nonmono;
    out.push_back(below("energy_difference(x1 = " + fmt(options.x1) + ") relative to 16 pi^4 / (3 sqrt 3)", dev.back(),
                        0.02, detail + "; limit " + fmt(limit)));
    out.push_back(exact("sequence approaches the limit monotonically", nonmono));
    const double q = q20_numeric();
    out.push_back(below("q_{2,0} from the curvature norm vs 2592", std::abs(q / 2592.0 - 1.0), 1e-4, "q20 = " + fmt(q)));
  });
}

SuiteReport bubbling_suite() {
  return timed("bubbling", [](std::vector<Check>& out) {
    std::vector<double> ratios;
    for (double l : {0.01, 0.02, 0.05, 0.1})
      for (double x1 : {10.0, 1e2, 1e3, 1e4}) ratios.push_back(analysis::bubbling_compare(x1, l) * x1 / (l * l));
    double lc = 0.0;
    for (double r : ratios) lc += std::log(r);
    const double c = std::exp(lc / static_cast<double>(ratios.size()));
    double worst = 0.0;
    for (double r : ratios) worst = std::max(worst, std::abs(r / c - 1.0));
    out.push_back(below("single-constant fit of sup-norm ~ c lambda^2 / x1 on the 4x4 grid", worst, 0.1, "c = " + fmt(c)));
    out.push_back(below("sup-norm at lambda = 1, x1 = 1e4", analysis::bubbling_compare(1e4, 1.0), 1e-3));
  });
}

SuiteReport sasaki_suite() {
  return timed("sasaki", [](std::vector<Check>& out) {
    for (const auto& c : calculus::sasaki_einstein_check())
      out.push_back({c.name, c.defect, 0.0, c.holds, c.holds ? "" : "largest defect coefficient " + fmt(c.defect)});
  });
}

nlohmann::json to_json(const SuiteReport& r) {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["suite"] = r.suite;
  j["pass"] = r.pass();
  j["seconds"] = r.seconds;
  j["checks"] = nlohmann::json::array();
  for (const auto& c : r.checks)
    j["checks"].push_back({{"name", c.name}, {"value", c.value}, {"bound", c.bound}, {"pass", c.pass}, {"detail", c.detail}});
  return j;
}

std::string format_table(const SuiteReport& r) {
  std::ostringstream os;
  std::size_t w = 0;
  for (const auto& c : r.checks) w = std::max(w, c.name.size());
  for (const auto& c : r.checks) {
    os << (c.pass ? "PASS  " : "FAIL  ") << c.name << std::string(w - c.name.size() + 2, ' ');
    char buf[80];
    std::snprintf(buf, sizeof buf, "%-12.4g <= %-10.3g", c.value, c.bound);
    os << buf;
    if (!c.detail.empty()) os << "  " << c.detail;
    os << '\n';
  }
  char buf[80];
  std::snprintf(buf, sizeof buf, "%s: %s (%.2f s)\n", r.suite.c_str(), r.pass() ? "PASS" : "FAIL", r.seconds);
  os << buf;
  return os.str();
}

}  // namespace g2inst::verify
