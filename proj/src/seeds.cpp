#include "g2inst/seeds.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace g2inst::seeds {

namespace {

constexpr double kSeedTolerance = 1e-12;

void require_b(double b) {
  if (b == 0.0) throw std::domain_error("seed requires b != 0");
}

// Smallest t at which the first omitted term of any series is estimated to reach
// kSeedTolerance relative to its leading term, capped by the metric seed start.
double adaptive_t_start(const std::array<Series, 4>& series, double b) {
  double kappa = 1.0 / std::abs(b);
  for (const auto& s : series) {
    const auto lead = std::find_if(s.terms.begin(), s.terms.end(), [](const auto& p) { return p.second != 0.0; });
    if (lead == s.terms.end()) continue;
    for (auto it = std::next(lead); it != s.terms.end(); ++it) {
      if (it->second == 0.0) continue;
      kappa = std::max(kappa, std::pow(std::abs(it->second / lead->second), 1.0 / (it->first - lead->first)));
    }
  }
  double t = std::numeric_limits<double>::infinity();
  for (const auto& s : series) {
    const auto lead = std::find_if(s.terms.begin(), s.terms.end(), [](const auto& p) { return p.second != 0.0; });
    if (lead == s.terms.end()) continue;
    const int gap = s.terms.back().first + 2 - lead->first;
    t = std::min(t, std::pow(kSeedTolerance, 1.0 / gap) / kappa);
  }
  if (!std::isfinite(t)) t = 0.01 / kappa;
  return std::min(t, 0.03 * std::abs(b));
}

void finish(SingularSeed& s) {
  s.t_start = adaptive_t_start(s.series, s.metric.b);
  s.state_at_start = s.state(s.t_start);
  const double A1 = metrics::taylor_seed_metric(s.metric.b, s.metric.c, s.t_start).A[0];
  s.regular_at_start = {A1 * s.state_at_start.f_plus, A1 * s.state_at_start.g_plus, s.state_at_start.f_minus,
                        s.state_at_start.g_minus};
}

double c2_of(double b, double c) { return -(8 * b * b * c + 1) / (16 * b * b); }

}  // namespace

std::string to_string(Bundle b) { return b == Bundle::P1 ? "P1" : "Pid"; }
std::string to_string(Symmetry s) { return s == Symmetry::SU23 ? "SU23" : "SU2xU1"; }

double Series::value(double t) const {
  double v = 0.0;
  for (const auto& [p, c] : terms) v += c * std::pow(t, p);
  return v;
}

double Series::derivative(double t) const {
  double v = 0.0;
  for (const auto& [p, c] : terms)
    if (p != 0) v += p * c * std::pow(t, p - 1);
  return v;
}

StateFull SingularSeed::state(double t) const {
  return {series[0].value(t), series[1].value(t), series[2].value(t), series[3].value(t)};
}

StateFull SingularSeed::state_dt(double t) const {
  return {series[0].derivative(t), series[1].derivative(t), series[2].derivative(t), series[3].derivative(t)};
}

double SingularSeed::param(const std::string& name) const {
  for (const auto& p : params)
    if (p.name == name) return p.value;
  throw std::out_of_range("seed has no parameter " + name);
}

double SingularSeed::coefficient(const std::string& name) const {
  for (const auto& p : derived)
    if (p.name == name) return p.value;
  throw std::out_of_range("seed has no coefficient " + name);
}

SingularSeed seed_p1(double f1, double g1, double b, double c, double C2_0) {
  require_b(b);
  const double b2 = b * b, b4 = b2 * b2;
  const double u1 = -f1 * (1.0 / (8 * b2) + 2 * C2_0 - c) - g1 * g1 / 2;
  const double u2 = -(g1 / 2) * (1.0 / (4 * b2) + 2 * c + f1);
  const double u13 =
      (2112 * b4 * c * c * f1 + 80 * b4 * f1 * g1 * g1 + 96 * b2 * c * f1 + 20 * b2 * g1 * g1 + 11 * f1) / (320 * b4);
  const double u23 =
      g1 * (1344 * b4 * c * c + 80 * b4 * f1 * f1 + 80 * b4 * g1 * g1 + 192 * b2 * c + 40 * b2 * f1 + 27) / (640 * b4);
  SingularSeed s;
  s.bundle = Bundle::P1;
  s.symmetry = Symmetry::SU2xU1;
  s.params = {{"f1", f1}, {"g1", g1}};
  s.metric = {b, c};
  s.derived = {{"u1_0", u1}, {"u2_0", u2}, {"u13", u13}, {"u23", u23}, {"C2_0", C2_0}};
  s.series = {Series{{{1, f1}, {3, u1}, {5, u13}}}, Series{{{1, g1}, {3, u2}, {5, u23}}}, Series{{{0, 0.0}}},
              Series{{{0, 0.0}}}};
  finish(s);
  return s;
}

SingularSeed seed_p1(double f1, double g1, const metrics::MetricSeed& m) {
  require_b(m.b);
  return seed_p1(f1, g1, m.b, m.c, c2_of(m.b, m.c));
}

SingularSeed seed_su23_p1(double x1) {
  auto s = seed_p1(x1, x1, metrics::seed_of(metrics::Model::BS));
  s.symmetry = Symmetry::SU23;
  s.params = {{"x1", x1}};
  return s;
}

SingularSeed seed_pid(double B0, double b, double c) {
  require_b(b);
  const double b2 = b * b, b4 = b2 * b2, b6 = b4 * b2;
  const double B2 = B0 * B0, B4 = B2 * B2, B6 = B4 * B2;
  const double C2 = c2_of(b, c);
  const double b2p = (B2 - 1.0 / b2) / 4;
  const double u = (35 * b4 * B4 - 80 * b2 * B2 + 1344 * b4 * c * c + 112 * b2 * c + 22) / (480 * b4);
  const double v = B0 / (4 * b2) * (b2 * B2 - 2);
  const double w1 = (1085 * B6 * b6 - 3920 * B4 * b4 + 83328 * B2 * b6 * c * c + 3808 * B2 * b4 * c + 5047 * B2 * b2 +
                     577536 * b6 * c * c * c + 15744 * b4 * c * c + 2784 * b2 * c - 960) /
                    (53760 * b6);
  const double w2 = (1085 * B6 * b6 - 3920 * B4 * b4 - 29568 * B2 * b6 * c * c - 896 * B2 * b4 * c + 5047 * B2 * b2 +
                     771072 * b6 * c * c * c + 120576 * b4 * c * c + 3792 * b2 * c - 1086) /
                    (53760 * b6);
  const double z1 = -B0 * (-65 * B4 * b4 + 200 * B2 * b2 + 768 * b4 * c * c + 32 * b2 * c - 235) / (960 * b4);
  const double z2 = B0 * (65 * B4 * b4 - 200 * B2 * b2 + 384 * b4 * c * c + 16 * b2 * c + 235) / (960 * b4);
  SingularSeed s;
  s.bundle = Bundle::Pid;
  s.symmetry = Symmetry::SU2xU1;
  s.params = {{"b0", B0}};
  s.metric = {b, c};
  s.derived = {{"b2_plus", b2p}, {"u_0", u}, {"v_0", v}, {"w1", w1}, {"w2", w2}, {"z1", z1}, {"z2", z2}};
  s.series = {Series{{{-1, 2.0}, {1, b2p - 4 * c}, {3, u}, {5, w1}}},
              Series{{{-1, 2.0}, {1, b2p - 4 * C2}, {3, u}, {5, w2}}}, Series{{{0, B0}, {2, v}, {4, z1}}},
              Series{{{0, B0}, {2, v}, {4, z2}}}};
  finish(s);
  return s;
}

SingularSeed seed_su23_pid(double y0) {
  const auto bs = metrics::seed_of(metrics::Model::BS);
  auto s = seed_pid(y0, bs.b, bs.c);
  s.symmetry = Symmetry::SU23;
  s.params = {{"y0", y0}};
  return s;
}

IndicialData indicial_data(Bundle bundle, Symmetry symmetry, double b0) {
  IndicialData d{bundle, symmetry, {}, {}, false};
  if (bundle == Bundle::P1) {
    d.matrix = symmetry == Symmetry::SU2xU1
                   ? std::vector<std::vector<double>>{{-2, 0, 0, 0}, {0, -2, 0, 0}, {0, 0, -6, 0}, {0, 0, 0, -6}}
                   : std::vector<std::vector<double>>{{-2, 0}, {0, -6}};
  } else if (symmetry == Symmetry::SU23) {
    d.matrix = {{-4, 0}, {2 * b0, -2}};
  } else {
    d.matrix = {{-2, -4, 0, 2 * b0}, {-2, -4, b0, b0}, {0, 0, -6, 4}, {0, 0, 2, -4}};
  }
  const auto n = static_cast<Eigen::Index>(d.matrix.size());
  Eigen::MatrixXd M(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) M(i, j) = d.matrix[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  const Eigen::EigenSolver<Eigen::MatrixXd> es(M, false);
  d.admissible = true;
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto ev = es.eigenvalues()(i);
    double re = ev.real();
    if (std::abs(re - std::round(re)) < 1e-12) re = std::round(re);
    if (re == 0.0) re = 0.0;
    d.eigenvalues.push_back(re);
    if (std::abs(ev.imag()) < 1e-12 && re >= 1.0 && re == std::round(re)) d.admissible = false;
  }
  std::sort(d.eigenvalues.begin(), d.eigenvalues.end());
  return d;
}

namespace {

struct LineFit {
  double slope = 0.0, intercept = 0.0;
};

LineFit fit(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double den = n * sxx - sx * sx;
  const double slope = den == 0.0 ? 0.0 : (n * sxy - sx * sy) / den;
  return {slope, (sy - slope * sx) / n};
}

// Leading power p with |y| ~ t^p; +infinity for an identically vanishing component.
double leading_power(const std::vector<SliceSample>& ss, double (*get)(const StateFull&)) {
  std::vector<double> lx, ly;
  double peak = 0.0;
  for (const auto& s : ss) peak = std::max(peak, std::abs(get(s.state)));
  if (peak < 1e-300) return std::numeric_limits<double>::infinity();
  for (const auto& s : ss) {
    const double v = std::abs(get(s.state));
    if (v < 1e-14 * peak) continue;
    lx.push_back(std::log(s.t));
    ly.push_back(std::log(v));
  }
  if (lx.size() < 2) return std::numeric_limits<double>::infinity();
  return fit(lx, ly).slope;
}

// Value at t = 0 of an even function sampled near 0: linear fit in t^2.
double even_limit(const std::vector<SliceSample>& ss, double (*get)(const SliceSample&)) {
  std::vector<double> x, y;
  for (const auto& s : ss) {
    x.push_back(s.t * s.t);
    y.push_back(get(s));
  }
  return fit(x, y).intercept;
}

}  // namespace

ExtensionVerdict extension_check(const std::vector<SliceSample>& samples, Bundle bundle) {
  if (samples.size() < 4) throw std::invalid_argument("extension_check needs at least 4 samples near t = 0");
  auto ss = samples;
  std::sort(ss.begin(), ss.end(), [](const auto& a, const auto& b) { return a.t < b.t; });
  if (!(ss.front().t > 0.0)) throw std::invalid_argument("extension_check samples need t > 0");
  const std::size_t keep = std::max<std::size_t>(4, ss.size() / 2);
  ss.resize(keep);

  constexpr double tol = 0.05;
  ExtensionVerdict v{bundle, {}, true};
  auto add = [&v](std::string name, double value, bool pass) {
    v.conditions.push_back({std::move(name), value, pass});
    v.pass = v.pass && pass;
  };
  const double pf = leading_power(ss, [](const StateFull& s) { return s.f_plus; });
  const double pg = leading_power(ss, [](const StateFull& s) { return s.g_plus; });
  const double pfm = leading_power(ss, [](const StateFull& s) { return s.f_minus; });
  const double pgm = leading_power(ss, [](const StateFull& s) { return s.g_minus; });
  if (bundle == Bundle::P1) {
    add("f+ vanishes like t", pf, pf >= 1.0 - tol);
    add("g+ vanishes like t", pg, pg >= 1.0 - tol);
    add("f- vanishes like t^2", pfm, pfm >= 2.0 - tol);
    add("g- vanishes like t^2", pgm, pgm >= 2.0 - tol);
  } else {
    const double lf = even_limit(ss, [](const SliceSample& s) { return s.t * s.state.f_plus; });
    const double lg = even_limit(ss, [](const SliceSample& s) { return s.t * s.state.g_plus; });
    add("t f+ -> 2", lf, std::abs(lf - 2.0) < 1e-3);
    add("t g+ -> 2", lg, std::abs(lg - 2.0) < 1e-3);
    add("f- bounded", pfm, pfm >= -tol);
    add("g- bounded", pgm, pgm >= -tol);
    const double b0f = even_limit(ss, [](const SliceSample& s) { return s.state.f_minus; });
    const double b0g = even_limit(ss, [](const SliceSample& s) { return s.state.g_minus; });
    add("f-(0) = g-(0)", b0f - b0g, std::abs(b0f - b0g) < 1e-3 * std::max(1.0, std::abs(b0f)));
  }
  return v;
}

nlohmann::json to_json(const SingularSeed& s) {
  nlohmann::json j;
  j["bundle"] = to_string(s.bundle);
  j["symmetry"] = to_string(s.symmetry);
  for (const auto& p : s.params) j["params"][p.name] = p.value;
  j["metric_seed"] = {{"b", s.metric.b}, {"c", s.metric.c}};
  for (const auto& p : s.derived) j["derived"][p.name] = p.value;
  j["t_start"] = s.t_start;
  const auto& st = s.state_at_start;
  j["state_at_start"] = {{"f_plus", st.f_plus}, {"g_plus", st.g_plus}, {"f_minus", st.f_minus}, {"g_minus", st.g_minus}};
  return j;
}

nlohmann::json to_json(const IndicialData& d) {
  return {{"bundle", to_string(d.bundle)},
          {"symmetry", to_string(d.symmetry)},
          {"matrix", d.matrix},
          {"eigenvalues", d.eigenvalues},
          {"admissible", d.admissible}};
}

nlohmann::json to_json(const ExtensionVerdict& v) {
  nlohmann::json conds = nlohmann::json::array();
  for (const auto& c : v.conditions) conds.push_back({{"name", c.name}, {"value", c.value}, {"pass", c.pass}});
  return {{"bundle", to_string(v.bundle)}, {"conditions", conds}, {"pass", v.pass}};
}

}  // namespace g2inst::seeds
