#include "g2inst/metrics.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

namespace g2inst::metrics {

namespace {

constexpr double kBgggR0 = 9.0 / 4.0;

MetricProfile make_profile(Model model, double A1, double A2, double B1, double B2, double dA1, double dA2,
                           double dB1, double dB2, Coord coord, double value) {
  MetricProfile p;
  p.A = {A1, A2, A2};
  p.B = {B1, B2, B2};
  p.dA = {dA1, dA2, dA2};
  p.dB = {dB1, dB2, dB2};
  p.coord = coord;
  p.coord_value = value;
  p.model = model;
  const auto seed = model == Model::TaylorSeed ? MetricSeed{} : seed_of(model);
  p.b = seed.b;
  p.c = seed.c;
  return p;
}

void require_closed(Model m);

double segment(Model m, double w0, double w1) {
  if (w1 == w0) return 0.0;
  auto f = [m](double w) { return dt_dw(m, w); };
  const int pieces = 1 + static_cast<int>(std::abs(w1 - w0) / 0.05);
  const double h = (w1 - w0) / pieces;
  double total = 0.0;
  for (int k = 0; k < pieces; ++k)
    total += boost::math::quadrature::gauss<double, 20>::integrate(f, w0 + k * h, k + 1 == pieces ? w1 : w0 + (k + 1) * h);
  return total;
}

void require_closed(Model m) {
  if (m == Model::TaylorSeed) throw std::domain_error("closed form requires the BS or BGGG model");
}

}  // namespace

double dt_dw(Model m, double w) {
  require_closed(m);
  const double v = w * w;
  if (m == Model::BS) {
    const double rho = 1.0 + v;
    return 2.0 * std::sqrt(rho * rho * rho / (3.0 + 3.0 * v + v * v));
  }
  return 2.0 * std::sqrt((v + 1.5) * (v + 3.0) / (v + 4.5));
}

std::string to_string(Model m) {
  switch (m) {
    case Model::BS: return "bs";
    case Model::BGGG: return "bggg";
    case Model::TaylorSeed: return "taylor";
  }
  return "unknown";
}

std::string to_string(Coord c) {
  switch (c) {
    case Coord::T: return "t";
    case Coord::R: return "r";
    case Coord::S: return "s";
  }
  return "unknown";
}

double r_min(Model m) {
  require_closed(m);
  return m == Model::BS ? 1.0 : kBgggR0;
}

MetricSeed seed_of(Model m) {
  require_closed(m);
  if (m == Model::BS) return {1.0 / std::sqrt(3.0), -1.0 / 8.0};
  return {1.5, -7.0 / 108.0};
}

calculus::CoframeMetric<double> MetricProfile::frame() const {
  calculus::CoframeMetric<double> m;
  m.A = A;
  m.B = B;
  return m;
}

calculus::MetricJet MetricProfile::jet() const { return {A, B, dA, dB}; }

MetricProfile bs_profile_offset(double u) {
  if (!(u >= 0.0)) throw std::domain_error("BS profile requires r >= 1");
  const double r = 1.0 + u;
  const double r3 = r * r * r;
  const double w = u * (3.0 + 3.0 * u + u * u) / r3;
  const double sw = std::sqrt(w);
  const double A = r * sw / 3.0;
  const double B = r / std::sqrt(3.0);
  const double dA = w / 3.0 + 0.5 / r3;
  const double dB = sw / std::sqrt(3.0);
  return make_profile(Model::BS, A, A, B, B, dA, dA, dB, dB, Coord::R, r);
}

MetricProfile bs_profile(double r) {
  if (!(r >= 1.0)) throw std::domain_error("BS profile requires r >= 1");
  return bs_profile_offset(r - 1.0);
}

MetricProfile bggg_profile_offset(double u) {
  if (!(u >= 0.0)) throw std::domain_error("BGGG profile requires r >= 9/4");
  const double r = kBgggR0 + u;
  const double Q = (u + 1.5) * (u + 3.0);
  const double A1 = std::sqrt(u * (u + 4.5) / Q);
  const double A2 = std::sqrt(u * (u + 3.0) / 3.0);
  const double B1 = 2.0 * r / 3.0;
  const double B2 = std::sqrt((u + 1.5) * (u + 4.5) / 3.0);
  const double ratio = std::sqrt(3.0 * (u + 4.5) / (Q * (u + 3.0)));  // A1 / A2
  const double dA1 = 4.5 * r / (Q * Q);
  const double dA2 = ratio * (2.0 * r - 1.5) / 6.0;
  const double dB1 = 2.0 * A1 / 3.0;
  const double dB2 = A1 * (2.0 * r + 1.5) / (6.0 * B2);
  return make_profile(Model::BGGG, A1, A2, B1, B2, dA1, dA2, dB1, dB2, Coord::R, r);
}

MetricProfile bggg_profile(double r) {
  if (!(r >= kBgggR0)) throw std::domain_error("BGGG profile requires r >= 9/4");
  return bggg_profile_offset(r - kBgggR0);
}

MetricProfile closed_profile_offset(Model m, double u) {
  require_closed(m);
  return m == Model::BS ? bs_profile_offset(u) : bggg_profile_offset(u);
}

double drdt_offset(Model m, double u) {
  require_closed(m);
  if (u < 0.0) throw std::domain_error("offset must be non-negative");
  if (m == Model::BS) {
    const double r = 1.0 + u;
    return std::sqrt(u * (3.0 + 3.0 * u + u * u) / (r * r * r));
  }
  return std::sqrt(u * (u + 4.5) / ((u + 1.5) * (u + 3.0)));
}

double s_of_r(Model m, double r) {
  require_closed(m);
  return m == Model::BS ? (r * r - 1.0) / 6.0 : r - kBgggR0;
}

double r_of_s(Model m, double s) {
  require_closed(m);
  return m == Model::BS ? std::sqrt(1.0 + 6.0 * s) : s + kBgggR0;
}

MetricDerivative metric_ode_rhs(const std::array<double, 3>& A, const std::array<double, 3>& B) {
  for (int i = 0; i < 3; ++i)
    if (A[i] == 0.0 || B[i] == 0.0) throw std::domain_error("metric ODE: zero denominator");
  MetricDerivative d;
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3, k = (i + 2) % 3;
    const double Ai = A[i], Aj = A[j], Ak = A[k], Bi = B[i], Bj = B[j], Bk = B[k];
    d.dA[i] = 0.5 * (Ai * Ai / (Aj * Ak) - Ai * Ai / (Bj * Bk) - (Aj * Aj + Ak * Ak) / (Aj * Ak) +
                     (Bj * Bj + Bk * Bk) / (Bj * Bk));
    d.dB[i] = 0.5 * ((Aj * Aj + Bk * Bk) / (Aj * Bk) + (Ak * Ak + Bj * Bj) / (Ak * Bj) - Bi * Bi / (Aj * Bk) -
                     Bi * Bi / (Ak * Bj));
  }
  return d;
}

MetricDerivative metric_ode_rhs(const MetricProfile& p) { return metric_ode_rhs(p.A, p.B); }

std::array<double, 4> reduced_metric_rhs(double A1, double A2, double B1, double B2) {
  if (A1 == 0.0 || A2 == 0.0 || B1 == 0.0 || B2 == 0.0) throw std::domain_error("metric ODE: zero denominator");
  return {0.5 * (A1 * A1 / (A2 * A2) - A1 * A1 / (B2 * B2)),
          0.5 * ((B1 * B1 + B2 * B2 - A2 * A2) / (B1 * B2) - A1 / A2),
          (A2 * A2 + B2 * B2 - B1 * B1) / (A2 * B2),
          0.5 * ((A2 * A2 + B1 * B1 - B2 * B2) / (A2 * B1) + A1 / B2)};
}

double metric_ode_residual(const MetricProfile& p) {
  const auto d = metric_ode_rhs(p);
  double worst = 0.0;
  for (int i = 0; i < 3; ++i) {
    worst = std::max(worst, std::abs(d.dA[i] - p.dA[i]));
    worst = std::max(worst, std::abs(d.dB[i] - p.dB[i]));
  }
  return worst;
}

MetricSeries metric_series(double b, double c) {
  if (b == 0.0) throw std::domain_error("metric series requires b != 0");
  const double b2 = b * b, b3 = b2 * b, b4 = b2 * b2, b5 = b4 * b, b6 = b4 * b2;
  const double c2 = c * c, c3 = c2 * c;
  MetricSeries s;
  s.b = b;
  s.c = c;
  s.a = {0.5, c, (2112 * b4 * c2 + 96 * b2 * c + 11) / (640 * b4),
         (28032 * b6 * c3 + 2496 * b4 * c2 + 202 * b2 * c - 11) / (2240 * b6)};
  s.p = {0.5, -(8 * b2 * c + 1) / (16 * b2), -(768 * b4 * c2 + 24 * b2 * c - 11) / (640 * b4),
         -(132096 * b6 * c3 + 12480 * b4 * c2 + 1472 * b2 * c + 323) / (35840 * b6)};
  s.q = {b, 1.0 / (4 * b), -(8 * b2 * c + 7) / (160 * b3), -(192 * b4 * c2 - 48 * b2 * c - 53) / (3840 * b5)};
  s.s = {b, 1.0 / (4 * b), (8 * b2 * c - 13) / (320 * b3), (192 * b4 * c2 + 25) / (1920 * b5)};
  return s;
}

MetricProfile taylor_seed_metric(double b, double c, double t) {
  const auto s = metric_series(b, c);
  const double t2 = t * t;
  auto odd = [&](const std::array<double, 4>& k) {
    return t * (k[0] + t2 * (k[1] + t2 * (k[2] + t2 * k[3])));
  };
  auto odd_d = [&](const std::array<double, 4>& k) {
    return k[0] + t2 * (3 * k[1] + t2 * (5 * k[2] + t2 * 7 * k[3]));
  };
  auto even = [&](const std::array<double, 4>& k) { return k[0] + t2 * (k[1] + t2 * (k[2] + t2 * k[3])); };
  auto even_d = [&](const std::array<double, 4>& k) { return t * (2 * k[1] + t2 * (4 * k[2] + t2 * 6 * k[3])); };
  auto p = make_profile(Model::TaylorSeed, odd(s.a), odd(s.p), even(s.q), even(s.s), odd_d(s.a), odd_d(s.p),
                        even_d(s.q), even_d(s.s), Coord::T, t);
  p.b = b;
  p.c = c;
  return p;
}

IntegratedMetric::IntegratedMetric(double b, double c, double t_start, integrator::Trajectory traj)
    : b_(b), c_(c), t_start_(t_start), traj_(std::move(traj)) {}

MetricProfile IntegratedMetric::profile_at(double t) const {
  if (t < 0.0) throw std::domain_error("profile_at requires t >= 0");
  if (t <= t_start_) return taylor_seed_metric(b_, c_, t);
  if (t > traj_.t_end()) throw std::domain_error("profile_at beyond the integrated range");
  const auto y = traj_.at(t);
  const auto d = reduced_metric_rhs(y[0], y[1], y[2], y[3]);
  MetricProfile p;
  p.A = {y[0], y[1], y[1]};
  p.B = {y[2], y[3], y[3]};
  p.dA = {d[0], d[1], d[1]};
  p.dB = {d[2], d[3], d[3]};
  p.coord = Coord::T;
  p.coord_value = t;
  p.model = Model::TaylorSeed;
  p.b = b_;
  p.c = c_;
  return p;
}

integrator::StepControl metric_step_control() {
  integrator::StepControl c;
  c.rel_tol = 1e-13;
  c.abs_tol = 1e-18;
  return c;
}

IntegratedMetric integrate_metric(double b, double c, double t_end, double t_start,
                                  const integrator::StepControl& control) {
  if (b == 0.0) throw std::domain_error("metric integration requires b != 0");
  if (t_start <= 0.0) t_start = 0.03 * std::abs(b);
  if (!(t_end > t_start)) throw std::domain_error("t_end must exceed t_start");
  const auto seed = taylor_seed_metric(b, c, t_start);
  integrator::State y0{seed.A[0], seed.A[1], seed.B[0], seed.B[1]};
  auto rhs = [](double, const integrator::State& y, integrator::State& dy) {
    const auto d = reduced_metric_rhs(y[0], y[1], y[2], y[3]);
    std::copy(d.begin(), d.end(), dy.begin());
  };
  auto traj = integrator::integrate(rhs, t_start, y0, t_end, control);
  if (traj.stop.kind != integrator::StopKind::ReachedEnd)
    throw MetricBlowUp("metric integration stopped early: " + integrator::to_string(traj.stop.kind), traj.t_end());
  return IntegratedMetric(b, c, t_start, std::move(traj));
}

CoordinateMap::CoordinateMap(Model m, double r_max, std::size_t table_size) : model_(m), r0_(r_min(m)) {
  if (!(r_max > r0_) || table_size < 2) throw std::domain_error("coordinate map needs r_max > r_min");
  const double w_max = std::sqrt(r_max - r0_);
  table_.reserve(table_size);
  double t = 0.0, w_prev = 0.0;
  table_.emplace_back(0.0, 0.0);
  for (std::size_t i = 1; i < table_size; ++i) {
    const double w = w_max * static_cast<double>(i) / static_cast<double>(table_size - 1);
    t += segment(m, w_prev, w);
    table_.emplace_back(w * w, t);
    w_prev = w;
  }
}

double CoordinateMap::t_of_offset(double u) const {
  if (u < 0.0) throw std::domain_error("r below the singular orbit");
  const double w = std::sqrt(u);
  auto it = std::upper_bound(table_.begin(), table_.end(), u,
                             [](double v, const std::pair<double, double>& e) { return v < e.first; });
  const auto& base = *(it - 1);
  return base.second + segment(model_, std::sqrt(base.first), w);
}

double CoordinateMap::t_of_r(double r) const { return t_of_offset(r - r0_); }

double CoordinateMap::offset_of_t(double t) const {
  if (t < 0.0) throw std::domain_error("t must be non-negative");
  if (t == 0.0) return 0.0;
  auto it = std::upper_bound(table_.begin(), table_.end(), t,
                             [](double v, const std::pair<double, double>& e) { return v < e.second; });
  const auto& base = *(it - 1);
  double w0 = std::sqrt(base.first);
  double w = w0 + (t - base.second) / dt_dw(model_, w0);
  // Newton on t(w) = t, referenced to the bracketing table node.
  for (int iter = 0; iter < 60; ++iter) {
    const double f = base.second + segment(model_, w0, w) - t;
    const double step = f / dt_dw(model_, w);
    w -= step;
    if (w < 0.0) w = 0.0;
    if (std::abs(step) <= 1e-16 * std::max(1.0, w)) break;
  }
  return w * w;
}

double CoordinateMap::r_of_t(double t) const { return r0_ + offset_of_t(t); }

void write_profiles_csv(std::ostream& os, const std::vector<MetricProfile>& rows) {
  os << "coord,A1,A2,A3,B1,B2,B3,dA1,dA2,dA3,dB1,dB2,dB3\n";
  os << std::setprecision(17);
  for (const auto& p : rows) {
    os << p.coord_value;
    for (double v : p.A) os << ',' << v;
    for (double v : p.B) os << ',' << v;
    for (double v : p.dA) os << ',' << v;
    for (double v : p.dB) os << ',' << v;
    os << '\n';
  }
}

}  // namespace g2inst::metrics
