#include "g2inst/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

namespace g2inst::integrator {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// Coefficients of the quartic correction in the continuous extension.
constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                 d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                 d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

double max_abs(const State& y) {
  double m = 0.0;
  for (double v : y) m = std::max(m, std::abs(v));
  return m;
}

bool all_finite(const State& y) {
  return std::all_of(y.begin(), y.end(), [](double v) { return std::isfinite(v); });
}

State hermite(const Sample& a, const Sample& b, double t) {
  const double h = b.t - a.t;
  const double th = (t - a.t) / h;
  const double h00 = (1 + 2 * th) * (1 - th) * (1 - th);
  const double h10 = th * (1 - th) * (1 - th);
  const double h01 = th * th * (3 - 2 * th);
  const double h11 = th * th * (th - 1);
  State y(a.y.size());
  for (std::size_t i = 0; i < y.size(); ++i)
    y[i] = h00 * a.y[i] + h10 * h * a.dy[i] + h01 * b.y[i] + h11 * h * b.dy[i];
  if (!b.corr.empty()) {
    const double w = th * th * (1 - th) * (1 - th);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += w * b.corr[i];
  }
  return y;
}

struct GrowthWindow {
  std::deque<std::pair<double, double>> pts;  // (|t|, G)
};

}  // namespace

void StepControl::validate() const {
  if (!(rel_tol > 0) || !(abs_tol > 0)) throw std::invalid_argument("tolerances must be positive");
  if (!(min_step < max_step)) throw std::invalid_argument("min_step must be smaller than max_step");
  if (!(blowup_threshold > 0)) throw std::invalid_argument("blow-up threshold must be positive");
}

std::string to_string(StopKind k) {
  switch (k) {
    case StopKind::ReachedEnd: return "ReachedEnd";
    case StopKind::FiniteBlowUp: return "FiniteBlowUp";
    case StopKind::ExponentialGrowth: return "ExponentialGrowth";
    case StopKind::StepUnderflow: return "StepUnderflow";
  }
  return "Unknown";
}

State Trajectory::at(double t) const {
  if (samples.empty()) throw std::logic_error("empty trajectory");
  if (t <= samples.front().t) return samples.front().y;
  if (t >= samples.back().t) return samples.back().y;
  auto it = std::upper_bound(samples.begin(), samples.end(), t, [](double v, const Sample& s) { return v < s.t; });
  const auto& b = *it;
  const auto& a = *(it - 1);
  return hermite(a, b, t);
}

std::optional<double> detect_growth(std::span<const double> s, std::span<const double> G, double rate_floor,
                                    double size_floor) {
  if (s.size() != G.size() || s.size() < 3) return std::nullopt;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const auto n = static_cast<double>(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!(G[i] > 0)) return std::nullopt;
    const double y = std::log(G[i]);
    sx += s[i];
    sy += y;
    sxx += s[i] * s[i];
    sxy += s[i] * y;
  }
  const double den = n * sxx - sx * sx;
  if (den <= 0) return std::nullopt;
  const double slope = (n * sxy - sx * sy) / den;
  if (slope >= rate_floor && G.back() >= size_floor) return slope;
  return std::nullopt;
}

DriftReport event_first_integral(const Trajectory& traj, const std::function<double(double, const State&)>& q) {
  DriftReport r;
  if (traj.samples.empty()) return r;
  r.initial = q(traj.samples.front().t, traj.samples.front().y);
  for (const auto& s : traj.samples) r.max_drift = std::max(r.max_drift, std::abs(q(s.t, s.y) - r.initial));
  return r;
}

Trajectory integrate(const Rhs& rhs, double t0, const State& y0, double t1, const StepControl& control,
                     const Monitors& monitors) {
  control.validate();
  const std::size_t n = y0.size();
  const double dir = (t1 >= t0) ? 1.0 : -1.0;
  const double span = std::abs(t1 - t0);

  Trajectory traj;
  State k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n), ynew(n), err(n);
  State y = y0;
  double t = t0;
  rhs(t, y, k1);
  traj.samples.push_back({t, y, k1, {}});

  const double q0 = monitors.conserved ? monitors.conserved(t, y) : 0.0;
  GrowthWindow window;
  auto push_growth = [&](double tt, const State& yy) {
    if (!monitors.growth_component) return std::optional<double>{};
    window.pts.emplace_back(std::abs(tt - t0), yy[*monitors.growth_component]);
    while (window.pts.size() > 2 && window.pts.back().first - window.pts[1].first >= control.growth_window)
      window.pts.pop_front();
    if (window.pts.back().first - window.pts.front().first < control.growth_window) return std::optional<double>{};
    std::vector<double> ss, gg;
    ss.reserve(window.pts.size());
    gg.reserve(window.pts.size());
    for (const auto& [a, b] : window.pts) {
      ss.push_back(a);
      gg.push_back(std::abs(b));
    }
    return detect_growth(ss, gg, control.growth_rate_floor, control.growth_size_floor);
  };
  push_growth(t, y);

  auto error_norm = [&](const State& ya, const State& yb, const State& e) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double sc = control.abs_tol + control.rel_tol * std::max(std::abs(ya[i]), std::abs(yb[i]));
      acc += (e[i] / sc) * (e[i] / sc);
    }
    return std::sqrt(acc / static_cast<double>(std::max<std::size_t>(n, 1)));
  };

  double h = control.initial_step;
  if (h <= 0) {
    // Starting step from the size of y and y'.
    double d0 = 0, d1 = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double sc = control.abs_tol + control.rel_tol * std::abs(y[i]);
      d0 += (y[i] / sc) * (y[i] / sc);
      d1 += (k1[i] / sc) * (k1[i] / sc);
    }
    d0 = std::sqrt(d0 / static_cast<double>(n));
    d1 = std::sqrt(d1 / static_cast<double>(n));
    h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
  }
  h = std::min({h, control.max_step, span});

  StopReason stop{StopKind::ReachedEnd, t1, 0.0};
  bool done = span == 0.0;
  while (!done) {
    if (traj.diagnostics.accepted_steps + traj.diagnostics.rejected_steps >= control.max_steps) {
      stop = {StopKind::StepUnderflow, t, 0.0};
      break;
    }
    const double remaining = std::abs(t1 - t);
    bool last = false;
    if (h >= remaining) {
      h = remaining;
      last = true;
    }
    const double hs = dir * h;
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + hs * a21 * k1[i];
    rhs(t + c2 * hs, tmp, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + hs * (a31 * k1[i] + a32 * k2[i]);
    rhs(t + c3 * hs, tmp, k3);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + hs * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    rhs(t + c4 * hs, tmp, k4);
    for (std::size_t i = 0; i < n; ++i)
      tmp[i] = y[i] + hs * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    rhs(t + c5 * hs, tmp, k5);
    for (std::size_t i = 0; i < n; ++i)
      tmp[i] = y[i] + hs * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    rhs(t + hs, tmp, k6);
    for (std::size_t i = 0; i < n; ++i)
      ynew[i] = y[i] + hs * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    rhs(t + hs, ynew, k7);
    for (std::size_t i = 0; i < n; ++i)
      err[i] = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);

    double en = all_finite(ynew) && all_finite(k7) ? error_norm(y, ynew, err) : std::numeric_limits<double>::infinity();
    if (!std::isfinite(en)) en = 1e10;

    if (en <= 1.0) {
      const double tnew = last ? t1 : t + hs;
      const Sample prev = traj.samples.back();
      State corr(n);
      for (std::size_t i = 0; i < n; ++i)
        corr[i] = hs * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
      traj.samples.push_back({tnew, ynew, k7, std::move(corr)});
      ++traj.diagnostics.accepted_steps;
      t = tnew;
      y = ynew;
      k1 = k7;
      if (monitors.conserved)
        traj.diagnostics.max_conserved_drift =
            std::max(traj.diagnostics.max_conserved_drift, std::abs(monitors.conserved(t, y) - q0));

      if (max_abs(y) > control.blowup_threshold) {
        // Bisect the Hermite interpolant on the last step for the threshold crossing.
        double lo = 0.0, hi = 1.0;
        const Sample& cur = traj.samples.back();
        for (int it = 0; it < 60; ++it) {
          const double mid = 0.5 * (lo + hi);
          const double tm = prev.t + mid * (cur.t - prev.t);
          if (max_abs(hermite(prev, cur, tm)) > control.blowup_threshold) hi = mid; else lo = mid;
        }
        stop = {StopKind::FiniteBlowUp, prev.t + hi * (cur.t - prev.t), 0.0};
        break;
      }
      if (auto rate = push_growth(t, y)) {
        stop = {StopKind::ExponentialGrowth, t, *rate};
        break;
      }
      if (last) break;
      const double fac = en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
      h = std::min(h * fac, control.max_step);
    } else {
      ++traj.diagnostics.rejected_steps;
      h *= std::clamp(0.9 * std::pow(en, -0.2), 0.1, 0.9);
      const double floor = std::max(control.min_step, 1e-15 * std::abs(t));
      if (h < floor) {
        stop = {StopKind::StepUnderflow, t, 0.0};
        break;
      }
    }
  }
  traj.stop = stop;
  if (dir < 0) {
    std::reverse(traj.samples.begin(), traj.samples.end());
    // Each correction belongs to the interval ending at its sample in increasing t.
    for (std::size_t i = traj.samples.size(); i-- > 1;) traj.samples[i].corr = std::move(traj.samples[i - 1].corr);
    traj.samples.front().corr.clear();
  }
  return traj;
}

}  // namespace g2inst::integrator
