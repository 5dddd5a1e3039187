#pragma once

// Adaptive Dormand-Prince 5(4) integration with Hermite-based dense output,
// finite-time blow-up bracketing and exponential-growth detection.

#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace g2inst::integrator {

using State = std::vector<double>;

/// Right-hand side y' = f(t, y); writes into dydt (already sized like y).
using Rhs = std::function<void(double t, const State& y, State& dydt)>;

struct StepControl {
  double rel_tol = 1e-11;
  double abs_tol = 1e-13;
  double max_step = std::numeric_limits<double>::infinity();
  double min_step = 1e-13;
  double initial_step = 0.0;  // 0 selects a starting step automatically
  double blowup_threshold = 1e8;
  double growth_window = 10.0;
  double growth_rate_floor = 0.05;
  double growth_size_floor = 10.0;
  std::size_t max_steps = 2'000'000;

  void validate() const;
};

enum class StopKind { ReachedEnd, FiniteBlowUp, ExponentialGrowth, StepUnderflow };

std::string to_string(StopKind k);

struct StopReason {
  StopKind kind = StopKind::ReachedEnd;
  double t = 0.0;     // parameter value where integration stopped (blow-up estimate for FiniteBlowUp)
  double rate = 0.0;  // fitted rate for ExponentialGrowth
};

struct Sample {
  double t = 0.0;
  State y;
  State dy;
  State corr;  // quartic correction of the interpolant on the interval ending here (empty for the first sample)
};

struct Diagnostics {
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;
  double max_conserved_drift = 0.0;  // only filled when a conserved quantity is monitored
};

struct Trajectory {
  std::vector<Sample> samples;  // strictly increasing in t
  StopReason stop;
  Diagnostics diagnostics;

  double t_begin() const { return samples.front().t; }
  double t_end() const { return samples.back().t; }
  const State& final_state() const { return samples.back().y; }
  /// Dense output: cubic Hermite between accepted steps plus the Dormand-Prince quartic correction.
  State at(double t) const;
};

struct Monitors {
  /// Component watched for exponential growth (the G variable in the (F,G) system).
  std::optional<std::size_t> growth_component;
  /// Quantity expected to be conserved; its drift is recorded in the diagnostics.
  std::function<double(double, const State&)> conserved;
};

/// Integrate from t0 to t1 (either direction); samples are returned in increasing t.
Trajectory integrate(const Rhs& rhs, double t0, const State& y0, double t1, const StepControl& control,
                     const Monitors& monitors = {});

/// Least-squares slope of log G over samples; a rate when it exceeds rate_floor with G above size_floor.
std::optional<double> detect_growth(std::span<const double> s, std::span<const double> G, double rate_floor,
                                    double size_floor);

struct DriftReport {
  double initial = 0.0;
  double max_drift = 0.0;
};

/// max |q(t) - q(t0)| over all samples of a trajectory.
DriftReport event_first_integral(const Trajectory& traj, const std::function<double(double, const State&)>& q);

}  // namespace g2inst::integrator
