#pragma once

// Cohomogeneity-one G2 metrics on R^4 x S^3: closed-form Bryant-Salamon (BS) and
// Brandhuber-Gomis-Gubser-Gukov (BGGG) profiles, the metric ODEs, series seeds at
// the singular orbit, numerical integration and the r <-> t coordinate maps.

#include "g2inst/calculus.hpp"
#include "g2inst/integrator.hpp"

#include <array>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace g2inst::metrics {

enum class Model { BS, BGGG, TaylorSeed };
enum class Coord { T, R, S };

std::string to_string(Model m);
std::string to_string(Coord c);

/// Singular-orbit value of r for the closed-form models (1 for BS, 9/4 for BGGG).
double r_min(Model m);

/// Normalized metric seeds (b, c) = (B_i(0), A_1'''(0)/6).
struct MetricSeed {
  double b = 0.0;
  double c = 0.0;
};
MetricSeed seed_of(Model m);

struct MetricProfile {
  std::array<double, 3> A{}, B{}, dA{}, dB{};
  Coord coord = Coord::T;
  double coord_value = 0.0;
  Model model = Model::TaylorSeed;
  double b = 0.0, c = 0.0;

  calculus::CoframeMetric<double> frame() const;
  calculus::MetricJet jet() const;
};

MetricProfile bs_profile(double r);
/// BS profile from the offset u = r - 1 (accurate close to the singular orbit).
MetricProfile bs_profile_offset(double u);
MetricProfile bggg_profile(double r);
/// BGGG profile from the offset u = r - 9/4.
MetricProfile bggg_profile_offset(double u);
/// Closed-form profile for BS or BGGG from the offset u = r - r_min.
MetricProfile closed_profile_offset(Model m, double u);

/// dr/dt for the closed-form models, from the offset u = r - r_min.
double drdt_offset(Model m, double u);

/// dt/dw after substituting r = r_min + w^2; smooth and positive at w = 0.
double dt_dw(Model m, double w);

/// Shifted coordinate s with ds/dt = A_1 (s = (r^2-1)/6 for BS, s = r - 9/4 for BGGG).
double s_of_r(Model m, double r);
double r_of_s(Model m, double s);

struct MetricDerivative {
  std::array<double, 3> dA{}, dB{};
};

/// General six-function system (cyclic i, j, k).
MetricDerivative metric_ode_rhs(const std::array<double, 3>& A, const std::array<double, 3>& B);
MetricDerivative metric_ode_rhs(const MetricProfile& p);

/// Four-function system for A_2 = A_3, B_2 = B_3; returns (dA1, dA2, dB1, dB2).
std::array<double, 4> reduced_metric_rhs(double A1, double A2, double B1, double B2);

/// Largest |ODE residual| of a profile's stored derivatives against the general system.
double metric_ode_residual(const MetricProfile& p);

/// Series coefficients of the U(1)-symmetric metric at the singular orbit:
/// A1 = t/2 + a[1] t^3 + a[2] t^5 + a[3] t^7, A2 likewise with p, B1 = b + q[1] t^2 + ..., B2 with s.
struct MetricSeries {
  double b = 0.0, c = 0.0;
  std::array<double, 4> a{}, p{}, q{}, s{};
};
MetricSeries metric_series(double b, double c);

/// Evaluate the series (and its t-derivative) at small t.
MetricProfile taylor_seed_metric(double b, double c, double t);

class MetricBlowUp : public std::runtime_error {
 public:
  MetricBlowUp(const std::string& what, double last_t) : std::runtime_error(what), last_t_(last_t) {}
  double last_t() const { return last_t_; }

 private:
  double last_t_;
};

/// Numerically integrated U(1)-symmetric metric, dense in t on [0, t_end].
class IntegratedMetric {
 public:
  IntegratedMetric(double b, double c, double t_start, integrator::Trajectory traj);
  MetricProfile profile_at(double t) const;
  double t_start() const { return t_start_; }
  double t_end() const { return traj_.t_end(); }
  const integrator::Trajectory& trajectory() const { return traj_; }

 private:
  double b_, c_, t_start_;
  integrator::Trajectory traj_;
};

/// Tight tolerances for metric marching: errors made near t = 0 along the free c-direction
/// are amplified like t^2 relative to the solution.
integrator::StepControl metric_step_control();

/// Series start at t_start (default 0.03 b), then Dormand-Prince integration to t_end.
IntegratedMetric integrate_metric(double b, double c, double t_end, double t_start = 0.0,
                                  const integrator::StepControl& control = metric_step_control());

/// Arclength t as a function of r for a closed-form model, with inverse lookup.
class CoordinateMap {
 public:
  explicit CoordinateMap(Model m, double r_max = 200.0, std::size_t table_size = 400);

  Model model() const { return model_; }
  double t_of_r(double r) const;
  /// t as a function of the offset u = r - r_min.
  double t_of_offset(double u) const;
  double r_of_t(double t) const;
  /// Offset u = r - r_min at arclength t (precise near the singular orbit).
  double offset_of_t(double t) const;
  const std::vector<std::pair<double, double>>& table() const { return table_; }

 private:
  Model model_;
  double r0_;
  std::vector<std::pair<double, double>> table_;  // (u, t), strictly increasing
};

/// CSV with header coord,A1,A2,A3,B1,B2,B3,dA1,dA2,dA3,dB1,dB2,dB3.
void write_profiles_csv(std::ostream& os, const std::vector<MetricProfile>& rows);

}  // namespace g2inst::metrics
