#pragma once

// Seed -> integrate pipeline for the instanton ODEs.
//
// P1 seeds on the closed-form metrics are transported to (F, G) and integrated in s,
// where the system is regular. P_id seeds on the closed-form metrics are integrated in
// w = sqrt(r - r_min), with t carried as an extra component. Seeds on a general
// (b, c) metric are integrated in t together with the metric ODEs. Runs from SU(2)^3 seeds
// keep f+ = g+ and f- = g- exactly.

#include "g2inst/integrator.hpp"
#include "g2inst/metrics.hpp"
#include "g2inst/seeds.hpp"

#include <memory>
#include <optional>
#include <vector>

namespace g2inst::solve {

using instantons::StateFull;
using metrics::MetricProfile;
using metrics::Model;

enum class Variable { S, W, T };
std::string to_string(Variable v);

/// Tolerances 1e-12 (relative) / 1e-14 (absolute); growth detection on G in s-units.
integrator::StepControl default_control();

struct SolveOptions {
  /// End of the run: s for P1 seeds on BS/BGGG, t otherwise.
  double horizon = 200.0;
  integrator::StepControl control = default_control();
};

/// A slice of a solution with all coordinates resolved.
struct Point {
  double param = 0.0;  // value of the integration variable
  double t = 0.0;
  double r = 0.0;  // NaN for general (b, c) metrics
  double s = 0.0;  // NaN for general (b, c) metrics
  StateFull state;
  StateFull dstate;  // d/dt from the instanton equations
  MetricProfile metric;
  double F = 0.0, G = 0.0;  // f+/A1, g+/A1
};

class InstantonRun {
 public:
  Model model;
  seeds::SingularSeed seed;
  Variable variable = Variable::S;
  integrator::Trajectory trajectory;
  std::vector<Point> points;  // one per accepted step

  /// Dense evaluation at a value of the integration variable.
  Point at_param(double p) const;
  /// Dense evaluation at arclength t (closed-form models only).
  Point at_t(double t) const;
  /// Integration variable value corresponding to t.
  double param_of_t(double t) const;
  const metrics::CoordinateMap* map() const { return map_.get(); }

  std::shared_ptr<const metrics::CoordinateMap> map_;
  Point make_point(double p, const integrator::State& y) const;
};

/// Integrate a seed on a model. Model::TaylorSeed uses the seed's (b, c) metric.
InstantonRun solve(const seeds::SingularSeed& seed, Model model, const SolveOptions& options = {});

/// Shared coordinate map covering r up to r_max (cached per model and size).
std::shared_ptr<const metrics::CoordinateMap> coordinate_map(Model m, double r_max);

/// r as a function of s on the closed-form models, with the offset u = r - r_min computed stably.
double offset_of_s(Model m, double s);

}  // namespace g2inst::solve
