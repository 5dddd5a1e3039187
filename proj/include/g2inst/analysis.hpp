#pragma once

// Diagnostics on instanton trajectories: curvature norms, energy concentration,
// holonomy at infinity, asymptotic decay rates, bubbling comparison and the
// global classifier.

#include "g2inst/solve.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace g2inst::analysis {

using instantons::StateFull;
using metrics::MetricProfile;

/// |F_A|^2 of an SU(2)^3-invariant connection A1 x sum T_i eta_i^+ on BS, from x, dx/dr and r > 1.
double curvature_norm_bs(double x, double dxdr, double r);

/// |F_a|^2 and |adot|^2 of a slice.
struct CurvatureParts {
  double slice = 0.0;  // |F_a|^2
  double dt = 0.0;     // |adot|^2
  double total() const { return slice + dt; }
};

/// Exact invariant-calculus computation; any state, sdot is the t-derivative.
CurvatureParts curvature_parts_general(const StateFull& s, const StateFull& sdot, const MetricProfile& m);

/// Closed formulas when f- = g- = 0 (adot from the instanton equations), otherwise the general computation.
CurvatureParts curvature_parts(const StateFull& s, const StateFull& sdot, const MetricProfile& m);

/// |F_A|^2 = |F_a|^2 + |adot|^2.
double curvature_norm_full(const StateFull& s, const StateFull& sdot, const MetricProfile& m);

struct CurvatureSample {
  double t = 0.0;
  double slice = 0.0;
  double dt = 0.0;
  double norm_sq = 0.0;
};

struct CurvatureReport {
  std::vector<CurvatureSample> samples;
  double sup_norm = 0.0;  // sup |F_A|
  /// k in |F_A| ~ t^-k fitted over t in [t_end/2, t_end]; empty when the run is too short.
  std::optional<double> decay_exponent;
};

CurvatureReport curvature_report(const solve::InstantonRun& run);

/// Least-squares k with y ~ C t^-k (y > 0).
struct PowerFit {
  double exponent = 0.0;
  double constant = 0.0;
  double residual = 0.0;  // rms of log residuals
};
PowerFit fit_power(const std::vector<double>& t, const std::vector<double>& y);

/// Yang-Mills energy of A^{x1} minus that of A^lim on {1 < r <= r_max} of BS.
double energy_difference(double x1, double r_max);

/// Energy integrand (|F_{A^{x1}}|^2 - |F_{A^lim}|^2) times the volume density in r, at the offset u = r - 1.
double energy_density_difference(double x1, double u);

/// Limit 8 pi^2 * 2 pi^2 / (3 sqrt 3).
double energy_limit();

struct Holonomy {
  double F_inf = 0.0;
  double angle = 0.0;  // F_inf mod 1
  std::array<double, 3> tail{};  // F at s/4, s/2, s
  double bracket_low = 0.0, bracket_high = 0.0;
  bool in_bracket = false;
};

/// Extrapolated F at infinity for a P1 run integrated in s; throws std::domain_error when F does not settle.
Holonomy holonomy_infinity(const solve::InstantonRun& run);

/// Limits (A1 f+, A2 g+, B1 f-, B2 g-) of the connection coefficients.
struct LimitState {
  std::array<double, 4> coefficients{};
};

/// |a(t) - a_inf| for a slice.
double distance_to_limit(const solve::Point& p, const LimitState& lim);

struct RateFit {
  PowerFit fit;
  double t_from = 0.0, t_to = 0.0;
  std::size_t samples = 0;
};

/// Fits |a - a_inf| ~ C t^-k over t in [t_from, t_end] (default t_end / 2).
RateFit asymptotic_rate(const solve::InstantonRun& run, const LimitState& lim, std::optional<double> t_from = {});

/// sup over t in (0, 1] of |A1(dt) x(dt) - lambda t^2/(1 + lambda t^2)| with d = sqrt(2 lambda / x1), Clarke on BS.
double bubbling_compare(double x1, double lambda);

enum class Tag { GlobalBoundedCurvature, CurvatureUnbounded, FiniteBlowUp, Inconclusive };
std::string to_string(Tag t);

struct Verdict {
  Tag tag = Tag::Inconclusive;
  nlohmann::json evidence = nlohmann::json::object();
};

struct ClassifyOptions {
  double curvature_threshold = 1e6;  // sup |F_A| above this counts as unbounded
  double tail_fraction = 0.25;
  double tail_tolerance = 1e-2;  // relative variation allowed over the tail for convergence
};

Verdict classify(const solve::InstantonRun& run, const CurvatureReport& curvature, const ClassifyOptions& options = {});

nlohmann::json to_json(const CurvatureReport& c, bool with_samples = false);
nlohmann::json to_json(const Holonomy& h);
nlohmann::json to_json(const Verdict& v);

}  // namespace g2inst::analysis
