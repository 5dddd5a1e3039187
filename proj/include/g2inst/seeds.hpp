#pragma once

// Power-series seeds for the instanton ODEs at the singular orbit t = 0,
// the indicial data of the regular singular point, and a fit-based check that a
// trajectory closes up smoothly on a given bundle.

#include "g2inst/instantons.hpp"
#include "g2inst/metrics.hpp"

#include <json.hpp>

#include <string>
#include <utility>
#include <vector>

namespace g2inst::seeds {

using instantons::StateFull;

enum class Bundle { P1, Pid };
enum class Symmetry { SU23, SU2xU1 };

std::string to_string(Bundle b);
std::string to_string(Symmetry s);

struct Named {
  std::string name;
  double value = 0.0;
};

/// Truncated series sum_k coeff_k t^power_k.
struct Series {
  std::vector<std::pair<int, double>> terms;  // (power, coefficient)
  double value(double t) const;
  double derivative(double t) const;
};

struct SingularSeed {
  Bundle bundle = Bundle::P1;
  Symmetry symmetry = Symmetry::SU2xU1;
  std::vector<Named> params;
  metrics::MetricSeed metric;
  std::vector<Named> derived;
  double t_start = 0.0;
  std::array<Series, 4> series;  // f+, g+, f-, g-
  StateFull state_at_start;
  /// (A1 f+, A1 g+, f-, g-): finite at t = 0 on both bundles.
  StateFull regular_at_start;

  StateFull state(double t) const;
  StateFull state_dt(double t) const;
  double param(const std::string& name) const;
  double coefficient(const std::string& name) const;
};

/// P1 seed: f+ = f1 t + u1 t^3 + u13 t^5, g+ = g1 t + u2 t^3 + u23 t^5, f- = g- = 0.
/// C2_0 is the t^3 coefficient of A2 at the singular orbit.
SingularSeed seed_p1(double f1p, double g1p, double b, double c, double C2_0);
SingularSeed seed_p1(double f1p, double g1p, const metrics::MetricSeed& m);
/// SU(2)^3 P1 seed on BS: x = x1 t + u t^3 + ..., y = 0 (the Clarke family).
SingularSeed seed_su23_p1(double x1);

/// P_id seed with U(1) symmetry: f+ = 2/t + (b2 - 4c) t + u t^3, g+ = 2/t + (b2 - 4 C2) t + u t^3,
/// f- = g- = b0 + v t^2, with 4 b2 = b0^2 - 1/b^2.
SingularSeed seed_pid(double b0m, double b, double c);
/// SU(2)^3 P_id seed on BS: x = 2/t + ((y0^2-1)/4) t + u3 t^3, y = y0 + v t^2 + v4 t^4.
SingularSeed seed_su23_pid(double y0);

struct IndicialData {
  Bundle bundle;
  Symmetry symmetry;
  std::vector<std::vector<double>> matrix;  // dM_{-1}
  std::vector<double> eigenvalues;          // ascending
  bool admissible = false;                  // no eigenvalue is a positive integer
};

/// Linearization of the singular part at the seed; b0 only enters the P_id cases.
IndicialData indicial_data(Bundle bundle, Symmetry symmetry, double b0 = 0.0);

struct SliceSample {
  double t = 0.0;
  StateFull state;
};

struct Condition {
  std::string name;
  double value = 0.0;
  bool pass = false;
};

struct ExtensionVerdict {
  Bundle bundle;
  std::vector<Condition> conditions;
  bool pass = false;
};

/// Fits leading powers near t = 0 and tests the smooth-extension conditions of the bundle.
ExtensionVerdict extension_check(const std::vector<SliceSample>& samples, Bundle bundle);

nlohmann::json to_json(const SingularSeed& s);
nlohmann::json to_json(const IndicialData& d);
nlohmann::json to_json(const ExtensionVerdict& v);

}  // namespace g2inst::seeds
