#pragma once

// Named verification suites shared by the command-line tool and the acceptance binary.
// Each suite returns a list of checks with the observed value, the bound it is held to and
// the outcome; exact checks use value = number of mismatches and bound = 0.

#include <json.hpp>

#include <string>
#include <vector>

namespace g2inst::verify {

struct Check {
  std::string name;
  double value = 0.0;
  double bound = 0.0;
  bool pass = false;
  std::string detail;
};

struct SuiteReport {
  std::string suite;
  std::vector<Check> checks;
  double seconds = 0.0;
  bool pass() const;
};

struct Options {
  double x1 = 1e4;      // energy suite: largest x1 of the sequence 1e2, 1e3, ..., x1
  double r_max = 100.0; // energy suite: outer radius
};

/// calculus, metrics, closed-forms, seeds, energy, bubbling, sasaki.
const std::vector<std::string>& suite_names();

/// Throws std::invalid_argument for an unknown suite.
SuiteReport run_suite(const std::string& name, const Options& options = {});

SuiteReport calculus_suite();
SuiteReport metrics_suite();
SuiteReport closed_forms_suite();
SuiteReport seeds_suite();
SuiteReport energy_suite(const Options& options = {});
SuiteReport bubbling_suite();
SuiteReport sasaki_suite();

/// Indicial eigenvalue tables against {-2,-2,-6,-6} (P1), {-8,-6,-3,-2} (P_id) and {-2,-4} (SU(2)^3 P_id).
std::vector<Check> indicial_checks();

/// x1^2 coefficient of the curvature-difference numerator at the singular orbit, from the BS norm.
double q20_numeric();

nlohmann::json to_json(const SuiteReport& r);
/// Plain-text table, one line per check.
std::string format_table(const SuiteReport& r);

}  // namespace g2inst::verify
