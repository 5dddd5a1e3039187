#pragma once

// Classification sweeps over seed-parameter planes.
//
// Every cell is seeded, integrated and classified independently on a bounded worker
// pool; results are assembled by cell index, so a scan is deterministic regardless of
// the number of workers.

#include "g2inst/analysis.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace g2inst::scan {

using analysis::Tag;
using metrics::Model;
using seeds::Bundle;

/// Parameter plane of a scan.
///   F1G1: P1 seeds (f1, g1) on BS or BGGG, integrated in s.
///   Y0:   P_id seeds on BS (SU(2)^3, parameter y0) or BGGG (U(1), parameter b0), integrated in t.
///   X1:   SU(2)^3 P1 seeds (the Clarke family) on BS.
enum class Plane { F1G1, Y0, X1 };
std::string to_string(Plane p);

/// Expected outcome from the existence and non-existence theorems.
enum class Prediction { MustExist, MustNotExist, Open };
std::string to_string(Prediction p);

/// Closed interval sampled at n equally spaced points (lo, ..., hi); n = 1 is the single value lo.
struct Axis {
  double lo = 0.0;
  double hi = 0.0;
  int n = 1;
  double value(int i) const;
};

struct ScanSpec {
  Model model = Model::BGGG;
  Plane plane = Plane::F1G1;
  Axis first;   // f1, y0 or x1
  Axis second;  // g1 (F1G1 only)
  solve::SolveOptions solve;
  analysis::ClassifyOptions classify;
  /// Reuse the verdict of (f1, |g1|) for g1 < 0; the ODEs are invariant under g -> -g.
  bool use_symmetry = true;
  /// Inconclusive cells are rerun with the horizon multiplied by 4, at most this many times.
  int horizon_escalations = 3;
  /// 0 selects std::thread::hardware_concurrency().
  unsigned workers = 0;

  /// Throws std::invalid_argument when the grid or the model/plane combination is unusable.
  void validate() const;
};

/// The BGGG P1 grid f1 in [0, 3] x g1 in [0, 1.5] at 60 x 30.
ScanSpec bggg_region_spec();
/// The BS P1 grid (f1, g1) in [-1.5, 1.5]^2 at 40 x 40.
ScanSpec bs_p1_spec();
/// The BS P_id sweep y0 in [-2, 2], step 0.1.
ScanSpec bs_pid_spec();

struct Cell {
  int i = 0, j = 0;
  std::size_t index = 0;
  double p1 = 0.0, p2 = 0.0;  // plane coordinates; p2 = 0 on 1-D planes
  Prediction prediction = Prediction::Open;
  analysis::Verdict verdict;
  bool abelian = false;       // closed-form classification, no integration
  bool mirrored = false;      // verdict taken from the (f1, -g1) cell
  std::optional<double> F_inf;
  double sup_norm = 0.0;
  std::optional<double> decay_exponent;
  std::optional<double> growth_rate;  // from an exponential-growth stop
  std::optional<double> first_integral;  // F^2 - G^2 at the seed on BS P1 grids
  double stop_param = 0.0;
  double horizon = 0.0;  // horizon of the run that produced the verdict
  std::string error;  // non-empty when the cell failed; the verdict is then Inconclusive

  /// Whether the verdict contradicts a MustExist / MustNotExist prediction.
  bool disagrees() const;
};

struct RegionStats {
  std::size_t cells = 0;
  std::array<std::size_t, 4> by_tag{};  // indexed by Tag
};

struct ScanResult {
  ScanSpec spec;
  std::vector<Cell> cells;  // row-major: index = j * first.n + i
  std::array<RegionStats, 3> regions{};  // indexed by Prediction
  std::vector<std::size_t> disagreements;  // cell indices on theorem-covered cells
  /// Cells whose verdict differs from the numerical expectation in the literature
  /// (P_id sweep on BS: only y0 = 0 global). Reported, never treated as failures.
  std::vector<std::size_t> reported;
  std::size_t errors = 0;

  const Cell& at(int i, int j = 0) const;
};

ScanResult scan(const ScanSpec& spec);

/// Classify a single parameter point with the options of spec.
Cell classify_point(const ScanSpec& spec, double p1, double p2 = 0.0);

Prediction predict(Model m, Plane plane, double p1, double p2 = 0.0);

/// Existence / non-existence boundary point with its final bracket along the first axis.
struct FrontierPoint {
  double p1 = 0.0, p2 = 0.0;
  double bracket_low = 0.0, bracket_high = 0.0;  // final bracket in p1
  int refinements = 0;
};

/// Bisection between neighbours along the first axis classified existent (GlobalBoundedCurvature) and
/// non-existent (CurvatureUnbounded / FiniteBlowUp). Inconclusive midpoints stop the refinement of that point.
std::vector<FrontierPoint> frontier(const ScanResult& result, int refinements = 5);

nlohmann::json to_json(const ScanSpec& s);
nlohmann::json to_json(const Cell& c);
/// Summary, region statistics, disagreements and the frontier polyline (schema_version 1).
nlohmann::json summary_json(const ScanResult& r, const std::vector<FrontierPoint>& frontier);
/// RFC-4180 table, one row per cell.
std::string to_csv(const ScanResult& r);
/// gnuplot matrix data "p1 p2 tag_code", blank line between rows of the first axis.
std::string to_gnuplot(const ScanResult& r);

/// printf "%.17g"; "nan", "inf", "-inf" for non-finite values.
std::string format_number(double x);

}  // namespace g2inst::scan
