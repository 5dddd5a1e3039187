#include "g2inst/scan.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace g2inst::scan {

namespace {

template <class Task>
void parallel_for(std::size_t n, unsigned workers, Task&& task) {
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t k = next++; k < n; k = next++) task(k);
  };
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  const auto w = static_cast<unsigned>(std::min<std::size_t>(workers, n));
  if (w <= 1) {
    work();
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(w);
  for (unsigned k = 0; k < w; ++k) pool.emplace_back(work);
}

bool exists(Tag t) { return t == Tag::GlobalBoundedCurvature; }
bool not_exists(Tag t) { return t == Tag::CurvatureUnbounded || t == Tag::FiniteBlowUp; }

bool near_zero(double x, double scale) { return std::abs(x) <= 1e-12 * std::max(1.0, scale); }

// g+ = 0 on P1: F stays at 2 f1 and G at 0 for all s.
void classify_abelian(const ScanSpec& spec, Cell& c) {
  const double F = 2.0 * c.p1;
  double sup_sq = 0.0;
  const int n = 400;
  for (int k = 1; k < n; ++k) {
    const double s = spec.solve.horizon * std::pow(static_cast<double>(k) / (n - 1), 2);
    const auto m = metrics::closed_profile_offset(spec.model, solve::offset_of_s(spec.model, s));
    const instantons::StateFull st{F * m.A[0], 0.0, 0.0, 0.0};
    sup_sq = std::max(sup_sq, analysis::curvature_norm_full(st, instantons::rhs_full(st, m), m));
  }
  c.abelian = true;
  c.F_inf = F;
  c.sup_norm = std::sqrt(sup_sq);
  c.stop_param = spec.solve.horizon;
  c.horizon = spec.solve.horizon;
  if (spec.model == Model::BS) c.first_integral = F * F;
  c.verdict.tag = Tag::GlobalBoundedCurvature;
  c.verdict.evidence = {{"abelian", true}, {"F", F}, {"G", 0.0}, {"sup_curvature", c.sup_norm}};
}

seeds::SingularSeed seed_for(const ScanSpec& spec, double p1, double p2) {
  switch (spec.plane) {
    case Plane::F1G1: return seeds::seed_p1(p1, p2, metrics::seed_of(spec.model));
    case Plane::X1: return seeds::seed_su23_p1(p1);
    case Plane::Y0: {
      if (spec.model == Model::BS) return seeds::seed_su23_pid(p1);
      const auto m = metrics::seed_of(spec.model);
      return seeds::seed_pid(p1, m.b, m.c);
    }
  }
  throw std::logic_error("unknown plane");
}

void evaluate(const ScanSpec& spec, Cell& c) {
  const double p2 = (spec.use_symmetry && spec.plane == Plane::F1G1) ? std::abs(c.p2) : c.p2;
  try {
    if (spec.plane == Plane::F1G1 && p2 == 0.0) {
      classify_abelian(spec, c);
      return;
    }
    const auto seed = seed_for(spec, c.p1, p2);
    auto opts = spec.solve;
    for (int e = 0;; ++e) {
      const auto run = solve::solve(seed, spec.model, opts);
      const auto curv = analysis::curvature_report(run);
      c.verdict = analysis::classify(run, curv, spec.classify);
      c.horizon = opts.horizon;
      c.sup_norm = curv.sup_norm;
      c.decay_exponent = curv.decay_exponent;
      c.stop_param = run.trajectory.stop.t;
      c.growth_rate.reset();
      c.first_integral.reset();
      c.F_inf.reset();
      if (run.trajectory.stop.kind == integrator::StopKind::ExponentialGrowth) c.growth_rate = run.trajectory.stop.rate;
      if (spec.plane == Plane::F1G1 && spec.model == Model::BS && !run.points.empty()) {
        const auto& end = run.points.back();
        c.first_integral = end.F * end.F - end.G * end.G;
      }
      if (run.variable == solve::Variable::S && run.trajectory.stop.kind == integrator::StopKind::ReachedEnd) {
        try {
          c.F_inf = analysis::holonomy_infinity(run).F_inf;
        } catch (const std::domain_error&) {
        }
      }
      if (c.verdict.tag != Tag::Inconclusive || e >= spec.horizon_escalations) break;
      opts.horizon *= 4.0;
    }
  } catch (const std::exception& e) {
    c.error = e.what();
    c.verdict.tag = Tag::Inconclusive;
    c.verdict.evidence = {{"error", c.error}};
  }
}

std::string p1_name(const ScanSpec& s) {
  switch (s.plane) {
    case Plane::F1G1: return "f1";
    case Plane::X1: return "x1";
    case Plane::Y0: return s.model == Model::BS ? "y0" : "b0";
  }
  return "p1";
}

int tag_code(Tag t) { return static_cast<int>(t); }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string opt(const std::optional<double>& x) { return x ? format_number(*x) : std::string(); }

nlohmann::json opt_json(const std::optional<double>& x) {
  return x && std::isfinite(*x) ? nlohmann::json(*x) : nlohmann::json(nullptr);
}

}  // namespace

std::string to_string(Plane p) {
  switch (p) {
    case Plane::F1G1: return "f1g1";
    case Plane::Y0: return "y0";
    case Plane::X1: return "x1";
  }
  return "?";
}

std::string to_string(Prediction p) {
  switch (p) {
    case Prediction::MustExist: return "MustExist";
    case Prediction::MustNotExist: return "MustNotExist";
    case Prediction::Open: return "Open";
  }
  return "?";
}

double Axis::value(int i) const {
  if (n <= 1) return lo;
  const double k = static_cast<double>(i), m = static_cast<double>(n - 1);
  return (lo * (m - k) + hi * k) / m;
}

void ScanSpec::validate() const {
  auto check_axis = [](const Axis& a, const char* name) {
    if (!std::isfinite(a.lo) || !std::isfinite(a.hi) || a.hi <= a.lo)
      throw std::invalid_argument(std::string(name) + " axis needs finite lo < hi");
    if (a.n < 2) throw std::invalid_argument(std::string(name) + " axis needs at least 2 points");
  };
  check_axis(first, "first");
  if (plane == Plane::F1G1) check_axis(second, "second");
  if (model == Model::TaylorSeed) throw std::invalid_argument("scans run on the BS or BGGG metric");
  if (plane == Plane::X1 && model != Model::BS) throw std::invalid_argument("the x1 plane is defined on BS only");
  if (!(solve.horizon > 0.0) || !std::isfinite(solve.horizon)) throw std::invalid_argument("horizon must be positive");
  if (horizon_escalations < 0) throw std::invalid_argument("horizon_escalations must be >= 0");
}

ScanSpec bggg_region_spec() {
  ScanSpec s;
  s.model = Model::BGGG;
  s.plane = Plane::F1G1;
  s.first = {0.0, 3.0, 60};
  s.second = {0.0, 1.5, 30};
  return s;
}

ScanSpec bs_p1_spec() {
  ScanSpec s;
  s.model = Model::BS;
  s.plane = Plane::F1G1;
  s.first = {-1.5, 1.5, 40};
  s.second = {-1.5, 1.5, 40};
  return s;
}

ScanSpec bs_pid_spec() {
  ScanSpec s;
  s.model = Model::BS;
  s.plane = Plane::Y0;
  s.first = {-2.0, 2.0, 41};
  s.solve.horizon = 100.0;
  return s;
}

Prediction predict(Model m, Plane plane, double p1, double p2) {
  switch (plane) {
    case Plane::F1G1: {
      const double f = p1, g = std::abs(p2);
      if (g == 0.0) return Prediction::MustExist;
      if (m == Model::BGGG) {
        if (f >= 0.5 + g) return Prediction::MustExist;
        if (f <= 0.5 || g >= f) return Prediction::MustNotExist;
        return Prediction::Open;
      }
      if (m == Model::BS) {
        if (near_zero(f * f - g * g, f * f + g * g)) return f > 0.0 ? Prediction::MustExist : Prediction::MustNotExist;
        return Prediction::MustNotExist;
      }
      return Prediction::Open;
    }
    case Plane::X1: return p1 >= 0.0 ? Prediction::MustExist : Prediction::MustNotExist;
    case Plane::Y0: return (m == Model::BS && p1 == 0.0) ? Prediction::MustExist : Prediction::Open;
  }
  return Prediction::Open;
}

bool Cell::disagrees() const {
  if (prediction == Prediction::MustExist) return !exists(verdict.tag);
  if (prediction == Prediction::MustNotExist) return !not_exists(verdict.tag);
  return false;
}

const Cell& ScanResult::at(int i, int j) const {
  return cells.at(static_cast<std::size_t>(j) * static_cast<std::size_t>(spec.first.n) + static_cast<std::size_t>(i));
}

Cell classify_point(const ScanSpec& spec, double p1, double p2) {
  Cell c;
  c.p1 = p1;
  c.p2 = p2;
  c.prediction = predict(spec.model, spec.plane, p1, p2);
  evaluate(spec, c);
  return c;
}

ScanResult scan(const ScanSpec& spec) {
  spec.validate();
  ScanResult r;
  r.spec = spec;
  const int n1 = spec.first.n, n2 = spec.plane == Plane::F1G1 ? spec.second.n : 1;
  r.cells.resize(static_cast<std::size_t>(n1) * static_cast<std::size_t>(n2));
  std::vector<std::size_t> source(r.cells.size());
  for (int j = 0; j < n2; ++j) {
    const double p2 = spec.plane == Plane::F1G1 ? spec.second.value(j) : 0.0;
    int mirror = -1;
    if (spec.use_symmetry && p2 < 0.0)
      for (int k = 0; k < n2; ++k)
        if (std::abs(spec.second.value(k) + p2) <= 1e-12 * std::abs(p2)) mirror = k;
    for (int i = 0; i < n1; ++i) {
      const std::size_t idx = static_cast<std::size_t>(j) * static_cast<std::size_t>(n1) + static_cast<std::size_t>(i);
      auto& c = r.cells[idx];
      c.i = i;
      c.j = j;
      c.index = idx;
      c.p1 = spec.first.value(i);
      c.p2 = p2;
      c.prediction = predict(spec.model, spec.plane, c.p1, c.p2);
      source[idx] = mirror >= 0 ? static_cast<std::size_t>(mirror) * static_cast<std::size_t>(n1) + static_cast<std::size_t>(i)
                                : idx;
    }
  }

  std::vector<std::size_t> tasks;
  for (std::size_t k = 0; k < r.cells.size(); ++k)
    if (source[k] == k) tasks.push_back(k);
  parallel_for(tasks.size(), spec.workers, [&](std::size_t t) { evaluate(spec, r.cells[tasks[t]]); });

  for (std::size_t k = 0; k < r.cells.size(); ++k) {
    auto& c = r.cells[k];
    if (source[k] != k) {
      const auto& s = r.cells[source[k]];
      const auto keep = c;
      c = s;
      c.i = keep.i;
      c.j = keep.j;
      c.index = keep.index;
      c.p2 = keep.p2;
      c.prediction = keep.prediction;
      c.mirrored = true;
    }
    auto& reg = r.regions[static_cast<std::size_t>(c.prediction)];
    ++reg.cells;
    ++reg.by_tag[static_cast<std::size_t>(c.verdict.tag)];
    if (c.disagrees()) r.disagreements.push_back(k);
    if (!c.error.empty()) ++r.errors;
    if (spec.plane == Plane::Y0 && spec.model == Model::BS && c.p1 != 0.0 && exists(c.verdict.tag))
      r.reported.push_back(k);
  }
  return r;
}

std::vector<FrontierPoint> frontier(const ScanResult& result, int refinements) {
  const auto& spec = result.spec;
  struct Job {
    double lo, hi, p2;
    bool lo_exists;
  };
  std::vector<Job> jobs;
  const int n1 = spec.first.n, n2 = spec.plane == Plane::F1G1 ? spec.second.n : 1;
  for (int j = 0; j < n2; ++j) {
    const Cell* prev = nullptr;
    for (int i = 0; i < n1; ++i) {
      const auto& c = result.at(i, j);
      if (!exists(c.verdict.tag) && !not_exists(c.verdict.tag)) continue;
      if (prev && exists(prev->verdict.tag) != exists(c.verdict.tag))
        jobs.push_back({prev->p1, c.p1, c.p2, exists(prev->verdict.tag)});
      prev = &c;
    }
  }

  std::vector<FrontierPoint> out(jobs.size());
  parallel_for(jobs.size(), spec.workers, [&](std::size_t k) {
    auto job = jobs[k];
    FrontierPoint fp;
    fp.p2 = job.p2;
    for (int n = 0; n < refinements; ++n) {
      const double mid = 0.5 * (job.lo + job.hi);
      const auto c = classify_point(spec, mid, job.p2);
      if (!exists(c.verdict.tag) && !not_exists(c.verdict.tag)) break;
      if (exists(c.verdict.tag) == job.lo_exists)
        job.lo = mid;
      else
        job.hi = mid;
      ++fp.refinements;
    }
    fp.bracket_low = job.lo;
    fp.bracket_high = job.hi;
    fp.p1 = 0.5 * (job.lo + job.hi);
    out[k] = fp;
  });
  std::stable_sort(out.begin(), out.end(), [](const FrontierPoint& a, const FrontierPoint& b) {
    return a.p2 != b.p2 ? a.p2 < b.p2 : a.p1 < b.p1;
  });
  return out;
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

nlohmann::json to_json(const ScanSpec& s) {
  nlohmann::json j;
  j["model"] = metrics::to_string(s.model);
  j["plane"] = to_string(s.plane);
  j["first"] = {{"name", p1_name(s)}, {"lo", s.first.lo}, {"hi", s.first.hi}, {"n", s.first.n}};
  if (s.plane == Plane::F1G1) j["second"] = {{"name", "g1"}, {"lo", s.second.lo}, {"hi", s.second.hi}, {"n", s.second.n}};
  j["horizon"] = s.solve.horizon;
  j["rel_tol"] = s.solve.control.rel_tol;
  j["abs_tol"] = s.solve.control.abs_tol;
  j["curvature_threshold"] = s.classify.curvature_threshold;
  j["use_symmetry"] = s.use_symmetry;
  j["horizon_escalations"] = s.horizon_escalations;
  return j;
}

nlohmann::json to_json(const Cell& c) {
  nlohmann::json j;
  j["index"] = c.index;
  j["i"] = c.i;
  j["j"] = c.j;
  j["p1"] = c.p1;
  j["p2"] = c.p2;
  j["prediction"] = to_string(c.prediction);
  j["verdict"] = analysis::to_json(c.verdict);
  j["disagrees"] = c.disagrees();
  j["abelian"] = c.abelian;
  j["mirrored"] = c.mirrored;
  j["F_inf"] = opt_json(c.F_inf);
  j["sup_norm"] = std::isfinite(c.sup_norm) ? nlohmann::json(c.sup_norm) : nlohmann::json(nullptr);
  j["decay_exponent"] = opt_json(c.decay_exponent);
  j["growth_rate"] = opt_json(c.growth_rate);
  j["first_integral"] = opt_json(c.first_integral);
  j["stop_param"] = c.stop_param;
  j["horizon"] = c.horizon;
  if (!c.error.empty()) j["error"] = c.error;
  return j;
}

nlohmann::json summary_json(const ScanResult& r, const std::vector<FrontierPoint>& frontier) {
  static const std::array<Tag, 4> tags{Tag::GlobalBoundedCurvature, Tag::CurvatureUnbounded, Tag::FiniteBlowUp,
                                       Tag::Inconclusive};
  static const std::array<Prediction, 3> preds{Prediction::MustExist, Prediction::MustNotExist, Prediction::Open};
  nlohmann::json j;
  j["schema_version"] = 1;
  j["spec"] = to_json(r.spec);
  j["cells"] = r.cells.size();
  j["errors"] = r.errors;
  nlohmann::json regions = nlohmann::json::object();
  for (auto p : preds) {
    const auto& reg = r.regions[static_cast<std::size_t>(p)];
    nlohmann::json by = nlohmann::json::object();
    for (auto t : tags) by[analysis::to_string(t)] = reg.by_tag[static_cast<std::size_t>(t)];
    regions[to_string(p)] = {{"cells", reg.cells}, {"by_tag", by}};
  }
  j["regions"] = regions;
  auto brief = [&](std::size_t k) {
    const auto& c = r.cells[k];
    return nlohmann::json{{"index", k}, {"p1", c.p1}, {"p2", c.p2}, {"prediction", to_string(c.prediction)},
                          {"tag", analysis::to_string(c.verdict.tag)}};
  };
  j["disagreements"] = nlohmann::json::array();
  for (auto k : r.disagreements) j["disagreements"].push_back(brief(k));
  j["reported"] = nlohmann::json::array();
  for (auto k : r.reported) j["reported"].push_back(brief(k));
  j["frontier"] = nlohmann::json::array();
  for (const auto& f : frontier)
    j["frontier"].push_back(
        {{"p1", f.p1}, {"p2", f.p2}, {"bracket", {f.bracket_low, f.bracket_high}}, {"refinements", f.refinements}});
  return j;
}

std::string to_csv(const ScanResult& r) {
  const bool two = r.spec.plane == Plane::F1G1;
  std::ostringstream os;
  os << "index,i,j," << p1_name(r.spec) << (two ? ",g1" : "")
     << ",prediction,tag,disagrees,abelian,mirrored,F_inf,sup_norm,decay_exponent,growth_rate,first_integral,"
        "stop_param,horizon,error\r\n";
  for (const auto& c : r.cells) {
    os << c.index << ',' << c.i << ',' << c.j << ',' << format_number(c.p1);
    if (two) os << ',' << format_number(c.p2);
    os << ',' << to_string(c.prediction) << ',' << analysis::to_string(c.verdict.tag) << ',' << (c.disagrees() ? 1 : 0)
       << ',' << (c.abelian ? 1 : 0) << ',' << (c.mirrored ? 1 : 0) << ',' << opt(c.F_inf) << ','
       << format_number(c.sup_norm) << ',' << opt(c.decay_exponent) << ',' << opt(c.growth_rate) << ','
       << opt(c.first_integral) << ',' << format_number(c.stop_param) << ',' << format_number(c.horizon) << ',' << csv_field(c.error) << "\r\n";
  }
  return os.str();
}

std::string to_gnuplot(const ScanResult& r) {
  std::ostringstream os;
  os << "# " << p1_name(r.spec) << (r.spec.plane == Plane::F1G1 ? " g1" : "")
     << " tag (0 GlobalBoundedCurvature, 1 CurvatureUnbounded, 2 FiniteBlowUp, 3 Inconclusive)\n";
  const int n1 = r.spec.first.n, n2 = r.spec.plane == Plane::F1G1 ? r.spec.second.n : 1;
  for (int i = 0; i < n1; ++i) {
    for (int j = 0; j < n2; ++j) {
      const auto& c = r.at(i, j);
      os << format_number(c.p1);
      if (r.spec.plane == Plane::F1G1) os << ' ' << format_number(c.p2);
      os << ' ' << tag_code(c.verdict.tag) << '\n';
    }
    if (n2 > 1) os << '\n';
  }
  return os.str();
}

}  // namespace g2inst::scan
