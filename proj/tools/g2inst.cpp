// Command-line front end: metric, solve, scan, verify, bubble.
//
// Exit codes: 0 success, 1 verification failure or disagreement, 2 usage error.

#include "g2inst/analysis.hpp"
#include "g2inst/calculus.hpp"
#include "g2inst/scan.hpp"
#include "g2inst/verify.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace g2inst;
using metrics::Model;
using scan::format_number;

namespace {

constexpr int kOk = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------- options

struct MetricOpts {
  std::string model = "bs";
  std::string r_range, t_range;
  double b = std::nan(""), c = std::nan("");
  std::string out = "-";
  std::string format = "csv";
};

struct SolveOpts {
  std::string model = "bggg", bundle = "p1";
  std::optional<double> f1, g1, x1, y0, b0;
  double b = std::nan(""), c = std::nan("");
  double horizon = 200.0;
  double rel_tol = 1e-12, abs_tol = 1e-14;
  std::string out_dir = ".";
  std::string format = "csv";
};

struct ScanOpts {
  std::string preset;
  std::string model = "bggg", plane = "f1g1";
  std::string first, second;
  double horizon = 0.0;
  unsigned workers = 0;
  int refine = 5;
  int escalations = 3;
  bool no_symmetry = false;
  bool gnuplot = false;
  std::string out_dir = ".";
};

struct VerifyOpts {
  std::string suite;
  double x1 = 1e4, r_max = 100.0;
  std::string json;
};

struct BubbleOpts {
  std::vector<double> x1{10.0, 1e2, 1e3, 1e4};
  std::vector<double> lambda{0.01, 0.02, 0.05, 0.1};
  std::string out = "-";
  std::string format = "csv";
};

struct Cli {
  CLI::App app{"Cohomogeneity-one G2 instanton toolkit: metrics, singular initial value problems, "
               "classification sweeps and verification suites."};
  MetricOpts metric;
  SolveOpts solve;
  ScanOpts scan;
  VerifyOpts verify;
  BubbleOpts bubble;
  std::vector<std::string> config_paths = std::vector<std::string>(5);
  CLI::App *metric_cmd = nullptr, *solve_cmd = nullptr, *scan_cmd = nullptr, *verify_cmd = nullptr,
           *bubble_cmd = nullptr;
};

void add_config(CLI::App* cmd, std::string& path) {
  cmd->add_option("--config", path,
                  "Flat key=value file (one option per line, '#' comments); explicit flags take precedence");
}

std::unique_ptr<Cli> build_cli() {
  auto cli = std::make_unique<Cli>();
  auto& app = cli->app;
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every command");

  {
    auto* m = cli->metric_cmd = app.add_subcommand("metric", "Tabulate a G2 metric profile with its residuals");
    auto& o = cli->metric;
    m->add_option("--model", o.model,
                  "bs: complete asymptotically conical metric on the spinor bundle of S^3 (r >= 1); "
                  "bggg: asymptotically locally conical metric (r >= 9/4); "
                  "taylor: general (b, c) metric integrated from its singular-orbit series (expert)")
        ->check(CLI::IsMember({"bs", "bggg", "taylor"}));
    m->add_option("--r", o.r_range,
                  "Radial range lo:hi[:samples] for bs/bggg (default 100 samples). At r = r_min the residual "
                  "columns hold their limit from r > r_min");
    m->add_option("--t", o.t_range, "Arclength range lo:hi[:samples] for taylor, lo > 0");
    m->add_option("--b", o.b, "taylor: b, with A_1 ~ t/2 ... and B_i -> b at the singular orbit");
    m->add_option("--c", o.c, "taylor: c, the free second-order coefficient of the series");
    m->add_option("--out", o.out, "Output file, '-' for stdout");
    m->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    add_config(m, cli->config_paths[0]);
  }
  {
    auto* s = cli->solve_cmd = app.add_subcommand("solve", "Seed, integrate and classify one instanton");
    auto& o = cli->solve;
    s->add_option("--model", o.model, "bs, bggg or taylor (general (b, c) metric, expert)")
        ->check(CLI::IsMember({"bs", "bggg", "taylor"}));
    s->add_option("--bundle", o.bundle,
                  "p1: bundle from the trivial isotropy homomorphism (connection vanishes on the singular orbit); "
                  "pid: bundle from the identity homomorphism")
        ->check(CLI::IsMember({"p1", "pid"}));
    s->add_option("--f1", o.f1, "p1: initial slope of f+ at the singular orbit");
    s->add_option("--g1", o.g1, "p1: initial slope of g+ at the singular orbit");
    s->add_option("--x1", o.x1, "p1 on bs: SU(2)^3-invariant seed x = x1 t + ... (the Clarke family)");
    s->add_option("--y0", o.y0, "pid on bs: SU(2)^3-invariant seed with y(0) = y0 (y0 = 0 is the limit connection)");
    s->add_option("--b0", o.b0, "pid: value of f- = g- at the singular orbit for the U(1)-symmetric seed");
    s->add_option("--b", o.b, "taylor: metric parameter b");
    s->add_option("--c", o.c, "taylor: metric parameter c");
    s->add_option("--horizon", o.horizon,
                  "End of the run: s for p1 seeds on bs/bggg (F, G variables), arclength t otherwise");
    s->add_option("--rel-tol", o.rel_tol, "Relative step tolerance of the Dormand-Prince integrator");
    s->add_option("--abs-tol", o.abs_tol, "Absolute step tolerance");
    s->add_option("--out-dir", o.out_dir, "Directory for trajectory.<format> and verdict.json");
    s->add_option("--format", o.format, "Trajectory format, csv or json")->check(CLI::IsMember({"csv", "json"}));
    add_config(s, cli->config_paths[1]);
  }
  {
    auto* s = cli->scan_cmd = app.add_subcommand("scan", "Classification sweep over a seed-parameter plane");
    auto& o = cli->scan;
    s->add_option("--preset", o.preset,
                  "bggg: P1 grid f1 in [0,3] x g1 in [0,1.5] at 60x30; bs-p1: P1 grid [-1.5,1.5]^2 at 40x40; "
                  "bs-pid: SU(2)^3 P_id sweep y0 in [-2,2] step 0.1")
        ->check(CLI::IsMember({"bggg", "bs-p1", "bs-pid"}));
    s->add_option("--model", o.model, "bs or bggg")->check(CLI::IsMember({"bs", "bggg"}));
    s->add_option("--plane", o.plane,
                  "f1g1: P1 seeds (f1, g1); y0: P_id seeds (y0 on bs, b0 on bggg); x1: Clarke seeds on bs")
        ->check(CLI::IsMember({"f1g1", "y0", "x1"}));
    s->add_option("--first", o.first, "First axis lo:hi:n (f1, y0/b0 or x1)");
    s->add_option("--second", o.second, "Second axis lo:hi:n (g1), f1g1 plane only");
    s->add_option("--horizon", o.horizon, "Run length per cell (s for f1g1, t otherwise); 0 keeps the default");
    s->add_option("--workers", o.workers, "Worker threads, 0 = logical cores");
    s->add_option("--refine", o.refine, "Bisection steps per frontier point")->check(CLI::NonNegativeNumber);
    s->add_option("--escalations", o.escalations, "Reruns of inconclusive cells with the horizon times 4")
        ->check(CLI::NonNegativeNumber);
    s->add_flag("--no-symmetry", o.no_symmetry, "Integrate g1 < 0 cells instead of mirroring (f1, |g1|)");
    s->add_flag("--gnuplot", o.gnuplot, "Also write scan_heatmap.dat");
    s->add_option("--out-dir", o.out_dir, "Directory for scan.csv and scan.json");
    add_config(s, cli->config_paths[2]);
  }
  {
    auto* v = cli->verify_cmd = app.add_subcommand("verify", "Run a named verification suite");
    auto& o = cli->verify;
    v->add_option("suite", o.suite, "calculus, metrics, closed-forms, seeds, energy, bubbling or sasaki")->required();
    v->add_option("--x1", o.x1, "energy: largest x1 of the sequence 1e2, 1e3, ...");
    v->add_option("--r-max", o.r_max, "energy: outer radius of the integration");
    v->add_option("--json", o.json, "Also write the report as JSON to this file");
    add_config(v, cli->config_paths[3]);
  }
  {
    auto* b = cli->bubble_cmd = app.add_subcommand("bubble", "Compare rescaled Clarke instantons with the ASD profile");
    auto& o = cli->bubble;
    b->add_option("--x1", o.x1, "Clarke parameters (comma separated)")->delimiter(',');
    b->add_option("--lambda", o.lambda, "Scales lambda, rescaling by sqrt(2 lambda / x1) (comma separated)")
        ->delimiter(',');
    b->add_option("--out", o.out, "Output file, '-' for stdout");
    b->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    add_config(b, cli->config_paths[4]);
  }
  return cli;
}

// ---------------------------------------------------------------- config merge

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::pair<std::string, std::string>> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file " + path);
  std::vector<std::pair<std::string, std::string>> kv;
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw UsageError(path + ":" + std::to_string(n) + ": expected key=value");
    std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && (value.front() == '"' || value.front() == '\'') && value.back() == value.front())
      value = value.substr(1, value.size() - 2);
    if (key.empty()) throw UsageError(path + ":" + std::to_string(n) + ": empty key");
    kv.emplace_back(key, value);
  }
  return kv;
}

bool given_on_command_line(const std::vector<std::string>& args, const std::string& flag) {
  for (const auto& a : args)
    if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
  return false;
}

// Config entries become flags inserted right after the subcommand name, unless given explicitly.
std::vector<std::string> merge_config(const std::vector<std::string>& args, CLI::App* cmd, const std::string& path) {
  std::vector<std::string> extra;
  for (const auto& [key, value] : read_config(path)) {
    const std::string flag = "--" + key;
    if (key == "config") throw UsageError("config files cannot include other config files");
    const auto* opt = cmd->get_option_no_throw(flag);
    if (!opt) throw UsageError("unknown key '" + key + "' in " + path + " for command " + cmd->get_name());
    if (given_on_command_line(args, flag)) continue;
    if (opt->get_expected_min() == 0) {
      if (value == "true" || value == "1" || value == "yes") extra.push_back(flag);
      else if (!(value == "false" || value == "0" || value == "no"))
        throw UsageError("flag '" + key + "' expects true or false");
    } else {
      extra.push_back(flag + "=" + value);
    }
  }
  std::vector<std::string> out;
  bool inserted = false;
  for (const auto& a : args) {
    out.push_back(a);
    if (!inserted && a == cmd->get_name()) {
      out.insert(out.end(), extra.begin(), extra.end());
      inserted = true;
    }
  }
  return out;
}

// ---------------------------------------------------------------- helpers

struct Range {
  double lo = 0.0, hi = 0.0;
  int n = 100;
};

Range parse_range(const std::string& text, const std::string& what, bool need_n = false) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ':')) parts.push_back(part);
  if (parts.size() < 2 || parts.size() > 3 || (need_n && parts.size() != 3))
    throw UsageError(what + ": expected lo:hi" + (need_n ? ":n" : "[:n]") + ", got '" + text + "'");
  Range r;
  try {
    std::size_t used = 0;
    r.lo = std::stod(parts[0], &used);
    if (used != parts[0].size()) throw std::invalid_argument("");
    r.hi = std::stod(parts[1], &used);
    if (used != parts[1].size()) throw std::invalid_argument("");
    if (parts.size() == 3) {
      r.n = std::stoi(parts[2], &used);
      if (used != parts[2].size()) throw std::invalid_argument("");
    }
  } catch (const std::exception&) {
    throw UsageError(what + ": cannot parse '" + text + "'");
  }
  if (!std::isfinite(r.lo) || !std::isfinite(r.hi) || !(r.hi > r.lo)) throw UsageError(what + ": need lo < hi");
  if (r.n < 2) throw UsageError(what + ": need at least 2 samples");
  return r;
}

Model parse_model(const std::string& m) {
  if (m == "bs") return Model::BS;
  if (m == "bggg") return Model::BGGG;
  return Model::TaylorSeed;
}

struct Output {
  std::ofstream file;
  std::ostream* os = &std::cout;
  explicit Output(const std::string& path) {
    if (path == "-") return;
    if (const auto dir = fs::path(path).parent_path(); !dir.empty()) fs::create_directories(dir);
    file.open(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot write " + path);
    os = &file;
  }
};

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  f << text;
}

std::string csv_line(const std::vector<double>& v) {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? "," : "") + format_number(v[k]);
  return s + "\r\n";
}

nlohmann::json number_or_null(double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); }

// ---------------------------------------------------------------- metric

int cmd_metric(const MetricOpts& o) {
  const Model model = parse_model(o.model);
  std::vector<metrics::MetricProfile> rows;
  std::vector<double> rs, ts;
  if (model == Model::TaylorSeed) {
    if (!std::isfinite(o.b) || !std::isfinite(o.c) || o.b <= 0.0) throw UsageError("taylor needs --b > 0 and --c");
    if (o.t_range.empty() || !o.r_range.empty()) throw UsageError("taylor takes --t lo:hi[:n], not --r");
    const auto r = parse_range(o.t_range, "--t");
    if (r.lo <= 0.0) throw UsageError("--t: lo must be positive");
    const auto im = metrics::integrate_metric(o.b, o.c, r.hi);
    if (im.t_end() < r.hi) throw std::runtime_error("metric ends at t = " + format_number(im.t_end()));
    for (int k = 0; k < r.n; ++k) {
      const double t = r.lo + (r.hi - r.lo) * k / (r.n - 1);
      rows.push_back(t < im.t_start() ? metrics::taylor_seed_metric(o.b, o.c, t) : im.profile_at(t));
      rs.push_back(std::nan(""));
      ts.push_back(t);
    }
  } else {
    if (o.r_range.empty() || !o.t_range.empty()) throw UsageError("bs/bggg take --r lo:hi[:n]");
    const auto r = parse_range(o.r_range, "--r");
    const double rmin = metrics::r_min(model);
    if (r.lo < rmin) throw UsageError("--r: lo must be >= " + format_number(rmin) + " for " + o.model);
    const metrics::CoordinateMap map(model, r.hi + 1.0, 400 + static_cast<std::size_t>(r.hi));
    for (int k = 0; k < r.n; ++k) {
      const double u = ((r.lo - rmin) * (r.n - 1 - k) + (r.hi - rmin) * k) / (r.n - 1);
      rows.push_back(metrics::closed_profile_offset(model, u));
      rs.push_back(rmin + u);
      ts.push_back(map.t_of_offset(u));
    }
  }

  auto residuals = [&](std::size_t k) {
    auto p = rows[k];
    if (model != Model::TaylorSeed && rs[k] == metrics::r_min(model))
      p = metrics::closed_profile_offset(model, 1e-8);
    return std::pair{metrics::metric_ode_residual(p), calculus::hitchin_residual(p.jet()).total()};
  };

  Output out(o.out);
  if (o.format == "csv") {
    *out.os << "r,t,A1,A2,A3,B1,B2,B3,dA1,dA2,dA3,dB1,dB2,dB3,ode_residual,hitchin_residual\r\n";
    for (std::size_t k = 0; k < rows.size(); ++k) {
      const auto& p = rows[k];
      const auto [ode, hit] = residuals(k);
      std::vector<double> v{rs[k], ts[k]};
      for (const auto* a : {&p.A, &p.B, &p.dA, &p.dB}) v.insert(v.end(), a->begin(), a->end());
      v.push_back(ode);
      v.push_back(hit);
      *out.os << csv_line(v);
    }
  } else {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["model"] = o.model;
    j["rows"] = nlohmann::json::array();
    for (std::size_t k = 0; k < rows.size(); ++k) {
      const auto& p = rows[k];
      const auto [ode, hit] = residuals(k);
      j["rows"].push_back({{"r", number_or_null(rs[k])}, {"t", ts[k]}, {"A", p.A}, {"B", p.B}, {"dA", p.dA},
                           {"dB", p.dB}, {"ode_residual", ode}, {"hitchin_residual", hit}});
    }
    *out.os << j.dump(2) << "\n";
  }
  return kOk;
}

// ---------------------------------------------------------------- solve

int cmd_solve(const SolveOpts& o) {
  const Model model = parse_model(o.model);
  metrics::MetricSeed ms;
  if (model == Model::TaylorSeed) {
    if (!std::isfinite(o.b) || !std::isfinite(o.c) || o.b <= 0.0) throw UsageError("taylor needs --b > 0 and --c");
    ms = {o.b, o.c};
  } else {
    if (std::isfinite(o.b) || std::isfinite(o.c)) throw UsageError("--b/--c only apply to --model taylor");
    ms = metrics::seed_of(model);
  }
  if (!(o.horizon > 0.0)) throw UsageError("--horizon must be positive");

  std::optional<seeds::SingularSeed> seed;
  std::string closed_form;
  if (o.bundle == "p1") {
    if (o.y0 || o.b0) throw UsageError("--y0/--b0 belong to --bundle pid");
    if (o.x1) {
      if (o.f1 || o.g1) throw UsageError("give either --x1 or --f1 and --g1");
      if (model != Model::BS) throw UsageError("--x1 seeds are defined on bs");
      seed = seeds::seed_su23_p1(*o.x1);
      closed_form = "clarke";
    } else {
      if (!o.f1 || !o.g1) throw UsageError("p1 needs --f1 and --g1 (or --x1 on bs)");
      seed = seeds::seed_p1(*o.f1, *o.g1, ms);
    }
  } else {
    if (o.f1 || o.g1 || o.x1) throw UsageError("--f1/--g1/--x1 belong to --bundle p1");
    if (o.y0) {
      if (o.b0) throw UsageError("give either --y0 or --b0");
      if (model != Model::BS) throw UsageError("--y0 seeds are defined on bs");
      seed = seeds::seed_su23_pid(*o.y0);
      if (*o.y0 == 0.0) closed_form = "limit";
    } else {
      if (!o.b0) throw UsageError("pid needs --y0 (bs) or --b0");
      seed = seeds::seed_pid(*o.b0, ms.b, ms.c);
    }
  }

  solve::SolveOptions so;
  so.horizon = o.horizon;
  so.control.rel_tol = o.rel_tol;
  so.control.abs_tol = o.abs_tol;
  const auto run = solve::solve(*seed, model, so);
  const auto curv = analysis::curvature_report(run);
  const auto verdict = analysis::classify(run, curv);

  nlohmann::json j;
  j["schema_version"] = 1;
  j["command"] = "solve";
  j["model"] = o.model;
  j["bundle"] = o.bundle;
  j["seed"] = seeds::to_json(*seed);
  j["variable"] = solve::to_string(run.variable);
  j["stop"] = {{"kind", integrator::to_string(run.trajectory.stop.kind)}, {"param", run.trajectory.stop.t}};
  j["verdict"] = analysis::to_json(verdict);
  j["curvature"] = analysis::to_json(curv);
  j["decay_exponent"] = curv.decay_exponent ? nlohmann::json(*curv.decay_exponent) : nlohmann::json(nullptr);
  j["F_inf"] = nullptr;
  j["holonomy_angle"] = nullptr;
  if (run.variable == solve::Variable::S && run.trajectory.stop.kind == integrator::StopKind::ReachedEnd) {
    try {
      const auto h = analysis::holonomy_infinity(run);
      j["holonomy"] = analysis::to_json(h);
      j["F_inf"] = h.F_inf;
      j["holonomy_angle"] = h.angle;
    } catch (const std::domain_error& e) {
      j["holonomy"] = {{"error", e.what()}};
    }
  }
  if (!closed_form.empty()) {
    double worst = 0.0;
    for (const auto& p : run.points) {
      if (!(p.r > metrics::r_min(model))) continue;
      const double x = closed_form == "clarke" ? instantons::clarke_closed_form(*o.x1, p.r).state.x
                                               : instantons::alim_closed_form(p.r).state.x;
      const double d = std::max({std::abs(p.state.f_plus - x), std::abs(p.state.g_plus - x),
                                 std::abs(p.state.f_minus), std::abs(p.state.g_minus)});
      worst = std::max(worst, d / std::max(1.0, std::abs(x)));
    }
    j["closed_form"] = {{"name", closed_form == "clarke" ? "Clarke" : "A^lim"}, {"max_relative_deviation", worst}};
  }

  fs::create_directories(o.out_dir);
  const fs::path dir(o.out_dir);
  std::ostringstream traj;
  if (o.format == "csv") {
    traj << "param,t,r,s,f_plus,g_plus,f_minus,g_minus,F,G,curvature_norm_sq\r\n";
    for (const auto& p : run.points)
      traj << csv_line({p.param, p.t, p.r, p.s, p.state.f_plus, p.state.g_plus, p.state.f_minus, p.state.g_minus, p.F,
                        p.G, analysis::curvature_norm_full(p.state, p.dstate, p.metric)});
  } else {
    nlohmann::json t;
    t["schema_version"] = 1;
    t["variable"] = solve::to_string(run.variable);
    t["points"] = nlohmann::json::array();
    for (const auto& p : run.points)
      t["points"].push_back({{"param", p.param}, {"t", p.t}, {"r", number_or_null(p.r)}, {"s", number_or_null(p.s)},
                             {"state", {p.state.f_plus, p.state.g_plus, p.state.f_minus, p.state.g_minus}},
                             {"F", p.F}, {"G", p.G},
                             {"curvature_norm_sq", analysis::curvature_norm_full(p.state, p.dstate, p.metric)}});
    traj << t.dump(2) << "\n";
  }
  write_file(dir / ("trajectory." + o.format), traj.str());
  write_file(dir / "verdict.json", j.dump(2) + "\n");

  std::cout << "verdict " << analysis::to_string(verdict.tag);
  if (!j["F_inf"].is_null()) std::cout << "  F_inf " << format_number(j["F_inf"].get<double>());
  if (j.contains("closed_form"))
    std::cout << "  deviation from " << j["closed_form"]["name"].get<std::string>() << " "
              << format_number(j["closed_form"]["max_relative_deviation"].get<double>());
  std::cout << "\nwrote " << (dir / ("trajectory." + o.format)).string() << ", " << (dir / "verdict.json").string()
            << "\n";
  return kOk;
}

// ---------------------------------------------------------------- scan

int cmd_scan(const ScanOpts& o) {
  scan::ScanSpec spec;
  if (!o.preset.empty()) {
    if (!o.first.empty() || !o.second.empty()) throw UsageError("--preset fixes the grid; drop --first/--second");
    spec = o.preset == "bggg" ? scan::bggg_region_spec() : o.preset == "bs-p1" ? scan::bs_p1_spec() : scan::bs_pid_spec();
  } else {
    spec.model = parse_model(o.model);
    spec.plane = o.plane == "f1g1" ? scan::Plane::F1G1 : o.plane == "y0" ? scan::Plane::Y0 : scan::Plane::X1;
    if (o.first.empty()) throw UsageError("--first lo:hi:n is required without --preset");
    const auto a = parse_range(o.first, "--first", true);
    spec.first = {a.lo, a.hi, a.n};
    if (spec.plane == scan::Plane::F1G1) {
      if (o.second.empty()) throw UsageError("--second lo:hi:n is required on the f1g1 plane");
      const auto b = parse_range(o.second, "--second", true);
      spec.second = {b.lo, b.hi, b.n};
    } else if (!o.second.empty()) {
      throw UsageError("--second only applies to the f1g1 plane");
    }
  }
  if (o.horizon < 0.0) throw UsageError("--horizon must be positive");
  if (o.horizon > 0.0) spec.solve.horizon = o.horizon;
  spec.workers = o.workers;
  spec.use_symmetry = !o.no_symmetry;
  spec.horizon_escalations = o.escalations;
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  const auto result = scan::scan(spec);
  const auto fr = scan::frontier(result, o.refine);
  fs::create_directories(o.out_dir);
  const fs::path dir(o.out_dir);
  write_file(dir / "scan.csv", scan::to_csv(result));
  write_file(dir / "scan.json", scan::summary_json(result, fr).dump(2) + "\n");
  if (o.gnuplot) write_file(dir / "scan_heatmap.dat", scan::to_gnuplot(result));

  static const char* preds[] = {"MustExist", "MustNotExist", "Open"};
  static const char* tags[] = {"GlobalBoundedCurvature", "CurvatureUnbounded", "FiniteBlowUp", "Inconclusive"};
  std::cout << result.cells.size() << " cells, " << result.errors << " errors\n";
  for (std::size_t p = 0; p < 3; ++p) {
    const auto& reg = result.regions[p];
    if (reg.cells == 0) continue;
    std::cout << "  " << preds[p] << " (" << reg.cells << "):";
    for (std::size_t t = 0; t < 4; ++t)
      if (reg.by_tag[t]) std::cout << " " << tags[t] << " " << reg.by_tag[t];
    std::cout << "\n";
  }
  std::cout << "disagreements on theorem-covered cells: " << result.disagreements.size() << "\n";
  if (!result.reported.empty()) std::cout << "reported (not failures): " << result.reported.size() << " cells\n";
  std::cout << "frontier points: " << fr.size() << "\nwrote " << (dir / "scan.csv").string() << ", "
            << (dir / "scan.json").string() << (o.gnuplot ? ", " + (dir / "scan_heatmap.dat").string() : "") << "\n";
  return result.disagreements.empty() ? kOk : kFail;
}

// ---------------------------------------------------------------- verify

int cmd_verify(const VerifyOpts& o) {
  const auto& names = verify::suite_names();
  if (std::find(names.begin(), names.end(), o.suite) == names.end()) {
    std::string all;
    for (const auto& n : names) all += (all.empty() ? "" : ", ") + n;
    throw UsageError("unknown suite '" + o.suite + "' (choose from " + all + ")");
  }
  if (!(o.x1 >= 1e2) || !(o.r_max > 1.0)) throw UsageError("energy needs --x1 >= 100 and --r-max > 1");
  verify::Options vo;
  vo.x1 = o.x1;
  vo.r_max = o.r_max;
  const auto report = verify::run_suite(o.suite, vo);
  std::cout << verify::format_table(report);
  if (!o.json.empty()) {
    Output out(o.json);
    *out.os << verify::to_json(report).dump(2) << "\n";
  }
  return report.pass() ? kOk : kFail;
}

// ---------------------------------------------------------------- bubble

int cmd_bubble(const BubbleOpts& o) {
  if (o.x1.empty() || o.lambda.empty()) throw UsageError("need at least one --x1 and one --lambda");
  for (double v : o.x1)
    if (!(v > 0.0)) throw UsageError("--x1 values must be positive");
  for (double v : o.lambda)
    if (!(v > 0.0)) throw UsageError("--lambda values must be positive");
  struct Row {
    double x1, lambda, sup, scaled;
  };
  std::vector<Row> rows;
  double lc = 0.0;
  for (double x1 : o.x1)
    for (double l : o.lambda) {
      const double v = analysis::bubbling_compare(x1, l);
      rows.push_back({x1, l, v, v * x1 / (l * l)});
      lc += std::log(rows.back().scaled);
    }
  const double c = std::exp(lc / static_cast<double>(rows.size()));
  double resid = 0.0;
  for (const auto& r : rows) resid = std::max(resid, std::abs(r.scaled / c - 1.0));

  Output out(o.out);
  if (o.format == "csv") {
    *out.os << "x1,lambda,sup_norm,sup_norm_x1_over_lambda_sq\r\n";
    for (const auto& r : rows) *out.os << csv_line({r.x1, r.lambda, r.sup, r.scaled});
  } else {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["rows"] = nlohmann::json::array();
    for (const auto& r : rows)
      j["rows"].push_back({{"x1", r.x1}, {"lambda", r.lambda}, {"sup_norm", r.sup}, {"scaled", r.scaled}});
    j["fit"] = {{"c", c}, {"max_relative_residual", resid}};
    *out.os << j.dump(2) << "\n";
  }
  (o.out == "-" ? std::cerr : std::cout) << "fitted c " << format_number(c) << ", max relative residual "
                                         << format_number(resid) << "\n";
  return kOk;
}

int parse(Cli& cli, const std::vector<std::string>& args) {
  std::vector<std::string> rev(args.rbegin(), args.rend());
  cli.app.parse(rev);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  auto cli = build_cli();
  try {
    parse(*cli, args);
    CLI::App* subs[] = {cli->metric_cmd, cli->solve_cmd, cli->scan_cmd, cli->verify_cmd, cli->bubble_cmd};
    for (std::size_t k = 0; k < 5; ++k) {
      if (!subs[k]->parsed() || cli->config_paths[k].empty()) continue;
      const auto merged = merge_config(args, subs[k], cli->config_paths[k]);
      cli = build_cli();
      parse(*cli, merged);
      break;
    }
  } catch (const CLI::CallForHelp& e) {
    return cli->app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return cli->app.exit(e);
  } catch (const CLI::ParseError& e) {
    cli->app.exit(e);
    return kUsage;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (cli->metric_cmd->parsed()) return cmd_metric(cli->metric);
    if (cli->solve_cmd->parsed()) return cmd_solve(cli->solve);
    if (cli->scan_cmd->parsed()) return cmd_scan(cli->scan);
    if (cli->verify_cmd->parsed()) return cmd_verify(cli->verify);
    if (cli->bubble_cmd->parsed()) return cmd_bubble(cli->bubble);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFail;
  }
  return kUsage;
}
