#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "hyperem/acceptance.hpp"
#include "hyperem/classify.hpp"
#include "hyperem/diagnostics.hpp"
#include "hyperem/error.hpp"
#include "hyperem/exact.hpp"
#include "hyperem/geometry.hpp"
#include "hyperem/io.hpp"
#include "hyperem/ode.hpp"
#include "hyperem/parallel.hpp"
#include "hyperem/svg.hpp"

namespace fs = std::filesystem;
using namespace hyperem;

namespace {

struct RunConfig {
  int n = 3;
  double p = 2.0;
  double curvature = 1.0;
  std::vector<double> alpha{1.0};
  std::string alpha_range;
  double r_max = 50.0;
  double tol = 1e-10;
  std::string out = "hyperem-out";
  std::string plot;
  std::string format = "json";
  std::string config;
  // command specific
  double spectral_c = 0.5;
  std::string mode = "classify";
  int k = 1;
  std::string suite = "all";
  std::string family = "all";
  double lo = 1.0;
  double hi = 2.0;
  double tol_alpha = 1e-4;
};

struct Binding {
  CLI::App* sub;
  std::string key;
  CLI::Option* opt;
  std::function<void(const nlohmann::json&)> set;
};

std::vector<Binding> g_bindings;

template <class T>
CLI::Option* bind_option(CLI::App* sub, const std::string& flags, const std::string& key, T& target,
                  const std::string& help) {
  CLI::Option* opt = sub->add_option(flags, target, help)->capture_default_str();
  g_bindings.push_back({sub, key, opt, [&target](const nlohmann::json& j) { target = j.get<T>(); }});
  return opt;
}

void add_common(CLI::App* sub, RunConfig& cfg, bool alpha_list) {
  bind_option(sub, "-n", "n", cfg.n, "dimension n >= 2");
  bind_option(sub, "-p", "p", cfg.p, "exponent p > 0");
  bind_option(sub, "--curvature", "curvature", cfg.curvature, "curvature scale c > 0 (metric curvature -c^2)");
  if (alpha_list) {
    bind_option(sub, "--alpha", "alpha", cfg.alpha, "initial amplitude(s), comma separated")->delimiter(',');
  }
  bind_option(sub, "--r-max", "r_max", cfg.r_max, "integration radius");
  bind_option(sub, "--tol", "tol", cfg.tol, "relative tolerance in [1e-13, 1e-3]");
  bind_option(sub, "--out", "out", cfg.out, "output directory");
  bind_option(sub, "--plot", "plot", cfg.plot, "write an SVG: solution or phase")
      ->check(CLI::IsMember({"solution", "phase"}));
  bind_option(sub, "--format", "format", cfg.format, "summary format")->check(CLI::IsMember({"json", "csv"}));
  sub->add_option("--config", cfg.config, "JSON file with the same keys; flags override it")
      ->check(CLI::ExistingFile);
}

void apply_config(CLI::App* active, const RunConfig& cfg) {
  if (cfg.config.empty()) return;
  std::ifstream f(cfg.config);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(f);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Validation, std::string("bad config file: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorKind::Validation, "config file must hold a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (Binding& b : g_bindings) {
      if (b.sub != active || b.key != it.key()) continue;
      known = true;
      if (b.opt->count() > 0) continue;
      try {
        if (b.key == "alpha" && it.value().is_number()) {
          b.set(nlohmann::json::array({it.value()}));
        } else {
          b.set(it.value());
        }
      } catch (const nlohmann::json::exception&) {
        throw Error(ErrorKind::Validation, "config key '" + it.key() + "' has the wrong type");
      }
    }
    if (!known) throw Error(ErrorKind::Validation, "unknown config key '" + it.key() + "'");
  }
}

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

std::vector<double> parse_range(const std::string& s) {
  const auto a = s.find(':');
  const auto b = s.find(':', a == std::string::npos ? a : a + 1);
  if (a == std::string::npos || b == std::string::npos) {
    throw Error(ErrorKind::Validation, "--alpha-range needs lo:hi:count");
  }
  double lo, hi;
  long count;
  try {
    lo = std::stod(s.substr(0, a));
    hi = std::stod(s.substr(a + 1, b - a - 1));
    count = std::stol(s.substr(b + 1));
  } catch (const std::exception&) {
    throw Error(ErrorKind::Validation, "--alpha-range needs lo:hi:count");
  }
  if (count < 1) throw Error(ErrorKind::Validation, "--alpha-range count must be >= 1");
  if (count == 1) return {lo};
  return uniform_grid(lo, hi, static_cast<std::size_t>(count));
}

void validate(const RunConfig& cfg) {
  Params{cfg.n, cfg.p, cfg.curvature, 1.0}.validate();
  if (!(cfg.tol >= 1e-13 && cfg.tol <= 1e-3)) throw Error(ErrorKind::Domain, "--tol must lie in [1e-13, 1e-3]");
  if (!(cfg.r_max > 0.0)) throw Error(ErrorKind::Domain, "--r-max must be > 0");
  for (double a : cfg.alpha) {
    if (!std::isfinite(a)) throw Error(ErrorKind::Domain, "alpha must be finite");
  }
}

std::vector<PlotSeries> plot_series(const std::vector<Trajectory>& trajs, const std::string& mode) {
  std::vector<PlotSeries> out;
  for (const Trajectory& t : trajs) {
    PlotSeries s;
    s.label = "alpha=" + num(t.alpha());
    // Resample on a uniform grid so that the file size stays bounded.
    constexpr std::size_t kPoints = 1500;
    for (double r : uniform_grid(t.r_begin(), t.r_end(), kPoints)) {
      const State st = t.at(r);
      s.points.emplace_back(mode == "phase" ? st.u : r, mode == "phase" ? st.v : st.u);
    }
    out.push_back(std::move(s));
  }
  return out;
}

int cmd_solve(const RunConfig& cfg) {
  validate(cfg);
  const fs::path out = cfg.out;
  const Equation eq = Equation::emden_fowler(cfg.n, cfg.p, cfg.curvature);
  struct Job {
    Trajectory traj;
    Report report;
    bool has_diag = false;
    DiagnosticsReport diag;
  };
  const auto jobs = parallel_map(cfg.alpha.size(), [&](std::size_t i) {
    Job j;
    IntegrateOptions opt;
    opt.r_max = cfg.r_max;
    opt.tol = cfg.tol;
    j.traj = integrate(eq, cfg.alpha[i], opt);
    if (cfg.alpha[i] != 0.0) {
      j.report = classify_solution({cfg.n, cfg.p, cfg.curvature, cfg.alpha[i]}, cfg.r_max, cfg.tol);
      if (cfg.curvature == 1.0) {
        j.has_diag = true;
        j.diag = diagnose(j.traj, j.report.decay.hypothesis);
      }
    }
    return j;
  });

  CsvTable summary({"alpha", "zeros", "sign_class", "decay_law", "fitted_rate", "fitted_constant",
                    "termination"});
  Json summary_json = Json::array();
  std::vector<Trajectory> trajs;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const Job& j = jobs[i];
    const std::string stem = "alpha_" + num(cfg.alpha[i]);
    write_file(out / (stem + "_trajectory.csv"), trajectory_csv(j.traj));
    write_file(out / (stem + "_events.json"), events_json(j.traj).dump());
    if (cfg.alpha[i] != 0.0) {
      Json rep = to_json(j.report);
      if (j.has_diag) rep.set("diagnostics", to_json(j.diag));
      write_file(out / (stem + "_report.json"), rep.dump());
      summary.add({cfg.alpha[i], static_cast<long long>(j.report.zero_count),
                   std::string(to_string(j.report.sign_class)),
                   std::string(to_string(j.report.decay.law)), j.report.decay.fitted_rate,
                   j.report.decay.fitted_constant, std::string(to_string(j.report.termination))});
      summary_json.push(to_json(j.report));
      std::printf("alpha=%s: %s, %zu zeros, %s rate=%.6g constant=%.6g, %s at r=%.6g\n",
                  num(cfg.alpha[i]).c_str(), to_string(j.report.sign_class), j.report.zero_count,
                  to_string(j.report.decay.law), j.report.decay.fitted_rate,
                  j.report.decay.fitted_constant, to_string(j.report.termination),
                  j.report.r_end);
    } else {
      std::printf("alpha=0: trivial solution u = 0\n");
    }
    trajs.push_back(j.traj);
  }
  if (cfg.format == "csv") {
    write_file(out / "summary.csv", summary.str());
  } else {
    write_file(out / "summary.json", summary_json.dump());
  }
  if (!cfg.plot.empty()) {
    PlotOptions po;
    po.title = "n=" + std::to_string(cfg.n) + ", p=" + num(cfg.p) +
               (cfg.plot == "phase" ? " phase plot" : " solutions");
    po.x_label = cfg.plot == "phase" ? "u" : "r";
    po.y_label = cfg.plot == "phase" ? "u'" : "u";
    write_file(out / ("plot_" + cfg.plot + ".svg"), render_svg(plot_series(trajs, cfg.plot), po));
  }
  return 0;
}

int cmd_separatrix(const RunConfig& cfg) {
  validate(cfg);
  if (cfg.curvature != 1.0) {
    throw Error(ErrorKind::Domain, "separatrix runs at curvature 1; scale U(0) by c^{2/(p-1)}");
  }
  const SeparatrixResult r = find_separatrix(cfg.n, cfg.p, cfg.lo, cfg.hi, cfg.tol_alpha, cfg.tol);
  CsvTable trace({"iter", "lo", "hi", "decision"});
  for (const BisectionStep& s : r.trace) trace.add({static_cast<long long>(s.iter), s.lo, s.hi, s.decision});
  const fs::path out = cfg.out;
  write_file(out / "separatrix_trace.csv", trace.str());
  write_file(out / "separatrix.json", to_json(r).dump());
  std::printf("alpha* = %.6f  (bracket [%.8f, %.8f], %d probes%s)\n", r.alpha_star, r.lo, r.hi,
              r.probes, r.converged ? "" : ", stopped at an undecided probe");
  return 0;
}

int cmd_sweep(const RunConfig& cfg) {
  validate(cfg);
  const std::vector<double> alphas = cfg.alpha_range.empty() ? cfg.alpha : parse_range(cfg.alpha_range);
  const fs::path out = cfg.out;
  if (cfg.mode == "classify") {
    const auto reports = parallel_map(alphas.size(), [&](std::size_t i) {
      return classify_solution({cfg.n, cfg.p, cfg.curvature, alphas[i]}, cfg.r_max, cfg.tol);
    });
    CsvTable summary({"alpha", "zeros", "decay_law", "fitted_rate", "fitted_constant"});
    Json all = Json::array();
    for (std::size_t i = 0; i < reports.size(); ++i) {
      const Report& r = reports[i];
      write_file(out / ("sweep_alpha_" + num(alphas[i]) + ".json"), to_json(r).dump());
      summary.add({alphas[i], static_cast<long long>(r.zero_count),
                   std::string(to_string(r.decay.law)), r.decay.fitted_rate, r.decay.fitted_constant});
      all.push(to_json(r));
      std::printf("alpha=%-10s zeros=%zu %s rate=%.6g constant=%.6g\n", num(alphas[i]).c_str(),
                  r.zero_count, to_string(r.decay.law), r.decay.fitted_rate, r.decay.fitted_constant);
    }
    if (cfg.format == "csv") {
      write_file(out / "sweep_summary.csv", summary.str());
    } else {
      write_file(out / "sweep_summary.json", all.dump());
    }
  } else if (cfg.mode == "first-zero") {
    if (cfg.curvature != 1.0) throw Error(ErrorKind::Domain, "first-zero mode runs at curvature 1");
    const auto rows = first_zero_map(cfg.n, cfg.p, alphas, cfg.tol);
    CsvTable t({"alpha", "r_alpha"});
    for (const FirstZeroRow& row : rows) {
      t.add({row.alpha, row.r_alpha ? *row.r_alpha : NAN});
      if (row.r_alpha) {
        std::printf("alpha=%-10s r_alpha=%.10g\n", num(row.alpha).c_str(), *row.r_alpha);
      } else {
        std::printf("alpha=%-10s no zero up to r=%g (out of domain)\n", num(row.alpha).c_str(),
                    row.r_max_used);
      }
    }
    write_file(out / "first_zero.csv", t.str());
  } else if (cfg.mode == "threshold") {
    if (cfg.curvature != 1.0) throw Error(ErrorKind::Domain, "threshold mode runs at curvature 1");
    if (cfg.k < 1) throw Error(ErrorKind::Domain, "--k must be >= 1");
    const double alpha_hi = alphas.empty() ? 10.0 : alphas.back();
    const ThresholdResult t = zero_count_threshold(cfg.n, cfg.p, static_cast<std::size_t>(cfg.k),
                                                   alpha_hi, cfg.tol_alpha, cfg.tol);
    write_file(out / ("threshold_k" + std::to_string(cfg.k) + ".json"), to_json(t).dump());
    if (t.ambiguous) {
      std::printf("EXPLORATORY k=%d: ambiguous, zero count not monotone on [%g, %g]\n", cfg.k, t.lo, t.hi);
    } else {
      std::printf("EXPLORATORY k=%d: alpha_k = %.6f (bracket [%.8f, %.8f])\n", cfg.k, t.alpha_k, t.lo, t.hi);
    }
  } else {
    throw Error(ErrorKind::Validation, "--mode must be classify, first-zero or threshold");
  }
  return 0;
}

int cmd_verify(const RunConfig& cfg) {
  AcceptanceOptions opt;
  opt.criteria = suite_criteria(cfg.suite);
  opt.out_dir = cfg.out;
  bool all = true;
  for (const CriterionResult& r : run_acceptance(opt)) {
    std::printf("%s\n", format_result(r).c_str());
    std::fflush(stdout);
    all &= r.pass;
  }
  return all ? 0 : 1;
}

int cmd_exact(const RunConfig& cfg) {
  std::vector<Family> families;
  if (cfg.family == "all") {
    families = {Family::A, Family::B, Family::C};
  } else if (cfg.family == "A" || cfg.family == "B" || cfg.family == "C") {
    families = {cfg.family == "A" ? Family::A : cfg.family == "B" ? Family::B : Family::C};
  } else {
    throw Error(ErrorKind::Validation, "--family must be A, B, C or all");
  }
  const fs::path out = cfg.out;
  const std::vector<double> grid = uniform_grid(0.0, 10.0, 201);
  Json all = Json::array();
  std::vector<PlotSeries> series;
  for (Family f : families) {
    const ClosedForm form = exact_ground_state(cfg.n, f);
    const double res = residual_check(form, grid);
    all.push(exact_verification_json(form, res));
    std::printf("family %s n=%d p=%.10g: U(0)=%.10g constant=%.10g printed=%.10g%s max residual=%.3g\n",
                to_string(f), cfg.n, form.p(), form.amplitude(), form.constant(),
                form.printed_constant(), form.printed_constant_matches() ? "" : " (MISMATCH)", res);
    CsvTable t({"r", "u", "du", "d2u"});
    PlotSeries s;
    s.label = std::string("family ") + to_string(f);
    for (double r : uniform_grid(0.0, cfg.r_max, 501)) {
      const Jet j = form.eval(r);
      t.add({r, j.u, j.du, j.d2u});
      s.points.emplace_back(cfg.plot == "phase" ? j.u : r, cfg.plot == "phase" ? j.du : j.u);
    }
    write_file(out / (std::string("exact_") + to_string(f) + ".csv"), t.str());
    series.push_back(std::move(s));
  }
  write_file(out / "exact.json", all.dump());
  if (!cfg.plot.empty()) {
    PlotOptions po;
    po.title = "closed-form ground states, n=" + std::to_string(cfg.n);
    po.x_label = cfg.plot == "phase" ? "U" : "r";
    po.y_label = cfg.plot == "phase" ? "U'" : "U";
    write_file(out / ("exact_" + cfg.plot + ".svg"), render_svg(series, po));
  }
  return 0;
}

int cmd_linear(const RunConfig& cfg) {
  validate(cfg);
  const LinearSolution sol = linear_solve(cfg.n, cfg.spectral_c, cfg.r_max, cfg.tol);
  const fs::path out = cfg.out;
  write_file(out / "linear_trajectory.csv", trajectory_csv(sol.traj));
  write_file(out / "linear_events.json", events_json(sol.traj).dump());
  const std::size_t zeros = count_zeros(sol.traj).k;
  Json j = Json::object()
               .set("n", cfg.n)
               .set("c", cfg.spectral_c)
               .set("spectral_gap", spectral_gap(cfg.n))
               .set("class", to_string(sol.cls))
               .set("zeros", zeros)
               .set("r_end", sol.traj.r_end())
               .set("termination", to_string(sol.traj.termination()));
  std::printf("n=%d c=%g: %s (gap %g), %zu zeros on [0, %g]\n", cfg.n, cfg.spectral_c,
              to_string(sol.cls), spectral_gap(cfg.n), zeros, sol.traj.r_end());
  if (sol.cls == LinearClass::PositiveSlowDecay) {
    const LowerBoundReport lb = linear_lower_bound_check(sol.traj, cfg.n, cfg.spectral_c);
    const LambdaPair lp = lambda_pair(cfg.n, cfg.spectral_c);
    const double theta = theta_at(sol.traj, ThetaVariant::Theta, sol.traj.r_end());
    j.set("lambda1", lp.lambda1)
        .set("lambda2", lp.lambda2)
        .set("lower_bound_holds", lb.holds)
        .set("lower_bound_margin", lb.worst_margin)
        .set("theta_at_r_end", theta);
    std::printf("  lambda1=%.6f lambda2=%.6f, lower bound %s (margin %.3g), Theta(%g)=%.6f\n",
                lp.lambda1, lp.lambda2, lb.holds ? "holds" : "FAILS", lb.worst_margin,
                sol.traj.r_end(), theta);
  }
  write_file(out / "linear.json", j.dump());
  if (!cfg.plot.empty()) {
    PlotOptions po;
    po.title = "linear mode n=" + std::to_string(cfg.n) + ", c=" + num(cfg.spectral_c);
    po.x_label = cfg.plot == "phase" ? "u" : "r";
    po.y_label = cfg.plot == "phase" ? "u'" : "u";
    write_file(out / ("linear_" + cfg.plot + ".svg"), render_svg(plot_series({sol.traj}, cfg.plot), po));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Radial Emden-Fowler solutions on hyperbolic space"};
  app.require_subcommand(1);
  RunConfig cfg;

  CLI::App* solve = app.add_subcommand("solve", "integrate and classify one or more amplitudes");
  add_common(solve, cfg, true);

  CLI::App* sep = app.add_subcommand("separatrix", "bisect for the ground-state amplitude U(0)");
  add_common(sep, cfg, false);
  bind_option(sep, "--lo", "lo", cfg.lo, "lower bracket (positive solution)");
  bind_option(sep, "--hi", "hi", cfg.hi, "upper bracket (sign-changing solution)");
  bind_option(sep, "--tol-alpha", "tol_alpha", cfg.tol_alpha, "bracket width at which bisection stops");

  CLI::App* sweep = app.add_subcommand("sweep", "classify, first-zero or threshold runs over alpha");
  add_common(sweep, cfg, true);
  bind_option(sweep, "--alpha-range", "alpha_range", cfg.alpha_range, "lo:hi:count grid");
  bind_option(sweep, "--mode", "mode", cfg.mode, "classify, first-zero or threshold")
      ->check(CLI::IsMember({"classify", "first-zero", "threshold"}));
  bind_option(sweep, "--k", "k", cfg.k, "zero count for threshold mode");
  bind_option(sweep, "--tol-alpha", "tol_alpha", cfg.tol_alpha, "bisection width for threshold mode");

  CLI::App* verify = app.add_subcommand("verify", "run the acceptance suite");
  add_common(verify, cfg, false);
  bind_option(verify, "--suite", "suite", cfg.suite,
       "all, separatrix, exact, decay, zeros, sublinear, functionals, euclidean, linear, rescale, "
       "determinism");

  CLI::App* exact = app.add_subcommand("exact", "closed-form ground states and residuals");
  add_common(exact, cfg, false);
  bind_option(exact, "--family", "family", cfg.family, "A, B, C or all");

  CLI::App* linear = app.add_subcommand("linear", "linear problem u'' + (n-1) coth r u' + c u = 0");
  add_common(linear, cfg, false);
  bind_option(linear, "--c", "c", cfg.spectral_c, "spectral parameter c > 0");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    CLI::App* active = app.get_subcommands().front();
    apply_config(active, cfg);
    if (active == solve) return cmd_solve(cfg);
    if (active == sep) return cmd_separatrix(cfg);
    if (active == sweep) return cmd_sweep(cfg);
    if (active == verify) return cmd_verify(cfg);
    if (active == exact) return cmd_exact(cfg);
    if (active == linear) return cmd_linear(cfg);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
