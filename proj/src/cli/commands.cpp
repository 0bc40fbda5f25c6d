#include <omp.h>

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

#include "gspde/cli.hpp"
#include "gspde/conditions.hpp"
#include "gspde/ensemble_io.hpp"
#include "gspde/errors.hpp"
#include "gspde/rng.hpp"

namespace gspde::cli {

using nlohmann::json;

namespace {

std::filesystem::path prepare_output(const ExperimentConfig& cfg, const std::string& name) {
  std::error_code ec;
  std::filesystem::create_directories(cfg.output_dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + cfg.output_dir.string());
  return cfg.output_dir / name;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << content;
}

void write_json(const ExperimentConfig& cfg, const std::string& name, const std::string& command,
                json body) {
  body["header"] = header_lines(command, cfg);
  write_file(prepare_output(cfg, name), body.dump(2) + "\n");
}

std::string csv_header(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& l : lines) out += "# " + l + "\n";
  return out;
}

json check_entry(const std::string& name, const MonteCarloCheck& c, bool pass) {
  return {{"name", name},       {"estimate", c.mc_estimate},
          {"oracle", c.quadrature_value}, {"se", c.se},
          {"deviation_in_se", c.deviation_in_se()}, {"pass", pass}};
}

struct Problem {
  SpdeProblem spde;
  SolverConfig solver;
  std::uint64_t n_runs = 1;
  std::string drift_type;
};

// Adds the contribution of the diffusion to the declared constants of the
// pair: ||B(u) - B(v)||^2 = L^2 ||u - v||^2 for the multiplication operator,
// ||B||^2 constant for a constant B.
void declare_pair_constants(DriftOperator& drift, const DiffusionOperator& b, Reader r) {
  const std::string type = r.has("type") ? r.string("type") : "zero";
  DeclaredConstants& k = drift.constants();
  if (type == "lipschitz") {
    const double L2 = std::pow(r.number("L"), 2);
    k.c += L2;
    k.c1 += L2;
  } else if (type == "constant") {
    const double hs2 = std::pow(b.hs_norm(b(0.0, Eigen::VectorXd::Zero(Eigen::Index(b.space().dim())))), 2);
    auto f = k.f;
    k.f = [f, hs2](double t) { return f(t) + hs2; };
  }
}

Problem build_problem(ExperimentConfig& cfg, bool need_dt) {
  Reader root(cfg.resolved, "");
  CovarianceKernel kernel = build_kernel(root.child("kernel"));
  const double T = kernel.horizon();
  Reader drift_r = root.child("drift");
  OperatorSetup setup = build_drift(drift_r);
  const GalerkinSpace& space = setup.space;
  if (!root.has("diffusion")) cfg.resolved["diffusion"] = {{"type", "zero"}};
  DiffusionOperator diffusion = build_diffusion(root.child("diffusion"), space);
  declare_pair_constants(setup.drift, diffusion, root.child("diffusion"));
  if (!root.has("noise")) cfg.resolved["noise"] = {{"type", "explicit"}, {"lambdas", {1.0}}};
  NoiseSpec spec = build_noise(root.child("noise"));
  if (!root.has("h")) cfg.resolved["h"] = {{"type", "zero"}};
  OperatorValuedIntegrand h = build_h(root.child("h"), space.dim(), spec.size(), T);
  if (!root.has("x0")) cfg.resolved["x0"] = {{"type", "zero"}};
  double x0_std = 0.0;
  Eigen::VectorXd x0 = build_x0(root.child("x0"), space.dim(), &x0_std);
  Reader sr = root.child("solver");
  if (!need_dt && !sr.has("dt")) cfg.resolved["solver"]["dt"] = T;
  SolverConfig solver = build_solver(sr, cfg, T);
  const std::uint64_t n_runs = sr.integer("n_runs", 1);
  if (n_runs < 1) sr.fail("n_runs", "must be >= 1");
  try {
    h.validate(kernel.p());
  } catch (const DomainError& e) {
    throw ConfigError("config section /h: " + std::string(e.what()));
  }
  return {SpdeProblem{setup.drift, diffusion, h, kernel, spec, x0, x0_std}, solver, n_runs,
          drift_r.string("type")};
}

}  // namespace

int cmd_sample(ExperimentConfig& cfg, std::ostream& log) {
  Reader root(cfg.resolved, "");
  const CovarianceKernel kernel = build_kernel(root.child("kernel"));
  const TimeGrid grid = build_grid(root.child("grid"), kernel.horizon());
  Reader s = root.child("sample");
  const std::uint64_t n_paths = s.integer("n_paths");
  if (n_paths < 1) s.fail("n_paths", "must be >= 1");
  const std::string coords = s.string("coords", "scalar");
  const std::uint64_t n_sub = s.integer("fidelity_nodes", 8);
  if (n_sub < 1 || n_sub > grid.cells()) s.fail("fidelity_nodes", "must lie in 1..cells");
  const double z = s.number("z", 3.0);
  const bool binary = s.boolean("binary", true);
  std::optional<NoiseSpec> spec;
  if (coords == "G")
    spec = build_noise(root.child("noise"));
  else if (coords != "scalar")
    s.fail("coords", "expected scalar or G");
  const auto header = header_lines("sample", cfg);

  const GaussianEnsemble e = spec ? sample_G(kernel, *spec, grid, n_paths, cfg.seed_G)
                                  : sample_scalar(kernel, grid, n_paths, cfg.seed_G);
  {
    std::ofstream out(prepare_output(cfg, "ensemble.csv"), std::ios::binary);
    io::write_ensemble_csv(out, e, header);
  }
  if (binary) {
    std::ofstream out(prepare_output(cfg, "ensemble.bin"), std::ios::binary);
    io::write_ensemble_binary(out, e, cfg.resolved["kernel"].dump());
  }
  json report;
  report["coordinates"] = json::array();
  bool pass = true;
  for (std::size_t c = 0; c < e.n_coords(); ++c) {
    const double scale = spec ? std::sqrt(spec->lambda(c)) : 1.0;
    const CovarianceFidelity f = covariance_fidelity(e, kernel, n_sub, z, c, scale);
    pass = pass && f.pass;
    report["coordinates"].push_back({{"coord", c},
                                     {"nodes", f.nodes},
                                     {"max_deviation_in_se", f.max_deviation_in_se},
                                     {"pass", f.pass}});
    log << "coordinate " << c << ": max covariance deviation " << f.max_deviation_in_se
        << " SE (limit " << z << ")\n";
  }
  report["pass"] = pass;
  write_json(cfg, "fidelity.json", "sample", report);
  return pass ? kOk : kVerificationFailure;
}

int cmd_verify(ExperimentConfig& cfg, std::ostream& log) {
  Reader root(cfg.resolved, "");
  const CovarianceKernel kernel = build_kernel(root.child("kernel"));
  const double T = kernel.horizon();
  Reader v = root.child("verify");
  const auto checks = v.strings("checks", {"covariance", "isometry", "integral_covariance", "cr", "conditions"});
  const bool inject = v.boolean("inject_wrong_oracle", false);
  const double confidence = confidence_for_z(v.number("z", 3.0));
  json entries = json::array();
  auto add = [&](json entry) {
    log << (entry["pass"].get<bool>() ? "PASS " : "FAIL ") << entry["name"].get<std::string>() << "\n";
    entries.push_back(std::move(entry));
  };

  for (const auto& check : checks) {
    if (check == "covariance") {
      std::vector<double> hs = v.numbers("hurst_values", {});
      const std::uint64_t cells = v.integer("covariance_cells", 64);
      const std::uint64_t n = v.integer("covariance_paths", 10000);
      if (cells < 8) v.fail("covariance_cells", "must be >= 8");
      if (n < 2) v.fail("covariance_paths", "must be >= 2");
      const TimeGrid grid = TimeGrid::uniform(T, cells + 1);
      std::vector<CovarianceKernel> kernels;
      if (hs.empty()) kernels.push_back(kernel);
      for (double H : hs) {
        try {
          kernels.push_back(CovarianceKernel::fbm(H, T));
        } catch (const DomainError& e) {
          v.fail("hurst_values", e.what());
        }
      }
      for (std::size_t i = 0; i < kernels.size(); ++i) {
        const auto e = sample_scalar(kernels[i], grid, n,
                                     substream_seed(cfg.seed_G, Stream::kGaussianPaths, i + 1));
        const auto f = covariance_fidelity(e, kernels[i], 8, z_for_confidence(confidence));
        add({{"name", "covariance " + kernels[i].label()}, {"max_deviation_in_se", f.max_deviation_in_se}, {"pass", f.pass}});
      }
    } else if (check == "isometry") {
      const auto names = v.strings("isometry_functions", {"1", "s", "s2"});
      const std::uint64_t cells = v.integer("isometry_cells", 128);
      const std::uint64_t n = v.integer("isometry_paths", 100000);
      const double rel_tol = v.number("isometry_rel_tol", 0.05);
      if (n < 2) v.fail("isometry_paths", "must be >= 2");
      std::vector<PiecewiseFunction> fs;
      for (const auto& name : names) fs.push_back(build_scalar_function(name, T, v.field("isometry_functions")));
      const auto e = sample_scalar(kernel, TimeGrid::uniform(T, cells + 1), n,
                                   substream_seed(cfg.seed_G, Stream::kGaussianPaths, 100));
      for (std::size_t i = 0; i < fs.size(); ++i)
        for (std::size_t j = i; j < fs.size(); ++j) {
          MonteCarloCheck c = verify_isometry(fs[i], fs[j], kernel, e, confidence);
          if (inject) {
            c.quadrature_value = 1.5 * c.quadrature_value + 1.0;
            c.pass = c.deviation_in_se() <= z_for_confidence(confidence);
          }
          const double rel = std::abs(c.mc_estimate - c.quadrature_value) / std::abs(c.quadrature_value);
          add(check_entry("isometry f=" + names[i] + " h=" + names[j], c, c.pass && rel <= rel_tol));
        }
    } else if (check == "integral_covariance") {
      const NoiseSpec spec = build_noise(root.child("noise"));
      const std::uint64_t cells = v.integer("integral_cells", 64);
      const std::uint64_t n = v.integer("integral_paths", 50000);
      if (n < 2) v.fail("integral_paths", "must be >= 2");
      const std::size_t N = spec.size();
      const auto G = sample_G(kernel, spec, TimeGrid::uniform(T, cells + 1), n,
                              substream_seed(cfg.seed_G, Stream::kGaussianPaths, 200));
      Eigen::VectorXd x{Eigen::Index(N)}, y{Eigen::Index(N)};
      for (std::size_t i = 0; i < N; ++i) {
        x[Eigen::Index(i)] = 1.0 / double(i + 1);
        y[Eigen::Index(i)] = 1.0;
      }
      for (const std::string type : {"rank1", "identity"}) {
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(Eigen::Index(N), Eigen::Index(N));
        if (type == "rank1")
          m(0, 0) = 1.0;
        else
          m.setIdentity();
        const OperatorValuedIntegrand h{PiecewiseFunction::constant(m, T), std::nullopt, std::nullopt};
        IntegralCovarianceReport r = verify_integral_covariance(h, h, x, y, spec, kernel, G, confidence);
        if (inject) {
          r.trace.quadrature_value = 1.5 * r.trace.quadrature_value + 1.0;
          r.trace.pass = r.trace.deviation_in_se() <= z_for_confidence(confidence);
        }
        add(check_entry("integral covariance pairing h=" + type, r.pairing, r.pairing.pass));
        add(check_entry("integral covariance trace h=" + type, r.trace, r.trace.pass));
      }
    } else if (check == "cr") {
      std::vector<PiecewiseFunction> fs;
      for (const char* name : {"1", "s", "s2", "first_half"}) fs.push_back(build_scalar_function(name, T, ""));
      const CrCheckReport r = empirical_cr_check(kernel, fs);
      add({{"name", "condition C_R"}, {"ratios", r.ratios}, {"worst_ratio", r.worst_ratio}, {"pass", r.pass}});
    } else if (check == "conditions") {
      OperatorSetup setup = build_drift(root.child("drift"));
      if (!root.has("diffusion")) cfg.resolved["diffusion"] = {{"type", "zero"}};
      const DiffusionOperator b = build_diffusion(root.child("diffusion"), setup.space);
      declare_pair_constants(setup.drift, b, root.child("diffusion"));
      ConditionOptions o;
      o.n_samples = v.integer("condition_samples", 1000);
      o.seed = substream_seed(cfg.master_seed, Stream::kConditions, 0);
      ConditionOptions o1 = o;
      o1.n_samples = v.integer("h1_samples", 50);
      const bool expect_h1_failure = v.boolean("expect_h1_failure", false);
      const auto h1 = check_h1(setup.drift, o1);
      add({{"name", std::string("H1 ") + setup.drift.name() + (expect_h1_failure ? " (expected to fail)" : "")},
           {"ratios", h1.ratios},
           {"pass", h1.pass != expect_h1_failure}});
      for (const auto& r : {check_h2(setup.drift, b, o), check_h3(setup.drift, b, o), check_h4(setup.drift, o)})
        add({{"name", r.condition + " " + setup.drift.name()},
             {"worst_margin", r.worst_margin},
             {"empirical_constant", r.empirical_constant},
             {"slope", r.slope},
             {"pass", r.pass}});
    } else {
      v.fail("checks", "unknown check '" + check + "'");
    }
  }
  bool all = true;
  for (const auto& e : entries) all = all && e["pass"].get<bool>();
  write_json(cfg, "verify_report.json", "verify", {{"checks", entries}, {"all_pass", all}});
  return all ? kOk : kVerificationFailure;
}

int cmd_solve(ExperimentConfig& cfg, std::ostream& log) {
  Problem p = build_problem(cfg, true);
  Reader root(cfg.resolved, "");
  Reader sr = root.child("solver");
  const std::uint64_t csv_runs = std::min<std::uint64_t>(sr.integer("csv_runs", 1), p.n_runs);
  std::optional<std::uint64_t> report_mode;
  double z = 3.0;
  if (root.has("report")) {
    Reader rr = root.child("report");
    report_mode = rr.integer("mode", 1);
    z = rr.number("z", 3.0);
    if (*report_mode < 1 || *report_mode > p.spde.drift.space().dim()) rr.fail("mode", "outside 1..dim H");
    if (p.drift_type != "linear_heat") rr.fail("mode", "the per-mode oracle needs a linear_heat drift");
    if (p.spde.h.h.pieces().size() != 1 || !p.spde.h.h.pieces().front().is_constant())
      rr.fail("mode", "the per-mode oracle needs a time-constant h");
    if (!p.spde.diffusion.state_independent()) rr.fail("mode", "the per-mode oracle needs an additive B");
  }
  check_contract(p.spde.drift, p.solver.dt);
  const auto header = header_lines("solve", cfg);

  const auto runs = solve_ensemble(p.spde, p.solver, p.n_runs);

  std::ostringstream csv;
  csv << csv_header(header) << "run,t,k,X,Y,w\n";
  for (std::size_t r = 0; r < csv_runs; ++r) {
    const auto& s = runs[r];
    for (std::size_t i = 0; i < s.grid.size(); ++i)
      for (Eigen::Index k = 0; k < s.X.cols(); ++k)
        csv << r << ',' << io::format_double(s.grid.node(i)) << ',' << k + 1 << ','
            << io::format_double(s.X(Eigen::Index(i), k)) << ','
            << io::format_double(s.Y(Eigen::Index(i), k)) << ','
            << io::format_double(s.w(Eigen::Index(i), k)) << '\n';
  }
  write_file(prepare_output(cfg, "solution.csv"), csv.str());

  long total_iter = 0;
  int max_iter = 0;
  double max_res = 0.0, decomposition = 0.0;
  for (const auto& s : runs) {
    for (int it : s.iterations) total_iter += it, max_iter = std::max(max_iter, it);
    for (double res : s.residuals) max_res = std::max(max_res, res);
    decomposition = std::max(decomposition, (s.X - (s.Y + s.w)).cwiseAbs().maxCoeff());
  }
  const auto& space = p.spde.drift.space();
  const MomentEstimates m = estimate_moments(runs, space, space.alpha());
  json diag = {{"n_runs", p.n_runs},
               {"steps", p.solver.steps()},
               {"total_inner_iterations", total_iter},
               {"max_inner_iterations", max_iter},
               {"max_inner_residual", max_res},
               {"decomposition_max_error", decomposition},
               {"sup_t_mean_H2", m.sup_t_mean_H2},
               {"sup_t_node", m.sup_node},
               {"mean_V_alpha", m.mean_V_alpha}};
  log << "solved " << p.n_runs << " run(s), " << p.solver.steps() << " steps, max inner residual "
      << max_res << "\n";

  int code = kOk;
  if (report_mode) {
    const Eigen::Index k = Eigen::Index(*report_mode - 1);
    const double lambda = space.eigenvalue(std::size_t(k));
    const double T = p.solver.horizon;
    const Eigen::MatrixXd h0 = p.spde.h.h(0.0);
    double g_weight = 0.0;
    for (std::size_t n = 0; n < p.spde.spec.size(); ++n)
      g_weight += h0(k, Eigen::Index(n)) * h0(k, Eigen::Index(n)) * p.spde.spec.lambda(n);
    const auto decay = PiecewiseFunction::exponential_decay(lambda, T, T);
    double oracle = g_weight > 0.0 ? g_weight * weighted_double_integral(p.spde.kernel, decay, decay) : 0.0;
    const Eigen::MatrixXd b0 = p.spde.diffusion(0.0, Eigen::VectorXd::Zero(Eigen::Index(space.dim())));
    oracle += b0.row(k).squaredNorm() * (1.0 - std::exp(-2.0 * lambda * T)) / (2.0 * lambda);
    oracle += p.spde.x0_std * p.spde.x0_std * std::exp(-2.0 * lambda * T);

    const double n = double(runs.size());
    double mean = 0.0;
    for (const auto& s : runs) mean += s.X(s.X.rows() - 1, k);
    mean /= n;
    double m2 = 0.0, m4 = 0.0;
    for (const auto& s : runs) {
      const double d = s.X(s.X.rows() - 1, k) - mean;
      m2 += d * d;
      m4 += d * d * d * d;
    }
    const double var = n > 1 ? m2 / (n - 1.0) : 0.0;
    const double se = std::sqrt(std::max(0.0, m4 / n - (m2 / n) * (m2 / n)) / n);
    const bool pass = std::abs(var - oracle) <= z * se;
    diag["mode_variance"] = {{"mode", *report_mode}, {"estimate", var}, {"oracle", oracle},
                             {"se", se},             {"pass", pass}};
    log << (pass ? "PASS" : "FAIL") << " variance of mode " << *report_mode << ": " << var
        << " vs oracle " << oracle << " (SE " << se << ")\n";
    if (!pass) code = kVerificationFailure;
  }
  // Deterministic heat flow: every mode follows the backward-Euler recursion
  // x0_k (1 + dt lambda_k)^{-i}.
  if (p.drift_type == "linear_heat" && p.spde.h.h.is_zero() && p.spde.diffusion.is_zero() &&
      p.spde.x0_std == 0.0) {
    const auto& s = runs.front();
    const double scale = std::max(p.spde.x0.cwiseAbs().maxCoeff(), 1e-300);
    std::ostringstream oc;
    oc << csv_header(header) << "t,k,X,oracle\n";
    double worst = 0.0;
    for (std::size_t i = 0; i < s.grid.size(); ++i)
      for (Eigen::Index k = 0; k < s.X.cols(); ++k) {
        const double o = p.spde.x0(k) * std::pow(1.0 + p.solver.dt * space.eigenvalue(std::size_t(k)), -double(i));
        const double x = s.X(Eigen::Index(i), k);
        worst = std::max(worst, std::abs(x - o) / (o != 0.0 ? std::abs(o) : scale));
        oc << io::format_double(s.grid.node(i)) << ',' << k + 1 << ',' << io::format_double(x) << ','
           << io::format_double(o) << '\n';
      }
    write_file(prepare_output(cfg, "mode_oracle.csv"), oc.str());
    const bool pass = worst <= 1e-12;
    diag["mode_oracle"] = {{"max_relative_error", worst}, {"tolerance", 1e-12}, {"pass", pass}};
    log << (pass ? "PASS" : "FAIL") << " per-mode recursion, max relative error " << worst << "\n";
    if (!pass) code = kVerificationFailure;
  }
  write_json(cfg, "diagnostics.json", "solve", diag);
  return code;
}

int cmd_rates(ExperimentConfig& cfg, std::ostream& log) {
  Reader root(cfg.resolved, "");
  Reader rr = root.child("rates");
  const std::vector<double> dts = rr.numbers("dt_list");
  const std::uint64_t n_runs = rr.integer("n_runs", 1);
  if (dts.size() < 2) rr.fail("dt_list", "needs at least two step sizes");
  if (n_runs < 1) rr.fail("n_runs", "must be >= 1");
  std::optional<double> expected;
  if (rr.has("expected_slope")) expected = rr.number("expected_slope");
  const double slope_tol = rr.number("slope_tol", 0.1);
  if (!root.has("solver")) cfg.resolved["solver"] = json::object();
  if (!cfg.resolved["solver"].contains("dt"))
    cfg.resolved["solver"]["dt"] = *std::min_element(dts.begin(), dts.end());
  Problem p = build_problem(cfg, true);
  for (double dt : dts) check_contract(p.spde.drift, dt);
  const auto header = header_lines("rates", cfg);

  RateTable t;
  try {
    t = convergence_study(p.spde, p.solver, dts, n_runs);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("config section /rates: ") + e.what());
  }
  std::ostringstream csv;
  csv << csv_header(header) << "dt,error,se\n";
  for (std::size_t i = 0; i < t.dt.size(); ++i)
    csv << io::format_double(t.dt[i]) << ',' << io::format_double(t.error[i]) << ','
        << io::format_double(t.se[i]) << '\n';
  write_file(prepare_output(cfg, "rates.csv"), csv.str());
  const bool pass = !expected || std::abs(t.slope - *expected) <= slope_tol;
  write_json(cfg, "rates.json", "rates",
             {{"slope", t.slope}, {"reference_dt", t.reference_dt}, {"pass", pass}});
  log << "fitted slope " << t.slope << "\n";
  return pass ? kOk : kVerificationFailure;
}

int run(int argc, char** argv, std::ostream& log, std::ostream& err) {
  CLI::App app{"gspde: SPDEs driven by Gaussian noise with a covariance kernel"};
  app.require_subcommand(1);
  std::string config_path;
  std::uint64_t seed = 0;
  std::string out_dir;
  int jobs = 0;
  auto* config_opt = app.add_option("--config", config_path, "experiment config (JSON)");
  auto* seed_opt = app.add_option("--seed", seed, "override master_seed");
  auto* out_opt = app.add_option("--out", out_dir, "output directory");
  app.add_option("--jobs", jobs, "OpenMP threads (default: runtime choice)")->check(CLI::NonNegativeNumber);
  for (const char* name : {"sample", "verify", "solve", "rates"}) app.add_subcommand(name)->fallthrough();
  config_opt->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    log << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  }
  if (jobs > 0) omp_set_num_threads(jobs);
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    Overrides overrides;
    if (seed_opt->count() > 0) overrides.seed = seed;
    if (out_opt->count() > 0) overrides.out_dir = out_dir;
    ExperimentConfig cfg = load_config(config_path, overrides);
    if (command == "sample") return cmd_sample(cfg, log);
    if (command == "verify") return cmd_verify(cfg, log);
    if (command == "solve") return cmd_solve(cfg, log);
    return cmd_rates(cfg, log);
  } catch (const InnerSolveError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumericalFailure;
  } catch (const QuadratureError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumericalFailure;
  } catch (const FactorizationError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumericalFailure;
  } catch (const ContractError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const Error& e) {
    // ConfigError, DomainError, DimensionMismatch, RangeError
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumericalFailure;
  }
}

}  // namespace gspde::cli
