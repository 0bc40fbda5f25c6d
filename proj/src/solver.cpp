#include "gspde/solver.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <sstream>

#include "gspde/errors.hpp"
#include "gspde/rng.hpp"

namespace gspde {

namespace {

std::size_t checked_ratio(double whole, double part, const char* what) {
  const double q = whole / part;
  const double r = std::round(q);
  if (!(r >= 1.0) || std::abs(q - r) > 1e-9 * r) {
    std::ostringstream os;
    os << what << ": " << part << " does not divide " << whole;
    throw DomainError(os.str());
  }
  return std::size_t(r);
}

}  // namespace

void SolverConfig::validate() const {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw DomainError("horizon must be positive");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("dt must be positive");
  if (!(inner_tol > 0.0)) throw DomainError("inner_tol must be positive");
  if (inner_max_iter < 1) throw DomainError("inner_max_iter must be >= 1");
  checked_ratio(horizon, dt, "time step");
}

std::size_t SolverConfig::steps() const { return checked_ratio(horizon, dt, "time step"); }

TimeGrid SolverConfig::grid() const { return TimeGrid::uniform(horizon, steps() + 1); }

void check_contract(const DriftOperator& a, double dt) {
  const double c = a.constants().c;
  if (dt * std::max(0.0, c) >= 1.0) {
    std::ostringstream os;
    os << "dt = " << dt << " violates dt * max(0, c) < 1 for the declared c = " << c
       << " of '" << a.name() << "'";
    throw ContractError(os.str());
  }
}

StepResult implicit_step(const DriftOperator& a, double t, double dt, const Eigen::VectorXd& rhs,
                         const Eigen::VectorXd& guess, const SolverConfig& cfg, int step_index) {
  const auto& space = a.space();
  auto residual_of = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
    return v - dt * a(t, v) - rhs;
  };
  Eigen::VectorXd v = guess;
  Eigen::VectorXd r = residual_of(v);
  double norm = space.h_norm(r);
  const Eigen::Index n = v.size();
  double tau = 1.0;  // fixed-point damping, carried across iterations

  for (int it = 0; it < cfg.inner_max_iter; ++it) {
    if (norm <= cfg.inner_tol) return {v, it, norm};
    if (!std::isfinite(norm)) break;

    bool accepted = false;
    if (cfg.inner_method == InnerMethod::kNewton) {
      const Eigen::MatrixXd J = Eigen::MatrixXd::Identity(n, n) - dt * a.jacobian(t, v);
      const Eigen::VectorXd delta = J.partialPivLu().solve(-r);
      if (delta.allFinite()) {
        double step = 1.0;
        for (int ls = 0; ls < 40; ++ls, step *= 0.5) {
          const Eigen::VectorXd trial = v + step * delta;
          const Eigen::VectorXd tr = residual_of(trial);
          const double tn = space.h_norm(tr);
          if (tn < (1.0 - 1e-4 * step) * norm || tn <= cfg.inner_tol) {
            v = trial;
            r = tr;
            norm = tn;
            accepted = true;
            break;
          }
        }
      }
    }
    if (!accepted) {
      // damped fixed point v <- v - tau r(v) with backtracking on ||r||_H
      for (int ls = 0; ls < 60; ++ls, tau *= 0.5) {
        const Eigen::VectorXd trial = v - tau * r;
        const Eigen::VectorXd tr = residual_of(trial);
        const double tn = space.h_norm(tr);
        if (tn < norm) {
          v = trial;
          r = tr;
          norm = tn;
          accepted = true;
          tau = std::min(1.0, 2.0 * tau);
          break;
        }
      }
    }
    if (!accepted) break;
  }
  if (norm <= cfg.inner_tol) return {v, cfg.inner_max_iter, norm};
  std::ostringstream os;
  os << "inner solve did not converge at step " << step_index << " (t = " << t
     << "): residual " << norm << " > " << cfg.inner_tol;
  throw InnerSolveError(os.str(), step_index, norm);
}

TransformedPath solve_transformed(const DriftOperator& a, const DiffusionOperator& b,
                                  const Eigen::VectorXd& y0, const SolverConfig& cfg,
                                  const Eigen::MatrixXd& dW) {
  cfg.validate();
  check_contract(a, cfg.dt);
  a.space().check_dim(y0, "initial condition");
  if (a.space().dim() != b.space().dim())
    throw DimensionMismatch("drift and diffusion live on different spaces");
  const TimeGrid grid = cfg.grid();
  const std::size_t K = grid.cells();
  if (std::size_t(dW.rows()) != K || std::size_t(dW.cols()) != b.noise_dim()) {
    std::ostringstream os;
    os << "expected " << K << " x " << b.noise_dim() << " Wiener increments, got " << dW.rows()
       << " x " << dW.cols();
    throw DimensionMismatch(os.str());
  }

  TransformedPath out{grid, Eigen::MatrixXd(Eigen::Index(K + 1), y0.size()), {}, {}};
  out.iterations.reserve(K);
  out.residuals.reserve(K);
  out.Y.row(0) = y0.transpose();
  Eigen::VectorXd y = y0;
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(y0.size());
  for (std::size_t k = 0; k < K; ++k) {
    Eigen::VectorXd rhs = y;
    if (!b.is_zero()) rhs += b(grid.node(k), y) * dW.row(Eigen::Index(k)).transpose();
    const Eigen::VectorXd& guess = cfg.inner_init == InnerInit::kZero ? zero : y;
    StepResult s = implicit_step(a, grid.node(k + 1), cfg.dt, rhs, guess, cfg, int(k + 1));
    y = std::move(s.value);
    out.Y.row(Eigen::Index(k + 1)) = y.transpose();
    out.iterations.push_back(s.iterations);
    out.residuals.push_back(s.residual);
  }
  return out;
}

Eigen::MatrixXd brownian_increments(std::uint64_t seed, std::size_t run, std::size_t steps,
                                    std::size_t dim, double dt) {
  Eigen::MatrixXd dW{Eigen::Index(steps), Eigen::Index(dim)};
  const double s = std::sqrt(dt);
  for (std::size_t c = 0; c < dim; ++c) {
    NormalStream z(seed, Stream::kWiener, run, c);
    for (std::size_t k = 0; k < steps; ++k) dW(Eigen::Index(k), Eigen::Index(c)) = s * z();
  }
  return dW;
}

Eigen::MatrixXd aggregate_increments(const Eigen::MatrixXd& dW, std::size_t stride) {
  if (stride < 1 || dW.rows() % Eigen::Index(stride) != 0)
    throw DomainError("increments cannot be aggregated with this stride");
  const Eigen::Index rows = dW.rows() / Eigen::Index(stride);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(rows, dW.cols());
  for (Eigen::Index k = 0; k < rows; ++k)
    for (Eigen::Index j = 0; j < Eigen::Index(stride); ++j)
      out.row(k) += dW.row(k * Eigen::Index(stride) + j);
  return out;
}

Eigen::VectorXd initial_condition(const SpdeProblem& problem, std::uint64_t seed, std::size_t run) {
  Eigen::VectorXd x0 = problem.x0;
  if (problem.x0_std != 0.0) {
    NormalStream z(seed, Stream::kInitial, run);
    for (Eigen::Index i = 0; i < x0.size(); ++i) x0[i] += problem.x0_std * z();
  }
  return x0;
}

SolutionPath solve_with_noise_path(const SpdeProblem& problem, const SolverConfig& cfg,
                                   const Eigen::MatrixXd& w, const Eigen::MatrixXd& dW,
                                   const Eigen::VectorXd& x0) {
  const TimeGrid grid = cfg.grid();
  auto path = std::make_shared<NoisePath>(NoisePath{grid, w, problem.h.range_projection});
  ShiftedOperators shifted = shift_operators(problem.drift, problem.diffusion, path);
  TransformedPath y = solve_transformed(shifted.drift, shifted.diffusion, x0, cfg, dW);
  SolutionPath out{grid, y.Y + w, std::move(y.Y), w, std::move(y.iterations),
                   std::move(y.residuals)};
  return out;
}

namespace {

bool has_noise_integral(const SpdeProblem& p) { return !p.h.h.is_zero(); }

void check_problem(const SpdeProblem& p, const SolverConfig& cfg) {
  const std::size_t n = p.drift.space().dim();
  if (p.diffusion.space().dim() != n) throw DimensionMismatch("diffusion dimension differs from drift");
  if (std::size_t(p.x0.size()) != n) throw DimensionMismatch("X0 dimension differs from the space");
  if (p.h.dim_h() != n) throw DimensionMismatch("h has a different number of rows than dim H");
  if (p.h.dim_u() != p.spec.size())
    throw DimensionMismatch("h has a different number of columns than the noise spec");
  if (std::abs(p.h.h.horizon() - cfg.horizon) > 1e-12 * cfg.horizon)
    throw DomainError("h and the solver use different horizons");
  if (has_noise_integral(p) && std::abs(p.kernel.horizon() - cfg.horizon) > 1e-12 * cfg.horizon)
    throw DomainError("kernel and the solver use different horizons");
  p.h.validate(p.kernel.p());
}

// w for all runs on the given grid, or zeros when h vanishes.
std::vector<Eigen::MatrixXd> noise_integrals(const SpdeProblem& p, const GaussianEnsemble* G,
                                             const TimeGrid& grid, const SolverConfig& cfg,
                                             std::size_t n_runs) {
  const Eigen::Index n = Eigen::Index(p.drift.space().dim());
  std::vector<Eigen::MatrixXd> w(n_runs);
  if (!G) {
    for (auto& x : w) x = Eigen::MatrixXd::Zero(Eigen::Index(grid.size()), n);
    return w;
  }
  NoisePaths paths = integrate_operator(p.h, *G, cfg.rule, cfg.backend);
  for (std::size_t r = 0; r < n_runs; ++r) w[r] = paths.path_matrix(r);
  return w;
}

template <class Body>
void for_each_run(std::size_t n_runs, Backend backend, Body body) {
  std::exception_ptr failure;
  if (backend == Backend::kSerial) {
    for (std::size_t r = 0; r < n_runs; ++r) body(r);
    return;
  }
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t r = 0; r < std::ptrdiff_t(n_runs); ++r) {
    try {
      body(std::size_t(r));
    } catch (...) {
#pragma omp critical(gspde_run_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

std::vector<SolutionPath> solve_ensemble(const SpdeProblem& problem, const SolverConfig& cfg,
                                         std::size_t n_runs) {
  cfg.validate();
  check_contract(problem.drift, cfg.dt);
  check_problem(problem, cfg);
  if (n_runs < 1) throw DomainError("n_runs must be >= 1");
  const TimeGrid grid = cfg.grid();
  std::optional<GaussianEnsemble> G;
  if (has_noise_integral(problem))
    G = sample_G(problem.kernel, problem.spec, grid, n_runs, cfg.seed_G, cfg.backend);
  const auto w = noise_integrals(problem, G ? &*G : nullptr, grid, cfg, n_runs);

  std::vector<std::optional<SolutionPath>> slots(n_runs);
  for_each_run(n_runs, cfg.backend, [&](std::size_t r) {
    const Eigen::MatrixXd dW = brownian_increments(cfg.seed_W, r, grid.cells(),
                                                   problem.diffusion.noise_dim(), cfg.dt);
    slots[r] = solve_with_noise_path(problem, cfg, w[r], dW, initial_condition(problem, cfg.seed_W, r));
  });
  std::vector<SolutionPath> runs;
  runs.reserve(n_runs);
  for (auto& s : slots) runs.push_back(std::move(*s));
  return runs;
}

SolutionPath solve_spde(const SpdeProblem& problem, const SolverConfig& cfg) {
  return std::move(solve_ensemble(problem, cfg, 1).front());
}

MomentEstimates estimate_moments(const std::vector<SolutionPath>& runs, const GalerkinSpace& space,
                                 double alpha) {
  MomentEstimates m;
  if (runs.empty()) return m;
  const TimeGrid& grid = runs.front().grid;
  for (const auto& r : runs)
    if (!(r.grid == grid)) throw DimensionMismatch("runs do not share a grid");
  const double n_runs = double(runs.size());
  m.sup_t_mean_H2 = -1.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    double acc = 0.0;
    for (const auto& r : runs) acc += std::pow(space.h_norm(r.X.row(Eigen::Index(k)).transpose()), 2);
    acc /= n_runs;
    if (acc > m.sup_t_mean_H2) {
      m.sup_t_mean_H2 = acc;
      m.sup_node = k;
    }
  }
  double v = 0.0;
  for (const auto& r : runs)
    for (std::size_t k = 1; k < grid.size(); ++k)
      v += grid.step(k - 1) * std::pow(space.v_norm(r.X.row(Eigen::Index(k)).transpose()), alpha);
  m.mean_V_alpha = v / n_runs;
  return m;
}

RateTable convergence_study(const SpdeProblem& problem, const SolverConfig& cfg,
                            const std::vector<double>& dt_list, std::size_t n_runs) {
  if (dt_list.size() < 2) throw DomainError("a rate study needs at least two step sizes");
  if (n_runs < 1) throw DomainError("n_runs must be >= 1");
  std::vector<double> dts = dt_list;
  std::sort(dts.begin(), dts.end());
  const double ratio = dts[1] / dts[0];
  for (std::size_t i = 1; i < dts.size(); ++i)
    if (std::abs(dts[i] / dts[i - 1] - ratio) > 1e-9 * ratio)
      throw DomainError("dt_list must be geometric");

  SolverConfig ref_cfg = cfg;
  ref_cfg.dt = dts.front() / 4.0;
  ref_cfg.validate();
  check_problem(problem, ref_cfg);
  const TimeGrid fine = ref_cfg.grid();
  std::optional<GaussianEnsemble> G;
  if (has_noise_integral(problem))
    G = sample_G(problem.kernel, problem.spec, fine, n_runs, cfg.seed_G, cfg.backend);

  struct Level {
    SolverConfig cfg;
    std::size_t stride;
    std::vector<Eigen::MatrixXd> w;
  };
  std::vector<Level> levels;
  levels.push_back({ref_cfg, 1, {}});
  for (double dt : dts) {
    SolverConfig c = cfg;
    c.dt = dt;
    c.validate();
    check_contract(problem.drift, dt);
    levels.push_back({c, checked_ratio(dt, ref_cfg.dt, "rate study"), {}});
  }
  check_contract(problem.drift, ref_cfg.dt);
  for (auto& level : levels) {
    if (G) {
      const GaussianEnsemble coarse = G->restrict_to(level.stride);
      level.w = noise_integrals(problem, &coarse, coarse.grid(), level.cfg, n_runs);
    } else {
      level.w = noise_integrals(problem, nullptr, level.cfg.grid(), level.cfg, n_runs);
    }
  }

  const std::size_t n_dt = dts.size();
  Eigen::MatrixXd errors{Eigen::Index(n_runs), Eigen::Index(n_dt)};
  const auto& space = problem.drift.space();
  for_each_run(n_runs, cfg.backend, [&](std::size_t r) {
    const Eigen::MatrixXd dW_fine = brownian_increments(
        cfg.seed_W, r, fine.cells(), problem.diffusion.noise_dim(), ref_cfg.dt);
    const Eigen::VectorXd x0 = initial_condition(problem, cfg.seed_W, r);
    const SolutionPath ref = solve_with_noise_path(problem, ref_cfg, levels[0].w[r], dW_fine, x0);
    const Eigen::VectorXd x_ref = ref.X.row(ref.X.rows() - 1).transpose();
    for (std::size_t i = 0; i < n_dt; ++i) {
      const Level& level = levels[i + 1];
      const SolutionPath s = solve_with_noise_path(
          problem, level.cfg, level.w[r], aggregate_increments(dW_fine, level.stride), x0);
      errors(Eigen::Index(r), Eigen::Index(i)) =
          space.h_norm(s.X.row(s.X.rows() - 1).transpose() - x_ref);
    }
  });

  RateTable table;
  table.reference_dt = ref_cfg.dt;
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < n_dt; ++i) {
    const Eigen::VectorXd col = errors.col(Eigen::Index(i));
    const double mean = col.mean();
    const double var = n_runs > 1 ? (col.array() - mean).square().sum() / double(n_runs - 1) : 0.0;
    table.dt.push_back(dts[i]);
    table.error.push_back(mean);
    table.se.push_back(std::sqrt(var / double(n_runs)));
    if (mean > 0.0) {
      lx.push_back(std::log(dts[i]));
      ly.push_back(std::log(mean));
    }
  }
  if (lx.size() >= 2) {
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) mx += lx[i], my += ly[i];
    mx /= double(lx.size());
    my /= double(lx.size());
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < lx.size(); ++i)
      sxy += (lx[i] - mx) * (ly[i] - my), sxx += (lx[i] - mx) * (lx[i] - mx);
    table.slope = sxy / sxx;
  }
  return table;
}

}  // namespace gspde
