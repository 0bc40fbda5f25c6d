// Acceptance suite: one PASS/FAIL line per criterion, tolerances fixed here.
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "gspde/conditions.hpp"
#include "gspde/gaussian.hpp"
#include "gspde/rng.hpp"
#include "gspde/solver.hpp"

using namespace gspde;
namespace fs = std::filesystem;

namespace {

// Seeds are fixed once; results are reported for these values only.
constexpr std::uint64_t kMaster = 2024;

std::uint64_t seed_for(std::uint64_t index) {
  return substream_seed(kMaster, Stream::kGaussianPaths, index);
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Eigen::VectorXd unit(std::size_t n, std::size_t k) {
  Eigen::VectorXd e = Eigen::VectorXd::Zero(Eigen::Index(n));
  e(Eigen::Index(k)) = 1.0;
  return e;
}

OperatorValuedIntegrand rank1(std::size_t n, std::size_t u, double T) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(Eigen::Index(n), Eigen::Index(u));
  m(0, 0) = 1.0;
  return {PiecewiseFunction::constant(m, T), std::nullopt, std::vector<std::size_t>{0}};
}

Outcome sampler_fidelity() {
  std::ostringstream os;
  bool pass = true;
  std::uint64_t i = 0;
  for (double H : {0.6, 0.75, 0.9}) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto k = CovarianceKernel::fbm(H);
    const auto e = sample_scalar(k, TimeGrid::uniform(1.0, 65), 10000, seed_for(++i));
    const auto f = covariance_fidelity(e, k, 8, 3.0);
    const double secs = seconds_since(t0);
    pass = pass && f.pass && secs <= 60.0;
    os << "H=" << H << ": max " << f.max_deviation_in_se << " SE, " << secs << " s; ";
  }
  return {pass, os.str()};
}

Outcome isometry() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto k = CovarianceKernel::fbm(0.75);
  const auto e = sample_scalar(k, TimeGrid::uniform(1.0, 129), 100000, seed_for(10));
  const std::vector<std::pair<std::string, PiecewiseFunction>> fs{
      {"1", PiecewiseFunction::scalar_constant(1.0, 1.0)},
      {"s", PiecewiseFunction::polynomial({0.0, 1.0}, 1.0)},
      {"s2", PiecewiseFunction::polynomial({0.0, 0.0, 1.0}, 1.0)}};
  std::ostringstream os;
  bool pass = true;
  double worst_se = 0.0, worst_rel = 0.0;
  for (std::size_t i = 0; i < fs.size(); ++i)
    for (std::size_t j = i; j < fs.size(); ++j) {
      const auto c = verify_isometry(fs[i].second, fs[j].second, k, e);
      const double rel = std::abs(c.mc_estimate - c.quadrature_value) / std::abs(c.quadrature_value);
      worst_se = std::max(worst_se, c.deviation_in_se());
      worst_rel = std::max(worst_rel, rel);
      pass = pass && c.deviation_in_se() <= 3.0 && rel <= 0.05;
    }
  const double secs = seconds_since(t0);
  pass = pass && secs <= 120.0;
  os << "worst " << worst_se << " SE, worst relative error " << worst_rel << ", " << secs << " s";
  return {pass, os.str()};
}

Outcome covariance_identities() {
  const auto k = CovarianceKernel::fbm(0.75);
  const auto spec = NoiseSpec::power_law(1.0, 3.0, 8);
  const auto G = sample_G(k, spec, TimeGrid::uniform(1.0, 65), 20000, seed_for(20));
  Eigen::VectorXd x{8}, y{8};
  for (Eigen::Index i = 0; i < 8; ++i) {
    x[i] = 1.0 / double(i + 1);
    y[i] = 1.0;
  }
  // independent trace oracle: Tr(Q) restricted to the range of h times the
  // direct quadrature of phi over [0, 1]^2
  const auto one = PiecewiseFunction::scalar_constant(1.0, 1.0);
  const double phi11 = phi_double_integral(k, one, one);
  std::ostringstream os;
  bool pass = true;
  for (const std::string type : {"rank1", "identity"}) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(8, 8);
    if (type == "rank1")
      m(0, 0) = 1.0;
    else
      m.setIdentity();
    const OperatorValuedIntegrand h{PiecewiseFunction::constant(m, 1.0), std::nullopt, std::nullopt};
    const auto r = verify_integral_covariance(h, h, x, y, spec, k, G);
    const double independent = (type == "rank1" ? 1.0 : spec.trace()) * phi11;
    const double oracle_gap = std::abs(r.trace.quadrature_value - independent) / independent;
    pass = pass && r.pairing.deviation_in_se() <= 3.0 && r.trace.deviation_in_se() <= 3.0 &&
           oracle_gap <= 1e-8;
    os << type << ": pairing " << r.pairing.deviation_in_se() << " SE, trace "
       << r.trace.deviation_in_se() << " SE, oracle gap " << oracle_gap << "; ";
  }
  const double sum_n3 = spec.trace();
  pass = pass && std::abs(sum_n3 - 1.1951602435617104) <= 1e-14;
  return {pass, os.str()};
}

Outcome condition_checkers() {
  ConditionOptions o;
  o.n_samples = 1000;
  o.seed = substream_seed(kMaster, Stream::kConditions, 0);
  ConditionOptions o1 = o;
  o1.n_samples = 50;
  std::ostringstream os;
  bool pass = true;
  auto suite = [&](const DriftOperator& a) {
    const auto b = make_zero_diffusion(a.space(), 1);
    const auto h1 = check_h1(a, o1), h2 = check_h2(a, b, o), h3 = check_h3(a, b, o), h4 = check_h4(a, o);
    const bool ok = h1.pass && h2.pass && h3.pass && h4.pass;
    pass = pass && ok;
    os << a.name() << (ok ? " ok" : " FAILED") << " (H4 constant " << h4.empirical_constant
       << ", slope " << h4.slope << "); ";
  };
  suite(make_linear_heat(GalerkinSpace::energy(16)));
  suite(make_p_laplace(GalerkinSpace::sobolev(16, 4.0), 4.0));
  suite(make_porous_medium(GalerkinSpace::lebesgue_hminus1(16, 4.0), 3.0));
  const auto sign = check_h1(make_sign_drift(GalerkinSpace::energy(16)), o1);
  pass = pass && !sign.pass;
  os << "sign drift H1 " << (sign.pass ? "passed (unexpected)" : "fails as designed");
  return {pass, os.str()};
}

Outcome deterministic_oracle() {
  const auto s = GalerkinSpace::energy(8);
  auto problem = [&](double T) {
    return SpdeProblem{make_linear_heat(s), make_zero_diffusion(s, 1),
                       {PiecewiseFunction::zero(8, 1, T), std::nullopt, std::nullopt},
                       CovarianceKernel::fbm(0.75, T), NoiseSpec::explicit_values({1.0}), unit(8, 0)};
  };
  SolverConfig cfg;
  cfg.horizon = 1.0;
  cfg.dt = std::ldexp(1.0, -9);
  const auto sol = solve_spde(problem(1.0), cfg);
  const double lambda = s.eigenvalue(0);
  double worst = 0.0;
  for (Eigen::Index k = 0; k < sol.X.rows(); ++k) {
    const double oracle = std::pow(1.0 + cfg.dt * lambda, -double(k));
    worst = std::max(worst, std::abs(sol.X(k, 0) - oracle) / oracle);
    worst = std::max(worst, sol.X.row(k).tail(7).cwiseAbs().maxCoeff() / oracle);
  }
  SolverConfig rc;
  rc.horizon = 0.25;
  rc.dt = std::ldexp(1.0, -4);
  std::vector<double> dts;
  for (int j = 4; j <= 9; ++j) dts.push_back(std::ldexp(1.0, -j));
  const auto table = convergence_study(problem(0.25), rc, dts, 1);
  const bool pass = worst <= 1e-12 && std::abs(table.slope - 1.0) <= 0.1;
  std::ostringstream os;
  os << "max relative error " << worst << ", slope " << table.slope;
  return {pass, os.str()};
}

Outcome linear_spde() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto s = GalerkinSpace::energy(4);
  const auto k = CovarianceKernel::fbm(0.75);
  const SpdeProblem p{make_linear_heat(s), make_zero_diffusion(s, 1), rank1(4, 1, 1.0), k,
                      NoiseSpec::explicit_values({1.0}), Eigen::VectorXd::Zero(4)};
  SolverConfig cfg;
  cfg.dt = std::ldexp(1.0, -9);
  cfg.seed_G = seed_for(60);
  cfg.seed_W = substream_seed(kMaster, Stream::kWiener, 60);
  const std::size_t n = 1000;
  const auto runs = solve_ensemble(p, cfg, n);
  double mean = 0.0;
  for (const auto& r : runs) mean += r.X(r.X.rows() - 1, 0);
  mean /= double(n);
  double m2 = 0.0, m4 = 0.0;
  for (const auto& r : runs) {
    const double d = r.X(r.X.rows() - 1, 0) - mean;
    m2 += d * d;
    m4 += d * d * d * d;
  }
  const double var = m2 / double(n - 1);
  const double se = std::sqrt((m4 / double(n) - (m2 / double(n)) * (m2 / double(n))) / double(n));
  const auto weight = PiecewiseFunction::exponential_decay(s.eigenvalue(0), 1.0, 1.0);
  const double oracle = weighted_double_integral(k, weight, weight);
  const double secs = seconds_since(t0);
  std::ostringstream os;
  os << "variance " << var << " vs oracle " << oracle << " (" << std::abs(var - oracle) / se
     << " SE), " << secs << " s";
  return {std::abs(var - oracle) <= 3.0 * se && secs <= 300.0, os.str()};
}

Outcome stability_proxies() {
  const auto s = GalerkinSpace::sobolev(16, 4.0);
  const auto k = CovarianceKernel::fbm(0.75);
  SpdeProblem p{make_p_laplace(s, 4.0), make_zero_diffusion(s, 1), rank1(16, 1, 1.0), k,
                NoiseSpec::explicit_values({1.0}), unit(16, 0) + 0.5 * unit(16, 2)};
  SolverConfig cfg;
  cfg.dt = 1.0 / 64.0;
  cfg.seed_G = seed_for(70);
  cfg.seed_W = substream_seed(kMaster, Stream::kWiener, 70);

  const auto a = solve_spde(p, cfg);
  SolverConfig cz = cfg;
  cz.inner_init = InnerInit::kZero;
  const auto b = solve_spde(p, cz);
  double sup = 0.0;
  for (Eigen::Index r = 0; r < a.X.rows(); ++r)
    sup = std::max(sup, s.h_norm((a.X.row(r) - b.X.row(r)).transpose()));

  SpdeProblem q = p;
  q.x0 = -0.3 * unit(16, 0) + 0.8 * unit(16, 1);
  const auto c = solve_spde(q, cfg);
  bool monotone = true;
  double prev = s.h_norm((a.X.row(0) - c.X.row(0)).transpose());
  for (Eigen::Index r = 1; r < a.X.rows(); ++r) {
    const double d = s.h_norm((a.X.row(r) - c.X.row(r)).transpose());
    if (d > prev * (1.0 + 1e-8)) monotone = false;
    prev = d;
  }
  std::ostringstream os;
  os << "(a) sup difference " << sup << " (limit " << 10.0 * cfg.inner_tol << "); (b) "
     << (monotone ? "non-increasing" : "increased") << ", final " << prev;
  return {sup <= 10.0 * cfg.inner_tol && monotone, os.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

Outcome decomposition_reproducibility() {
  const auto s = GalerkinSpace::sobolev(8, 4.0);
  SpdeProblem p{make_p_laplace(s, 4.0), make_lipschitz_multiplication(s, 0.5), rank1(8, 1, 1.0),
                CovarianceKernel::fbm(0.75), NoiseSpec::explicit_values({1.0}), unit(8, 0)};
  p.drift.constants().c = 0.25;
  p.drift.constants().c1 = 0.25;
  SolverConfig cfg;
  cfg.dt = 1.0 / 64.0;
  cfg.seed_G = seed_for(80);
  cfg.seed_W = substream_seed(kMaster, Stream::kWiener, 80);
  double worst = 0.0;
  for (const auto& r : solve_ensemble(p, cfg, 50))
    worst = std::max(worst, (r.X - (r.Y + r.w)).cwiseAbs().maxCoeff());

  const fs::path root = fs::temp_directory_path() / "gspde_acceptance";
  fs::remove_all(root);
  bool identical = true;
  int failures = 0;
  for (const char* config : {"solve_porous.json", "sample_fbm.json"}) {
    const std::string cfg_path = std::string(GSPDE_CONFIG_DIR) + "/" + config;
    for (const char* run : {"a", "b"}) {
      const std::string cmd = std::string(GSPDE_CLI_PATH) + " " +
                              (std::string(config).rfind("solve", 0) == 0 ? "solve" : "sample") +
                              " --config " + cfg_path + " --out " + (root / config / run).string() +
                              " > /dev/null";
      if (std::system(cmd.c_str()) != 0) ++failures;
    }
    for (const auto& entry : fs::directory_iterator(root / config / "a")) {
      const fs::path other = root / config / "b" / entry.path().filename();
      if (!fs::exists(other) || slurp(entry.path()) != slurp(other)) identical = false;
    }
  }
  std::ostringstream os;
  os << "max |X - (Y + w)| " << worst << ", CLI reruns " << (identical ? "byte-identical" : "differ")
     << ", failed invocations " << failures;
  return {worst == 0.0 && identical && failures == 0, os.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"C1 sampler fidelity", sampler_fidelity},
      {"C2 isometry", isometry},
      {"C3 covariance identities of the H-valued integral", covariance_identities},
      {"C4 condition checkers", condition_checkers},
      {"C5 deterministic solver oracle", deterministic_oracle},
      {"C6 linear SPDE with fBm forcing", linear_spde},
      {"C7 uniqueness and stability proxies", stability_proxies},
      {"C8 decomposition and reproducibility", decomposition_reproducibility},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
