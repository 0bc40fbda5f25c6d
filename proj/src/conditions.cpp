#include "gspde/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gspde/errors.hpp"
#include "gspde/rng.hpp"

namespace gspde {

namespace {

constexpr double kTiny = 1e-300;

Eigen::VectorXd gaussian_vector(std::uint64_t seed, std::uint64_t index, std::uint64_t which,
                                std::size_t n, double amplitude) {
  NormalStream z(seed, Stream::kConditions, index, which);
  Eigen::VectorXd v{Eigen::Index(n)};
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = amplitude * z();
  return v;
}

double amplitude_of(const ConditionOptions& o, std::size_t i) {
  return o.amplitudes.empty() ? 1.0 : o.amplitudes[i % o.amplitudes.size()];
}

double time_of(const ConditionOptions& o, std::size_t i) {
  return o.times.empty() ? 0.0 : o.times[i % o.times.size()];
}

void check_spaces(const DriftOperator& a, const DiffusionOperator& b) {
  if (a.space().dim() != b.space().dim())
    throw DimensionMismatch("drift and diffusion live on different spaces");
}

void record(ConditionReport& r, double lhs, double rhs, double scale) {
  const double margin = lhs - rhs;
  r.worst_abs_margin = std::max(r.worst_abs_margin, margin);
  r.worst_margin = std::max(r.worst_margin, margin / std::max(scale, kTiny));
}

ConditionReport start(const char* name) {
  ConditionReport r;
  r.condition = name;
  r.worst_margin = -std::numeric_limits<double>::infinity();
  r.worst_abs_margin = -std::numeric_limits<double>::infinity();
  return r;
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2) return std::numeric_limits<double>::quiet_NaN();
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) mx += x[i], my += y[i];
  mx /= double(n);
  my /= double(n);
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < n; ++i) sxy += (x[i] - mx) * (y[i] - my), sxx += (x[i] - mx) * (x[i] - mx);
  return sxy / sxx;
}

}  // namespace

ConditionReport check_h1(const DriftOperator& a, const ConditionOptions& opts) {
  ConditionReport r = start("H1");
  const auto& space = a.space();
  const std::size_t n = space.dim();
  // lambda grids on [-1, 1] with 33, 65, 129, 257 points
  const std::vector<std::size_t> levels = {32, 64, 128, 256};
  std::vector<double> jumps(levels.size(), 0.0);
  for (std::size_t s = 0; s < opts.n_samples; ++s) {
    const double amp = amplitude_of(opts, s);
    const double t = time_of(opts, s);
    const Eigen::VectorXd u = gaussian_vector(opts.seed, s, 0, n, amp);
    const Eigen::VectorXd v = gaussian_vector(opts.seed, s, 1, n, amp);
    const Eigen::VectorXd x = gaussian_vector(opts.seed, s, 2, n, 1.0);
    // jumps are taken relative to the size of the map on the coarsest grid so
    // that samples of different amplitude mix fairly
    double scale = 0.0;
    for (std::size_t l = 0; l < levels.size(); ++l) {
      const std::size_t cells = levels[l];
      double prev = space.pairing(a(t, u - v), x);
      double jump = 0.0;
      if (l == 0) scale = std::abs(prev);
      for (std::size_t i = 1; i <= cells; ++i) {
        const double lam = -1.0 + 2.0 * double(i) / double(cells);
        const double cur = space.pairing(a(t, u + lam * v), x);
        jump = std::max(jump, std::abs(cur - prev));
        if (l == 0) scale = std::max(scale, std::abs(cur));
        prev = cur;
      }
      jumps[l] = std::max(jumps[l], jump / std::max(scale, kTiny));
    }
  }
  r.samples = opts.n_samples;
  r.jumps = jumps;
  r.pass = true;
  for (std::size_t l = 1; l < levels.size(); ++l) {
    const double ratio = jumps[l - 1] > 0.0 ? jumps[l] / jumps[l - 1] : 0.0;
    r.ratios.push_back(ratio);
    if (!(ratio < 0.6)) r.pass = false;
  }
  r.worst_margin = r.ratios.empty() ? 0.0 : *std::max_element(r.ratios.begin(), r.ratios.end());
  r.worst_abs_margin = jumps.back();
  return r;
}

ConditionReport check_h2(const DriftOperator& a, const DiffusionOperator& b,
                         const ConditionOptions& opts) {
  check_spaces(a, b);
  ConditionReport r = start("H2");
  const auto& space = a.space();
  const double c = a.constants().c;
  for (std::size_t s = 0; s < opts.n_samples; ++s) {
    const double amp = amplitude_of(opts, s);
    const double t = time_of(opts, s);
    const Eigen::VectorXd u = gaussian_vector(opts.seed, s, 0, space.dim(), amp);
    const Eigen::VectorXd v = gaussian_vector(opts.seed, s, 1, space.dim(), amp);
    const Eigen::VectorXd d = u - v;
    const double drift = 2.0 * space.pairing(a(t, u) - a(t, v), d);
    const double noise = std::pow(b.hs_norm(b(t, u) - b(t, v)), 2);
    const double dist = std::pow(space.h_norm(d), 2);
    const double rhs = c * dist;
    record(r, drift + noise, rhs, std::abs(drift) + noise + std::abs(rhs));
    if (dist > 0.0) r.empirical_constant = std::max(r.empirical_constant, (drift + noise) / dist);
  }
  if (opts.n_samples == 0) r.worst_margin = r.worst_abs_margin = 0.0;
  r.samples = opts.n_samples;
  r.pass = r.worst_margin <= opts.rel_tol;
  return r;
}

ConditionReport check_h3(const DriftOperator& a, const DiffusionOperator& b,
                         const ConditionOptions& opts) {
  check_spaces(a, b);
  ConditionReport r = start("H3");
  const auto& space = a.space();
  const auto& k = a.constants();
  for (std::size_t s = 0; s < opts.n_samples; ++s) {
    const double amp = amplitude_of(opts, s);
    const double t = time_of(opts, s);
    const Eigen::VectorXd v = gaussian_vector(opts.seed, s, 0, space.dim(), amp);
    const double drift = 2.0 * space.pairing(a(t, v), v);
    const double noise = std::pow(b.hs_norm(b(t, v)), 2);
    const double hterm = k.c1 * std::pow(space.h_norm(v), 2);
    const double vterm = k.c2 * std::pow(space.v_norm(v), k.alpha);
    const double f = k.f(t);
    record(r, drift + noise, hterm - vterm + f,
           std::abs(drift) + noise + std::abs(hterm) + std::abs(vterm) + std::abs(f));
  }
  if (opts.n_samples == 0) r.worst_margin = r.worst_abs_margin = 0.0;
  r.samples = opts.n_samples;
  r.pass = r.worst_margin <= opts.rel_tol;
  return r;
}

ConditionReport check_h4(const DriftOperator& a, const ConditionOptions& opts) {
  ConditionReport r = start("H4");
  const auto& space = a.space();
  const auto& k = a.constants();
  for (std::size_t s = 0; s < opts.n_samples; ++s) {
    const double amp = amplitude_of(opts, s);
    const double t = time_of(opts, s);
    const Eigen::VectorXd v = gaussian_vector(opts.seed, s, 0, space.dim(), amp);
    const double lhs = space.dual_norm(a(t, v));
    const double vpow = std::pow(space.v_norm(v), k.alpha - 1.0);
    const double g = k.g(t);
    record(r, lhs, g + k.c3 * vpow, lhs + std::abs(g) + std::abs(k.c3 * vpow));
    if (vpow > 0.0) r.empirical_constant = std::max(r.empirical_constant, lhs / vpow);
  }
  if (opts.n_samples == 0) r.worst_margin = r.worst_abs_margin = 0.0;

  // growth exponent along one random direction over 1e-2 .. 1e2
  const Eigen::VectorXd dir = gaussian_vector(opts.seed, opts.n_samples, 0, space.dim(), 1.0);
  const double t0 = time_of(opts, 0);
  std::vector<double> lx, ly;
  for (int e = -4; e <= 4; ++e) {
    const double s = std::pow(10.0, 0.5 * e);
    const Eigen::VectorXd v = s * dir;
    const double dn = space.dual_norm(a(t0, v));
    const double vn = space.v_norm(v);
    if (dn > 0.0 && vn > 0.0) {
      lx.push_back(std::log(vn));
      ly.push_back(std::log(dn));
    }
  }
  r.slope = lx.size() >= 2 ? fit_slope(lx, ly) : 0.0;
  r.samples = opts.n_samples;
  r.pass = r.worst_margin <= opts.rel_tol;
  return r;
}

double duality_worst_ratio(const GalerkinSpace& space, std::size_t n_samples, std::uint64_t seed) {
  double worst = 0.0;
  for (std::size_t s = 0; s < n_samples; ++s) {
    const Eigen::VectorXd F = gaussian_vector(seed, s, 0, space.dim(), 1.0);
    const Eigen::VectorXd v = gaussian_vector(seed, s, 1, space.dim(), 1.0);
    const double bound = space.dual_norm(F) * space.v_norm(v);
    worst = std::max(worst, std::abs(space.pairing(F, v)) / bound);
  }
  return worst;
}

}  // namespace gspde
