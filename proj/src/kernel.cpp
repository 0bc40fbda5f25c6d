#include "gspde/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "gspde/errors.hpp"
#include "gspde/quadrature.hpp"

namespace gspde {

namespace {

constexpr double kQuadTol = 1e-9;

double frobenius(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a.array() * b.array()).sum();
}

double fbm_R(double hurst, double t, double s) {
  const double e = 2.0 * hurst;
  return 0.5 * (std::pow(t, e) + std::pow(s, e) - std::pow(std::abs(t - s), e));
}

// \int_a^b fn(x) dx with the interval split at the given interior kinks.
double integrate_split(const std::function<double(double)>& fn, double a, double b,
                       std::initializer_list<double> kinks) {
  std::vector<double> pts{a};
  for (double k : kinks)
    if (k > a && k < b) pts.push_back(k);
  pts.push_back(b);
  std::sort(pts.begin(), pts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) total += quad::integrate(fn, pts[i], pts[i + 1], kQuadTol);
  return total;
}

void check_shapes(const CovarianceKernel& k, const PiecewiseFunction& f, const PiecewiseFunction& h) {
  if (f.rows() != h.rows() || f.cols() != h.cols()) {
    std::ostringstream os;
    os << "integrands live in different coefficient spaces: " << f.rows() << "x" << f.cols()
       << " vs " << h.rows() << "x" << h.cols();
    throw DimensionMismatch(os.str());
  }
  const double T = k.horizon();
  if (std::abs(f.horizon() - T) > 1e-12 * T || std::abs(h.horizon() - T) > 1e-12 * T)
    throw DomainError("integrand horizon differs from the kernel horizon");
}

// \int_a^b \int_c^d <F(x), H(y)> d^2R(x, y) for one pair of smooth pieces,
// integrated by parts in both variables.
double piece_pair_by_parts(double hurst, const PiecewiseFunction::Piece& pf,
                           const PiecewiseFunction::Piece& ph) {
  const double a = pf.lo, b = pf.hi, c = ph.lo, d = ph.hi;
  auto R = [hurst](double x, double y) { return fbm_R(hurst, x, y); };
  const Eigen::MatrixXd Fa = pf.value(a), Fb = pf.value(b);
  const Eigen::MatrixXd Hc = ph.value(c), Hd = ph.value(d);

  double total = frobenius(Fb, Hd) * R(b, d) - frobenius(Fb, Hc) * R(b, c) -
                 frobenius(Fa, Hd) * R(a, d) + frobenius(Fa, Hc) * R(a, c);

  if (pf.derivative) {
    auto g = [&](double x) {
      const Eigen::MatrixXd dF = pf.derivative(x);
      return frobenius(dF, Hc) * R(x, c) - frobenius(dF, Hd) * R(x, d);
    };
    total += integrate_split(g, a, b, {c, d});
  }
  if (ph.derivative) {
    auto g = [&](double y) {
      const Eigen::MatrixXd dH = ph.derivative(y);
      return frobenius(Fa, dH) * R(a, y) - frobenius(Fb, dH) * R(b, y);
    };
    total += integrate_split(g, c, d, {a, b});
  }
  if (pf.derivative && ph.derivative) {
    auto g = [&](double x, double y, double) {
      return frobenius(pf.derivative(x), ph.derivative(y)) * R(x, y);
    };
    total += quad::rectangle_with_diagonal(g, a, b, c, d, kQuadTol);
  }
  return total;
}

}  // namespace

CovarianceKernel CovarianceKernel::fbm(double hurst, double horizon, double r_override) {
  if (!(hurst > 0.5 && hurst < 1.0)) {
    std::ostringstream os;
    os << "fBm kernel needs H in (1/2, 1), got " << hurst;
    throw DomainError(os.str());
  }
  if (!(horizon > 0.0)) throw DomainError("kernel horizon T must be > 0");
  const double r_max = 1.0 / (2.0 - 2.0 * hurst);
  double r = 0.5 * (1.0 + r_max);
  if (r_override != 0.0) {
    if (!(r_override > 1.0 && r_override < r_max)) {
      std::ostringstream os;
      os << "r must lie in (1, " << r_max << ") so that Psi is in L^r";
      throw DomainError(os.str());
    }
    r = r_override;
  }
  CovarianceKernel k;
  k.kind_ = KernelKind::kStationaryFbm;
  k.hurst_ = hurst;
  k.r_ = r;
  k.p_ = 2.0 * r / (2.0 * r - 1.0);
  k.singular_ = true;
  k.horizon_ = horizon;
  std::ostringstream os;
  os << "fbm(H=" << hurst << ")";
  k.label_ = os.str();
  const double coef = hurst * (2.0 * hurst - 1.0);
  const double expo = 2.0 * hurst - 2.0;
  k.psi_ = [coef, expo](double lag) { return coef * std::pow(std::abs(lag), expo); };
  return k;
}

CovarianceKernel CovarianceKernel::stationary(StationaryFn psi, double r, bool singular,
                                              double horizon, std::string label) {
  if (!(r > 1.0)) throw DomainError("stationary kernel needs r in (1, inf)");
  if (!(horizon > 0.0)) throw DomainError("kernel horizon T must be > 0");
  if (!psi) throw DomainError("stationary kernel needs a function");
  CovarianceKernel k;
  k.kind_ = KernelKind::kStationaryGeneral;
  k.r_ = r;
  k.p_ = 2.0 * r / (2.0 * r - 1.0);
  k.singular_ = singular;
  k.horizon_ = horizon;
  k.label_ = std::move(label);
  k.psi_ = std::move(psi);
  return k;
}

CovarianceKernel CovarianceKernel::general(GeneralFn phi, double p, bool singular, double horizon,
                                           std::string label) {
  if (!(p > 1.0)) throw DomainError("general kernel needs p in (1, inf)");
  if (!(horizon > 0.0)) throw DomainError("kernel horizon T must be > 0");
  if (!phi) throw DomainError("general kernel needs a function");
  CovarianceKernel k;
  k.kind_ = KernelKind::kGeneral;
  k.p_ = p;
  k.singular_ = singular;
  k.horizon_ = horizon;
  k.label_ = std::move(label);
  k.phi_ = std::move(phi);
  return k;
}

double CovarianceKernel::operator()(double u, double v) const {
  return evaluate(u, v, std::abs(u - v));
}

double CovarianceKernel::evaluate(double u, double v, double lag) const {
  if (kind_ == KernelKind::kGeneral) return phi_(u, v, lag);
  return psi_(lag);
}

double covariance_R(const CovarianceKernel& k, double t, double s) {
  const double T = k.horizon();
  const double slack = 1e-12 * T;
  if (t < -slack || s < -slack || t > T + slack || s > T + slack) {
    std::ostringstream os;
    os << "covariance_R needs 0 <= t, s <= T = " << T << ", got (" << t << ", " << s << ")";
    throw DomainError(os.str());
  }
  t = std::clamp(t, 0.0, T);
  s = std::clamp(s, 0.0, T);
  if (t == 0.0 || s == 0.0) return 0.0;

  switch (k.kind()) {
    case KernelKind::kStationaryFbm:
      return fbm_R(k.hurst(), t, s);
    case KernelKind::kStationaryGeneral: {
      auto K = [&](double x) {
        return quad::integrate_offset([&](double d) { return (x - d) * k.evaluate(0.0, d, d); }, x,
                                      kQuadTol);
      };
      return K(t) + K(s) - K(std::abs(t - s));
    }
    case KernelKind::kGeneral:
      return quad::rectangle_with_diagonal(
          [&](double x, double y, double lag) { return k.evaluate(x, y, lag); }, 0.0, t, 0.0, s,
          kQuadTol);
  }
  return 0.0;
}

double weighted_double_integral(const CovarianceKernel& k, const PiecewiseFunction& f,
                                const PiecewiseFunction& h) {
  check_shapes(k, f, h);
  if (f.is_zero() || h.is_zero()) return 0.0;
  if (k.kind() != KernelKind::kStationaryFbm) return phi_double_integral(k, f, h);

  double total = 0.0;
  for (const auto& pf : f.pieces())
    for (const auto& ph : h.pieces()) total += piece_pair_by_parts(k.hurst(), pf, ph);
  return total;
}

double phi_double_integral(const CovarianceKernel& k, const PiecewiseFunction& f,
                           const PiecewiseFunction& h) {
  check_shapes(k, f, h);
  if (f.is_zero() || h.is_zero()) return 0.0;
  double total = 0.0;
  for (const auto& pf : f.pieces()) {
    for (const auto& ph : h.pieces()) {
      auto g = [&](double x, double y, double lag) {
        return frobenius(pf.value(x), ph.value(y)) * k.evaluate(x, y, lag);
      };
      total += quad::rectangle_with_diagonal(g, pf.lo, pf.hi, ph.lo, ph.hi, kQuadTol);
    }
  }
  return total;
}

double lp_norm(const PiecewiseFunction& f, double p) {
  if (f.rows() != 1 || f.cols() != 1) throw DimensionMismatch("lp_norm needs a scalar function");
  double acc = 0.0;
  for (const auto& piece : f.pieces()) {
    if (piece.is_constant()) {
      acc += std::pow(std::abs(piece.value(piece.lo)(0, 0)), p) * (piece.hi - piece.lo);
    } else {
      acc += quad::integrate(
          [&](double t) { return std::pow(std::abs(piece.value(t)(0, 0)), p); }, piece.lo,
          piece.hi, kQuadTol);
    }
  }
  return std::pow(acc, 1.0 / p);
}

CrCheckReport empirical_cr_check(const CovarianceKernel& k,
                                 std::span<const PiecewiseFunction> test_functions) {
  CrCheckReport report;
  report.pass = true;
  for (const auto& f : test_functions) {
    if (f.rows() != 1 || f.cols() != 1)
      throw DimensionMismatch("condition check takes scalar test functions");
    double numerator = 0.0;
    for (const auto& pu : f.pieces()) {
      for (const auto& pv : f.pieces()) {
        auto g = [&](double x, double y, double lag) {
          return std::abs(pu.value(x)(0, 0) * pv.value(y)(0, 0) * k.evaluate(x, y, lag));
        };
        numerator += quad::rectangle_with_diagonal(g, pu.lo, pu.hi, pv.lo, pv.hi, kQuadTol);
      }
    }
    const double norm = lp_norm(f, k.p());
    double ratio = 0.0;
    if (norm > 0.0)
      ratio = numerator / (norm * norm);
    else if (numerator != 0.0)
      ratio = std::numeric_limits<double>::infinity();
    if (!std::isfinite(ratio)) report.pass = false;
    report.ratios.push_back(ratio);
    report.worst_ratio = std::max(report.worst_ratio, ratio);
  }
  return report;
}

}  // namespace gspde
