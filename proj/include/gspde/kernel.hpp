#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "gspde/piecewise_function.hpp"

namespace gspde {

enum class KernelKind { kStationaryFbm, kStationaryGeneral, kGeneral };

// Covariance density phi of a scalar Gaussian process g on [0, T]:
//   R(t, s) = \int_0^t \int_0^s phi(u, v) du dv.
// phi must be symmetric and positive definite and satisfy
//   \int\int |f(u) f(v) phi(u, v)| du dv <= C ||f||_{L^p}^2.
// For a stationary phi(u, v) = Psi(u - v) with Psi in L^r this holds with
// p = 2r / (2r - 1).
class CovarianceKernel {
 public:
  using StationaryFn = std::function<double(double lag)>;
  // phi(u, v); lag = |u - v| is passed without cancellation near the diagonal.
  using GeneralFn = std::function<double(double u, double v, double lag)>;

  // Psi(u) = H (2H - 1) |u|^{2H - 2}. Without an override r is the midpoint
  // of the admissible range (1, 1 / (2 - 2H)).
  static CovarianceKernel fbm(double hurst, double horizon = 1.0, double r_override = 0.0);
  static CovarianceKernel stationary(StationaryFn psi, double r, bool singular_on_diagonal,
                                     double horizon = 1.0, std::string label = "stationary");
  static CovarianceKernel general(GeneralFn phi, double p, bool singular_on_diagonal,
                                  double horizon = 1.0, std::string label = "general");

  KernelKind kind() const { return kind_; }
  double hurst() const { return hurst_; }  // StationaryFbm only
  double r() const { return r_; }          // 0 for General
  double p() const { return p_; }
  bool singular_on_diagonal() const { return singular_; }
  double horizon() const { return horizon_; }
  const std::string& label() const { return label_; }

  double operator()(double u, double v) const;
  double evaluate(double u, double v, double lag) const;

 private:
  CovarianceKernel() = default;

  KernelKind kind_ = KernelKind::kStationaryFbm;
  double hurst_ = 0.0;
  double r_ = 0.0;
  double p_ = 0.0;
  bool singular_ = false;
  double horizon_ = 1.0;
  std::string label_;
  StationaryFn psi_;
  GeneralFn phi_;
};

// Closed form 1/2 (t^{2H} + s^{2H} - |t - s|^{2H}) for fBm; for a stationary
// kernel R(t, s) = K(t) + K(s) - K(|t - s|) with K(x) = \int_0^x (x - d) Psi(d) dd;
// otherwise the double integral of phi with the diagonal split off.
double covariance_R(const CovarianceKernel& k, double t, double s);

// \int_0^T \int_0^T <f(s), h(s')> phi(s, s') ds ds' with the Frobenius inner
// product on matrix values.
//
// For fBm the integral is moved onto R by integrating by parts in both
// variables on every pair of pieces; on a pair of constant pieces this is
// exactly the second difference of R. Other kernels go through
// phi_double_integral.
double weighted_double_integral(const CovarianceKernel& k, const PiecewiseFunction& f,
                                const PiecewiseFunction& h);

// Same quantity by direct quadrature of phi, diagonal handled in rotated
// coordinates. Independent of covariance_R.
double phi_double_integral(const CovarianceKernel& k, const PiecewiseFunction& f,
                           const PiecewiseFunction& h);

struct CrCheckReport {
  std::vector<double> ratios;
  double worst_ratio = 0.0;
  bool pass = false;
};

// \int\int |f(u) f(v) phi(u, v)| du dv / ||f||_p^2 for each scalar test
// function. pass = every ratio finite. A falsification harness only.
CrCheckReport empirical_cr_check(const CovarianceKernel& k,
                                 std::span<const PiecewiseFunction> test_functions);

// ||f||_{L^p([0, T])} of a scalar piecewise function.
double lp_norm(const PiecewiseFunction& f, double p);

}  // namespace gspde
