#pragma once

#include <Eigen/Dense>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gspde/galerkin_space.hpp"
#include "gspde/time_grid.hpp"

namespace gspde {

// Constants of the monotonicity, coercivity and boundedness inequalities
//   2<A(u) - A(v), u - v> + ||B(u) - B(v)||^2 <= c ||u - v||_H^2
//   2<A(v), v> + ||B(v)||^2 <= c1 ||v||_H^2 - c2 ||v||_V^alpha + f(t)
//   ||A(v)||_{V*} <= g(t) + c3 ||v||_V^{alpha - 1}
// with f, g deterministic.
struct DeclaredConstants {
  double c = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
  double alpha = 2.0;
  std::function<double(double)> f = [](double) { return 0.0; };
  std::function<double(double)> g = [](double) { return 0.0; };
};

class DriftOperator {
 public:
  using Eval = std::function<Eigen::VectorXd(double t, const Eigen::VectorXd& v)>;
  using Jacobian = std::function<Eigen::MatrixXd(double t, const Eigen::VectorXd& v)>;

  DriftOperator(std::string name, GalerkinSpace space, Eval eval, Jacobian jacobian,
                DeclaredConstants constants, std::map<std::string, double> params = {});

  const std::string& name() const { return name_; }
  const GalerkinSpace& space() const { return space_; }
  const DeclaredConstants& constants() const { return constants_; }
  DeclaredConstants& constants() { return constants_; }
  const std::map<std::string, double>& params() const { return params_; }
  bool has_jacobian() const { return bool(jacobian_); }

  Eigen::VectorXd operator()(double t, const Eigen::VectorXd& v) const;
  // Analytic when available, else central differences.
  Eigen::MatrixXd jacobian(double t, const Eigen::VectorXd& v) const;

 private:
  std::string name_;
  GalerkinSpace space_;
  Eval eval_;
  Jacobian jacobian_;
  DeclaredConstants constants_;
  std::map<std::string, double> params_;
};

// Hilbert-Schmidt coefficient map B(t, v): dim H x dim U.
class DiffusionOperator {
 public:
  using Eval = std::function<Eigen::MatrixXd(double t, const Eigen::VectorXd& v)>;

  DiffusionOperator(std::string name, GalerkinSpace space, std::size_t noise_dim, Eval eval,
                    bool state_independent);

  const std::string& name() const { return name_; }
  const GalerkinSpace& space() const { return space_; }
  std::size_t noise_dim() const { return noise_dim_; }
  bool state_independent() const { return state_independent_; }
  bool is_zero() const { return zero_; }

  Eigen::MatrixXd operator()(double t, const Eigen::VectorXd& v) const;
  // sqrt(sum_j ||column_j||_H^2) with U = R^{dim U} and the standard basis.
  double hs_norm(const Eigen::MatrixXd& b) const;

 private:
  friend DiffusionOperator make_zero_diffusion(const GalerkinSpace&, std::size_t);
  std::string name_;
  GalerkinSpace space_;
  std::size_t noise_dim_;
  Eval eval_;
  bool state_independent_;
  bool zero_ = false;
};

DriftOperator make_linear_heat(const GalerkinSpace& space);
DriftOperator make_p_laplace(const GalerkinSpace& space, double p);
DriftOperator make_porous_medium(const GalerkinSpace& space, double m);
DriftOperator make_zero_drift(const GalerkinSpace& space);
// A(v) = -(projection of sign(v) on the collocation grid): discontinuous along
// lines, the planted counterexample for hemicontinuity.
DriftOperator make_sign_drift(const GalerkinSpace& space);

DiffusionOperator make_zero_diffusion(const GalerkinSpace& space, std::size_t noise_dim);
DiffusionOperator make_constant_diffusion(const GalerkinSpace& space, const Eigen::MatrixXd& b);
// B(v) = L v e_1^T, one noise coordinate; ||B(u) - B(v)||_HS = L ||u - v||_H.
DiffusionOperator make_lipschitz_multiplication(const GalerkinSpace& space, double lipschitz);

// H-valued path w on the nodes of a grid (rows = nodes, cols = coefficients).
struct NoisePath {
  TimeGrid grid;
  Eigen::MatrixXd values;
  // Coefficient indices allowed to be nonzero, when w = P w for a
  // finite-dimensional projection P.
  std::optional<std::vector<std::size_t>> range;
};

struct ShiftedOperators {
  DriftOperator drift;
  DiffusionOperator diffusion;
};

// A(t, v + w(t)) and B(t, v + w(t)). Evaluation is only defined at grid
// nodes of w; other times raise RangeError.
ShiftedOperators shift_operators(const DriftOperator& a, const DiffusionOperator& b,
                                 std::shared_ptr<const NoisePath> w);

}  // namespace gspde
