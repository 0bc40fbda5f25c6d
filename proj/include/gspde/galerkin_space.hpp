#pragma once

#include <Eigen/Dense>
#include <memory>
#include <string>

namespace gspde {

enum class VNormKind { kGradientLp, kSpectralH1, kLebesgue };
enum class HNormKind { kL2, kHminus1 };

// n-dimensional sine Galerkin space on (0, 1) with homogeneous Dirichlet
// conditions, e_k(x) = sqrt(2) sin(k pi x), together with a discrete Gelfand
// triple V in H in V*. Nonlinear maps are evaluated nodally on the M = 4n
// interior collocation points x_j = j / (M + 1); the discrete sine transform
// between coefficients and nodal values is exact for the first n modes.
//
// The V*-V pairing is the H inner product: Euclidean on coefficients for
// H = L^2, weighted by 1 / (pi k)^2 for H = H^{-1}.
class GalerkinSpace {
 public:
  // V = W^{1,p}_0 with the finite-difference gradient norm, H = L^2, alpha = p.
  static GalerkinSpace sobolev(std::size_t n, double p);
  // V = H^1_0 with the spectral energy norm, H = L^2, alpha = 2.
  static GalerkinSpace energy(std::size_t n);
  // V = L^q (nodal), H = H^{-1} spectral, alpha = q. The porous medium triple.
  static GalerkinSpace lebesgue_hminus1(std::size_t n, double q);

  std::size_t dim() const { return n_; }
  std::size_t collocation_size() const { return m_; }
  double mesh_width() const { return h_; }
  double alpha() const { return alpha_; }
  double v_exponent() const { return v_exponent_; }
  VNormKind v_kind() const { return v_kind_; }
  HNormKind h_kind() const { return h_kind_; }
  // max over basis vectors of h_norm / v_norm, the embedding constant of V in H.
  double kappa() const { return kappa_; }
  std::string describe() const;

  // (pi k)^2 for k = index + 1
  double eigenvalue(std::size_t index) const;
  const Eigen::VectorXd& eigenvalues() const { return data_->lambda; }

  Eigen::VectorXd to_nodal(const Eigen::VectorXd& coeffs) const;
  Eigen::VectorXd to_coeffs(const Eigen::VectorXd& nodal) const;
  // Sine matrix S (M x n) with S_jk = sqrt(2) sin(k pi x_j).
  const Eigen::MatrixXd& sine_matrix() const { return data_->sine; }
  // Forward differences of nodal values, including both boundary cells:
  // (M + 1) x n matrix mapping coefficients to (u_{i+1} - u_i) / h.
  const Eigen::MatrixXd& gradient_matrix() const { return data_->gradient; }

  double v_norm(const Eigen::VectorXd& c) const;
  double h_norm(const Eigen::VectorXd& c) const;
  double h_inner(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const;
  // <F, v> between V* and V.
  double pairing(const Eigen::VectorXd& F, const Eigen::VectorXd& v) const;
  // Dual norm of the discrete V-norm, computed on the collocation grid from
  // the Riesz-type representative (an upper bound on the dual norm over the
  // n-dimensional subspace, so |<F, v>| <= dual_norm(F) v_norm(v) holds).
  double dual_norm(const Eigen::VectorXd& F) const;

  void check_dim(const Eigen::VectorXd& c, const char* what) const;

 private:
  struct Data {
    Eigen::MatrixXd sine;
    Eigen::MatrixXd gradient;
    Eigen::VectorXd lambda;
  };

  GalerkinSpace(std::size_t n, VNormKind v, HNormKind h, double v_exponent, double alpha);

  std::size_t n_;
  std::size_t m_;
  double h_;
  VNormKind v_kind_;
  HNormKind h_kind_;
  double v_exponent_;
  double alpha_;
  double kappa_ = 0.0;
  std::shared_ptr<const Data> data_;
};

}  // namespace gspde
