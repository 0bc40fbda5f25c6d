#include "gspde/galerkin_space.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "gspde/errors.hpp"

namespace gspde {

namespace {

double discrete_lq(const Eigen::VectorXd& values, double q, double h) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < values.size(); ++i) acc += std::pow(std::abs(values[i]), q);
  return std::pow(h * acc, 1.0 / q);
}

// min_c (h sum |s_i + c|^q)^{1/q}; the objective is convex in c.
double min_shifted_lq(const Eigen::VectorXd& s, double q, double h) {
  if (q == 2.0) return discrete_lq(s.array() - s.mean(), 2.0, h);
  auto slope = [&](double c) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
      const double x = s[i] + c;
      acc += std::copysign(std::pow(std::abs(x), q - 1.0), x);
    }
    return acc;
  };
  double lo = -s.maxCoeff(), hi = -s.minCoeff();
  for (int it = 0; it < 200 && hi - lo > 1e-15 * (std::abs(lo) + std::abs(hi) + 1e-300); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (slope(mid) > 0.0)
      hi = mid;
    else
      lo = mid;
  }
  return discrete_lq(s.array() + 0.5 * (lo + hi), q, h);
}

}  // namespace

GalerkinSpace::GalerkinSpace(std::size_t n, VNormKind v, HNormKind h, double v_exponent,
                             double alpha)
    : n_(n), m_(4 * n), h_(1.0 / double(4 * n + 1)), v_kind_(v), h_kind_(h),
      v_exponent_(v_exponent), alpha_(alpha) {
  if (n < 1) throw DomainError("Galerkin dimension must be >= 1");
  if (!(alpha > 1.0)) throw DomainError("alpha must lie in (1, inf)");
  auto data = std::make_shared<Data>();
  const Eigen::Index N = Eigen::Index(n), M = Eigen::Index(m_);
  data->sine.resize(M, N);
  for (Eigen::Index j = 0; j < M; ++j)
    for (Eigen::Index k = 0; k < N; ++k)
      data->sine(j, k) = std::sqrt(2.0) * std::sin(double(k + 1) * std::numbers::pi * double(j + 1) * h_);
  // Row i is (u_{i+1} - u_i) / h with u_0 = u_{M+1} = 0.
  data->gradient.resize(M + 1, N);
  for (Eigen::Index i = 0; i <= M; ++i) {
    Eigen::RowVectorXd right = (i < M) ? Eigen::RowVectorXd(data->sine.row(i)) : Eigen::RowVectorXd::Zero(N);
    Eigen::RowVectorXd left = (i > 0) ? Eigen::RowVectorXd(data->sine.row(i - 1)) : Eigen::RowVectorXd::Zero(N);
    data->gradient.row(i) = (right - left) / h_;
  }
  data->lambda.resize(N);
  for (Eigen::Index k = 0; k < N; ++k) data->lambda[k] = std::pow(double(k + 1) * std::numbers::pi, 2);
  data_ = std::move(data);

  for (std::size_t k = 0; k < n_; ++k) {
    Eigen::VectorXd e = Eigen::VectorXd::Unit(N, Eigen::Index(k));
    kappa_ = std::max(kappa_, h_norm(e) / v_norm(e));
  }
}

GalerkinSpace GalerkinSpace::sobolev(std::size_t n, double p) {
  if (!(p > 1.0)) throw DomainError("W^{1,p} needs p > 1");
  return GalerkinSpace(n, VNormKind::kGradientLp, HNormKind::kL2, p, p);
}

GalerkinSpace GalerkinSpace::energy(std::size_t n) {
  return GalerkinSpace(n, VNormKind::kSpectralH1, HNormKind::kL2, 2.0, 2.0);
}

GalerkinSpace GalerkinSpace::lebesgue_hminus1(std::size_t n, double q) {
  if (!(q > 1.0)) throw DomainError("L^q needs q > 1");
  return GalerkinSpace(n, VNormKind::kLebesgue, HNormKind::kHminus1, q, q);
}

std::string GalerkinSpace::describe() const {
  std::ostringstream os;
  os << "sine Galerkin n=" << n_ << ", V=";
  switch (v_kind_) {
    case VNormKind::kGradientLp: os << "W^{1," << v_exponent_ << "}_0"; break;
    case VNormKind::kSpectralH1: os << "H^1_0"; break;
    case VNormKind::kLebesgue: os << "L^" << v_exponent_; break;
  }
  os << ", H=" << (h_kind_ == HNormKind::kL2 ? "L^2" : "H^-1");
  return os.str();
}

double GalerkinSpace::eigenvalue(std::size_t index) const { return data_->lambda[Eigen::Index(index)]; }

void GalerkinSpace::check_dim(const Eigen::VectorXd& c, const char* what) const {
  if (std::size_t(c.size()) != n_) {
    std::ostringstream os;
    os << what << ": expected " << n_ << " coefficients, got " << c.size();
    throw DimensionMismatch(os.str());
  }
}

Eigen::VectorXd GalerkinSpace::to_nodal(const Eigen::VectorXd& coeffs) const {
  check_dim(coeffs, "to_nodal");
  return data_->sine * coeffs;
}

Eigen::VectorXd GalerkinSpace::to_coeffs(const Eigen::VectorXd& nodal) const {
  if (std::size_t(nodal.size()) != m_) throw DimensionMismatch("to_coeffs: wrong number of nodes");
  return h_ * (data_->sine.transpose() * nodal);
}

double GalerkinSpace::v_norm(const Eigen::VectorXd& c) const {
  check_dim(c, "v_norm");
  switch (v_kind_) {
    case VNormKind::kGradientLp:
      return discrete_lq(data_->gradient * c, v_exponent_, h_);
    case VNormKind::kSpectralH1:
      return std::sqrt((data_->lambda.array() * c.array().square()).sum());
    case VNormKind::kLebesgue:
      return discrete_lq(data_->sine * c, v_exponent_, h_);
  }
  return 0.0;
}

double GalerkinSpace::h_inner(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const {
  check_dim(a, "h_inner");
  check_dim(b, "h_inner");
  if (h_kind_ == HNormKind::kL2) return a.dot(b);
  return (a.array() * b.array() / data_->lambda.array()).sum();
}

double GalerkinSpace::h_norm(const Eigen::VectorXd& c) const { return std::sqrt(h_inner(c, c)); }

double GalerkinSpace::pairing(const Eigen::VectorXd& F, const Eigen::VectorXd& v) const {
  return h_inner(F, v);
}

double GalerkinSpace::dual_norm(const Eigen::VectorXd& F) const {
  check_dim(F, "dual_norm");
  const double q = v_exponent_;
  const double q_dual = q / (q - 1.0);
  switch (v_kind_) {
    case VNormKind::kSpectralH1: {
      // pairing is Euclidean here
      return std::sqrt((F.array().square() / data_->lambda.array()).sum());
    }
    case VNormKind::kGradientLp: {
      // Nodal representative G with h sum G_j v_j = <F, v>, written as a
      // discrete divergence of a flux sigma; the dual norm is the L^{q'}
      // norm of sigma minimised over the free constant.
      Eigen::VectorXd riesz = F;
      if (h_kind_ == HNormKind::kHminus1) riesz = (F.array() / data_->lambda.array()).matrix();
      const Eigen::VectorXd G = data_->sine * riesz;
      Eigen::VectorXd sigma(Eigen::Index(m_) + 1);
      sigma[0] = 0.0;
      for (Eigen::Index j = 0; j < Eigen::Index(m_); ++j) sigma[j + 1] = sigma[j] - h_ * G[j];
      return min_shifted_lq(sigma, q_dual, h_);
    }
    case VNormKind::kLebesgue: {
      Eigen::VectorXd riesz = F;
      if (h_kind_ == HNormKind::kHminus1) riesz = (F.array() / data_->lambda.array()).matrix();
      return discrete_lq(data_->sine * riesz, q_dual, h_);
    }
  }
  return 0.0;
}

}  // namespace gspde
