#include "gspde/operators.hpp"

#include <cmath>
#include <sstream>

#include "gspde/errors.hpp"

namespace gspde {

namespace {

// |x|^e for exponents that are often small integers; integer exponents use
// repeated multiplication so that scaling by powers of two is exact.
double abs_pow(double x, double e) {
  const double a = std::abs(x);
  if (e == std::floor(e) && e >= 0.0 && e <= 16.0) {
    double r = 1.0;
    for (int i = 0; i < int(e); ++i) r *= a;
    return r;
  }
  return std::pow(a, e);
}

}  // namespace

DriftOperator::DriftOperator(std::string name, GalerkinSpace space, Eval eval, Jacobian jacobian,
                             DeclaredConstants constants, std::map<std::string, double> params)
    : name_(std::move(name)), space_(std::move(space)), eval_(std::move(eval)),
      jacobian_(std::move(jacobian)), constants_(std::move(constants)), params_(std::move(params)) {
  const auto& k = constants_;
  if (!std::isfinite(k.c) || !std::isfinite(k.c1) || !std::isfinite(k.c2) ||
      !std::isfinite(k.c3) || !std::isfinite(k.alpha))
    throw DomainError("declared constants of '" + name_ + "' must be finite");
}

Eigen::VectorXd DriftOperator::operator()(double t, const Eigen::VectorXd& v) const {
  space_.check_dim(v, name_.c_str());
  return eval_(t, v);
}

Eigen::MatrixXd DriftOperator::jacobian(double t, const Eigen::VectorXd& v) const {
  space_.check_dim(v, name_.c_str());
  if (jacobian_) return jacobian_(t, v);
  const Eigen::Index n = v.size();
  Eigen::MatrixXd J(n, n);
  Eigen::VectorXd x = v;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double step = 1e-6 * (1.0 + std::abs(v[i]));
    x[i] = v[i] + step;
    const Eigen::VectorXd fp = eval_(t, x);
    x[i] = v[i] - step;
    const Eigen::VectorXd fm = eval_(t, x);
    x[i] = v[i];
    J.col(i) = (fp - fm) / (2.0 * step);
  }
  return J;
}

DiffusionOperator::DiffusionOperator(std::string name, GalerkinSpace space, std::size_t noise_dim,
                                     Eval eval, bool state_independent)
    : name_(std::move(name)), space_(std::move(space)), noise_dim_(noise_dim),
      eval_(std::move(eval)), state_independent_(state_independent) {
  if (noise_dim_ < 1) throw DomainError("diffusion needs at least one noise coordinate");
}

Eigen::MatrixXd DiffusionOperator::operator()(double t, const Eigen::VectorXd& v) const {
  space_.check_dim(v, name_.c_str());
  Eigen::MatrixXd b = eval_(t, v);
  if (std::size_t(b.rows()) != space_.dim() || std::size_t(b.cols()) != noise_dim_)
    throw DimensionMismatch("diffusion '" + name_ + "' returned a matrix of the wrong shape");
  return b;
}

double DiffusionOperator::hs_norm(const Eigen::MatrixXd& b) const {
  double acc = 0.0;
  for (Eigen::Index j = 0; j < b.cols(); ++j) acc += std::pow(space_.h_norm(b.col(j)), 2);
  return std::sqrt(acc);
}

DriftOperator make_linear_heat(const GalerkinSpace& space) {
  const Eigen::VectorXd lambda = space.eigenvalues();
  DeclaredConstants k;
  k.c2 = 2.0;
  k.c3 = 1.0;
  k.alpha = 2.0;
  if (space.v_kind() != VNormKind::kSpectralH1 || space.h_kind() != HNormKind::kL2)
    throw DomainError("linear heat operator needs the H^1_0 / L^2 triple");
  return DriftOperator(
      "linear_heat", space,
      [lambda](double, const Eigen::VectorXd& v) -> Eigen::VectorXd {
        return -(lambda.array() * v.array()).matrix();
      },
      [lambda](double, const Eigen::VectorXd&) -> Eigen::MatrixXd {
        return -Eigen::MatrixXd(lambda.asDiagonal());
      },
      k);
}

DriftOperator make_p_laplace(const GalerkinSpace& space, double p) {
  if (!(p >= 2.0)) {
    std::ostringstream os;
    os << "p-Laplace needs p >= 2, got " << p;
    throw DomainError(os.str());
  }
  if (space.v_kind() != VNormKind::kGradientLp || space.v_exponent() != p)
    throw DomainError("p-Laplace needs the W^{1,p}_0 / L^2 triple with the same p");
  const Eigen::MatrixXd grad = space.gradient_matrix();
  const double h = space.mesh_width();
  DeclaredConstants k;
  k.c2 = 2.0;
  // Measured bound on the dual norm of the projected flux divergence; the
  // L^2 projection onto n sine modes is not a W^{1,p} contraction for p > 2.
  k.c3 = (p == 2.0) ? 1.0 : 2.0;
  k.alpha = p;
  auto eval = [grad, h, p](double, const Eigen::VectorXd& v) -> Eigen::VectorXd {
    Eigen::VectorXd flux = grad * v;
    for (Eigen::Index i = 0; i < flux.size(); ++i)
      flux[i] = abs_pow(flux[i], p - 2.0) * flux[i];
    return -h * (grad.transpose() * flux);
  };
  auto jac = [grad, h, p](double, const Eigen::VectorXd& v) -> Eigen::MatrixXd {
    Eigen::VectorXd d = grad * v;
    for (Eigen::Index i = 0; i < d.size(); ++i) d[i] = (p - 1.0) * abs_pow(d[i], p - 2.0);
    return -h * (grad.transpose() * d.asDiagonal() * grad);
  };
  return DriftOperator("p_laplace", space, eval, jac, k, {{"p", p}});
}

DriftOperator make_porous_medium(const GalerkinSpace& space, double m) {
  if (!(m >= 1.0)) {
    std::ostringstream os;
    os << "porous medium needs m >= 1, got " << m;
    throw DomainError(os.str());
  }
  if (space.v_kind() != VNormKind::kLebesgue || space.h_kind() != HNormKind::kHminus1 ||
      space.v_exponent() != m + 1.0)
    throw DomainError("porous medium needs the L^{m+1} / H^-1 triple");
  const Eigen::MatrixXd sine = space.sine_matrix();
  const Eigen::VectorXd lambda = space.eigenvalues();
  const double h = space.mesh_width();
  DeclaredConstants k;
  k.c2 = 2.0;
  // Measured, see the p-Laplace note; exact for m = 1.
  k.c3 = (m == 1.0) ? 1.0 : 2.0;
  k.alpha = m + 1.0;
  auto eval = [sine, lambda, h, m](double, const Eigen::VectorXd& v) -> Eigen::VectorXd {
    Eigen::VectorXd u = sine * v;
    for (Eigen::Index j = 0; j < u.size(); ++j) u[j] = abs_pow(u[j], m - 1.0) * u[j];
    Eigen::VectorXd proj = h * (sine.transpose() * u);
    return -(lambda.array() * proj.array()).matrix();
  };
  auto jac = [sine, lambda, h, m](double, const Eigen::VectorXd& v) -> Eigen::MatrixXd {
    Eigen::VectorXd d = sine * v;
    for (Eigen::Index j = 0; j < d.size(); ++j) d[j] = m * abs_pow(d[j], m - 1.0);
    Eigen::MatrixXd inner = h * (sine.transpose() * d.asDiagonal() * sine);
    return -(lambda.asDiagonal() * inner);
  };
  return DriftOperator("porous_medium", space, eval, jac, k, {{"m", m}});
}

DriftOperator make_zero_drift(const GalerkinSpace& space) {
  const Eigen::Index n = Eigen::Index(space.dim());
  DeclaredConstants k;
  k.alpha = space.alpha();
  return DriftOperator(
      "zero", space, [n](double, const Eigen::VectorXd&) { return Eigen::VectorXd::Zero(n).eval(); },
      [n](double, const Eigen::VectorXd&) { return Eigen::MatrixXd::Zero(n, n).eval(); }, k);
}

DriftOperator make_sign_drift(const GalerkinSpace& space) {
  const Eigen::MatrixXd sine = space.sine_matrix();
  const double h = space.mesh_width();
  DeclaredConstants k;
  k.alpha = space.alpha();
  k.c3 = 1.0;
  auto eval = [sine, h](double, const Eigen::VectorXd& v) -> Eigen::VectorXd {
    Eigen::VectorXd u = sine * v;
    for (Eigen::Index j = 0; j < u.size(); ++j) u[j] = (u[j] > 0.0) - (u[j] < 0.0);
    return -h * (sine.transpose() * u);
  };
  return DriftOperator("sign", space, eval, {}, k);
}

DiffusionOperator make_zero_diffusion(const GalerkinSpace& space, std::size_t noise_dim) {
  const Eigen::Index n = Eigen::Index(space.dim()), d = Eigen::Index(noise_dim);
  DiffusionOperator b("zero", space, noise_dim,
                      [n, d](double, const Eigen::VectorXd&) { return Eigen::MatrixXd::Zero(n, d).eval(); },
                      true);
  b.zero_ = true;
  return b;
}

DiffusionOperator make_constant_diffusion(const GalerkinSpace& space, const Eigen::MatrixXd& b) {
  if (std::size_t(b.rows()) != space.dim())
    throw DimensionMismatch("constant diffusion must have dim H rows");
  if (!b.allFinite()) throw DomainError("constant diffusion must be finite");
  return DiffusionOperator("constant", space, std::size_t(b.cols()),
                           [b](double, const Eigen::VectorXd&) { return b; }, true);
}

DiffusionOperator make_lipschitz_multiplication(const GalerkinSpace& space, double lipschitz) {
  if (!std::isfinite(lipschitz)) throw DomainError("Lipschitz constant must be finite");
  return DiffusionOperator(
      "lipschitz_multiplication", space, 1,
      [lipschitz](double, const Eigen::VectorXd& v) -> Eigen::MatrixXd { return lipschitz * v; },
      false);
}

namespace {

std::size_t node_of(const NoisePath& w, double t) {
  auto idx = w.grid.index_of(t);
  if (!idx) {
    std::ostringstream os;
    os << "shifted operator evaluated at t = " << t << ", which is not a node of the noise grid";
    throw RangeError(os.str());
  }
  return *idx;
}

void validate_path(const NoisePath& w, const GalerkinSpace& space) {
  if (std::size_t(w.values.cols()) != space.dim()) {
    std::ostringstream os;
    os << "noise path has " << w.values.cols() << " coefficients, space has " << space.dim();
    throw RangeError(os.str());
  }
  if (std::size_t(w.values.rows()) != w.grid.size())
    throw RangeError("noise path has a different number of nodes than its grid");
  if (!w.values.allFinite()) throw RangeError("noise path is not finite");
  if (w.range) {
    std::vector<bool> allowed(space.dim(), false);
    for (std::size_t i : *w.range) {
      if (i >= space.dim()) throw RangeError("declared range index outside the space");
      allowed[i] = true;
    }
    for (Eigen::Index c = 0; c < w.values.cols(); ++c)
      if (!allowed[std::size_t(c)] && (w.values.col(c).array() != 0.0).any()) {
        std::ostringstream os;
        os << "noise path has a nonzero component " << c << " outside the declared range";
        throw RangeError(os.str());
      }
  }
}

}  // namespace

ShiftedOperators shift_operators(const DriftOperator& a, const DiffusionOperator& b,
                                 std::shared_ptr<const NoisePath> w) {
  if (!w) throw RangeError("missing noise path");
  if (a.space().dim() != b.space().dim())
    throw DimensionMismatch("drift and diffusion live on different spaces");
  validate_path(*w, a.space());

  auto shift = [w](double t, const Eigen::VectorXd& v) -> Eigen::VectorXd {
    return v + w->values.row(Eigen::Index(node_of(*w, t))).transpose();
  };
  DriftOperator::Jacobian jac;
  if (a.has_jacobian())
    jac = [a, shift](double t, const Eigen::VectorXd& v) { return a.jacobian(t, shift(t, v)); };
  DriftOperator drift("shifted(" + a.name() + ")", a.space(),
                      [a, shift](double t, const Eigen::VectorXd& v) { return a(t, shift(t, v)); },
                      jac, a.constants(), a.params());
  DiffusionOperator diffusion(
      "shifted(" + b.name() + ")", b.space(), b.noise_dim(),
      [b, shift](double t, const Eigen::VectorXd& v) { return b(t, shift(t, v)); },
      b.state_independent());
  return {std::move(drift), std::move(diffusion)};
}

}  // namespace gspde
