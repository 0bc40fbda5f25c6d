#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace gspde {

// Deterministic integrand t -> F(t) in R^{rows x cols} on [0, T], smooth on
// each piece [lo, hi). Vectors are single-column functions; operator-valued
// integrands h(t) in L(U, H) are rows = dim H, cols = dim U.
//
// Each piece carries its derivative so that integrals against the kernel can
// be moved onto the covariance function by integration by parts. A piece
// without a derivative is constant.
class PiecewiseFunction {
 public:
  using Matrix = Eigen::MatrixXd;
  using Fn = std::function<Matrix(double)>;
  using ScalarFn = std::function<double(double)>;

  struct Piece {
    double lo = 0.0;
    double hi = 0.0;
    Fn value;
    Fn derivative;  // empty when the piece is constant

    bool is_constant() const { return !derivative; }
  };

  PiecewiseFunction(Eigen::Index rows, Eigen::Index cols, std::vector<Piece> pieces);

  static PiecewiseFunction constant(const Matrix& value, double horizon);
  static PiecewiseFunction scalar_constant(double value, double horizon);
  static PiecewiseFunction zero(Eigen::Index rows, Eigen::Index cols, double horizon);
  // values[i] on [breaks[i], breaks[i+1]); breaks must start at 0.
  static PiecewiseFunction step(std::vector<double> breaks, std::vector<Matrix> values);
  static PiecewiseFunction indicator(double a, double b, double horizon);
  // sum_k coeffs[k] t^k
  static PiecewiseFunction polynomial(std::vector<double> coeffs, double horizon);
  // exp(-rate (anchor - t)), the mild-solution weight of a decaying mode
  static PiecewiseFunction exponential_decay(double rate, double anchor, double horizon);
  static PiecewiseFunction scalar(ScalarFn value, ScalarFn derivative, double horizon);
  // t -> scalar(t) * M
  static PiecewiseFunction scaled_matrix(const PiecewiseFunction& scalar, const Matrix& m);

  Eigen::Index rows() const { return rows_; }
  Eigen::Index cols() const { return cols_; }
  double horizon() const { return pieces_.back().hi; }
  const std::vector<Piece>& pieces() const { return pieces_; }

  // Right-continuous evaluation; t = T is taken from the last piece.
  Matrix operator()(double t) const;
  double scalar_at(double t) const { return (*this)(t)(0, 0); }

  // t -> F(t)^T x
  PiecewiseFunction transpose_times(const Eigen::VectorXd& x) const;
  // t -> F(t) * M
  PiecewiseFunction times(const Matrix& m) const;
  // t -> a F(t) + b G(t) on the common refinement of both partitions
  static PiecewiseFunction linear_combination(double a, const PiecewiseFunction& f, double b,
                                              const PiecewiseFunction& g);

  bool is_zero() const;

 private:
  const Piece& piece_at(double t) const;

  Eigen::Index rows_;
  Eigen::Index cols_;
  std::vector<Piece> pieces_;
};

}  // namespace gspde
