#include "gspde/piecewise_function.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gspde/errors.hpp"

namespace gspde {

namespace {

PiecewiseFunction::Fn constant_fn(const Eigen::MatrixXd& m) {
  return [m](double) { return m; };
}

}  // namespace

PiecewiseFunction::PiecewiseFunction(Eigen::Index rows, Eigen::Index cols,
                                     std::vector<Piece> pieces)
    : rows_(rows), cols_(cols), pieces_(std::move(pieces)) {
  if (pieces_.empty()) throw DomainError("piecewise function needs at least one piece");
  if (pieces_.front().lo != 0.0) throw DomainError("piecewise function must start at 0");
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const auto& p = pieces_[i];
    if (!(p.hi > p.lo)) throw DomainError("empty piece at index " + std::to_string(i));
    if (i > 0 && p.lo != pieces_[i - 1].hi)
      throw DomainError("pieces are not contiguous at index " + std::to_string(i));
    if (!p.value) throw DomainError("piece without a value function");
  }
}

PiecewiseFunction PiecewiseFunction::constant(const Matrix& value, double horizon) {
  return PiecewiseFunction(value.rows(), value.cols(), {{0.0, horizon, constant_fn(value), {}}});
}

PiecewiseFunction PiecewiseFunction::scalar_constant(double value, double horizon) {
  return constant(Matrix::Constant(1, 1, value), horizon);
}

PiecewiseFunction PiecewiseFunction::zero(Eigen::Index rows, Eigen::Index cols, double horizon) {
  return constant(Matrix::Zero(rows, cols), horizon);
}

PiecewiseFunction PiecewiseFunction::step(std::vector<double> breaks, std::vector<Matrix> values) {
  if (breaks.size() != values.size() + 1 || values.empty())
    throw DimensionMismatch("step function needs one value per interval");
  std::vector<Piece> pieces;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i].rows() != values[0].rows() || values[i].cols() != values[0].cols())
      throw DimensionMismatch("step values must share one shape");
    pieces.push_back({breaks[i], breaks[i + 1], constant_fn(values[i]), {}});
  }
  return PiecewiseFunction(values[0].rows(), values[0].cols(), std::move(pieces));
}

PiecewiseFunction PiecewiseFunction::indicator(double a, double b, double horizon) {
  if (!(0.0 <= a && a < b && b <= horizon)) throw DomainError("indicator needs 0 <= a < b <= T");
  std::vector<double> breaks{0.0};
  std::vector<Matrix> values;
  if (a > 0.0) {
    breaks.push_back(a);
    values.push_back(Matrix::Zero(1, 1));
  }
  breaks.push_back(b);
  values.push_back(Matrix::Ones(1, 1));
  if (b < horizon) {
    breaks.push_back(horizon);
    values.push_back(Matrix::Zero(1, 1));
  }
  return step(std::move(breaks), std::move(values));
}

PiecewiseFunction PiecewiseFunction::polynomial(std::vector<double> coeffs, double horizon) {
  if (coeffs.empty()) coeffs.push_back(0.0);
  std::vector<double> deriv;
  for (std::size_t k = 1; k < coeffs.size(); ++k) deriv.push_back(double(k) * coeffs[k]);
  auto horner = [](const std::vector<double>& c, double t) {
    double acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * t + *it;
    return acc;
  };
  const bool constant_poly =
      std::all_of(deriv.begin(), deriv.end(), [](double c) { return c == 0.0; });
  if (constant_poly) return scalar_constant(coeffs[0], horizon);
  return scalar([coeffs, horner](double t) { return horner(coeffs, t); },
                [deriv, horner](double t) { return horner(deriv, t); }, horizon);
}

PiecewiseFunction PiecewiseFunction::exponential_decay(double rate, double anchor,
                                                      double horizon) {
  return scalar([=](double t) { return std::exp(-rate * (anchor - t)); },
                [=](double t) { return rate * std::exp(-rate * (anchor - t)); }, horizon);
}

PiecewiseFunction PiecewiseFunction::scalar(ScalarFn value, ScalarFn derivative, double horizon) {
  Piece p{0.0, horizon, [value](double t) { return Matrix::Constant(1, 1, value(t)); }, {}};
  if (derivative) p.derivative = [derivative](double t) { return Matrix::Constant(1, 1, derivative(t)); };
  return PiecewiseFunction(1, 1, {std::move(p)});
}

PiecewiseFunction PiecewiseFunction::scaled_matrix(const PiecewiseFunction& s, const Matrix& m) {
  if (s.rows() != 1 || s.cols() != 1) throw DimensionMismatch("scaled_matrix needs a scalar function");
  std::vector<Piece> pieces;
  for (const auto& p : s.pieces()) {
    Piece q{p.lo, p.hi, [v = p.value, m](double t) { return Matrix(v(t)(0, 0) * m); }, {}};
    if (p.derivative)
      q.derivative = [d = p.derivative, m](double t) { return Matrix(d(t)(0, 0) * m); };
    pieces.push_back(std::move(q));
  }
  return PiecewiseFunction(m.rows(), m.cols(), std::move(pieces));
}

const PiecewiseFunction::Piece& PiecewiseFunction::piece_at(double t) const {
  auto it = std::upper_bound(pieces_.begin(), pieces_.end(), t,
                             [](double x, const Piece& p) { return x < p.hi; });
  if (it == pieces_.end()) return pieces_.back();
  return *it;
}

PiecewiseFunction::Matrix PiecewiseFunction::operator()(double t) const {
  return piece_at(t).value(t);
}

PiecewiseFunction PiecewiseFunction::transpose_times(const Eigen::VectorXd& x) const {
  if (x.size() != rows_) throw DimensionMismatch("transpose_times: vector has wrong length");
  std::vector<Piece> pieces;
  for (const auto& p : pieces_) {
    Piece q{p.lo, p.hi, [v = p.value, x](double t) { return Matrix(v(t).transpose() * x); }, {}};
    if (p.derivative)
      q.derivative = [d = p.derivative, x](double t) { return Matrix(d(t).transpose() * x); };
    pieces.push_back(std::move(q));
  }
  return PiecewiseFunction(cols_, 1, std::move(pieces));
}

PiecewiseFunction PiecewiseFunction::times(const Matrix& m) const {
  if (m.rows() != cols_) throw DimensionMismatch("times: inner dimensions differ");
  std::vector<Piece> pieces;
  for (const auto& p : pieces_) {
    Piece q{p.lo, p.hi, [v = p.value, m](double t) { return Matrix(v(t) * m); }, {}};
    if (p.derivative) q.derivative = [d = p.derivative, m](double t) { return Matrix(d(t) * m); };
    pieces.push_back(std::move(q));
  }
  return PiecewiseFunction(rows_, m.cols(), std::move(pieces));
}

PiecewiseFunction PiecewiseFunction::linear_combination(double a, const PiecewiseFunction& f,
                                                        double b, const PiecewiseFunction& g) {
  if (f.rows() != g.rows() || f.cols() != g.cols())
    throw DimensionMismatch("linear_combination: shapes differ");
  if (std::abs(f.horizon() - g.horizon()) > 1e-14 * f.horizon())
    throw DomainError("linear_combination: horizons differ");
  std::vector<double> breaks;
  for (const auto& p : f.pieces()) breaks.push_back(p.lo);
  for (const auto& p : g.pieces()) breaks.push_back(p.lo);
  breaks.push_back(f.horizon());
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  std::vector<Piece> pieces;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double mid = 0.5 * (breaks[i] + breaks[i + 1]);
    const Piece& pf = f.piece_at(mid);
    const Piece& pg = g.piece_at(mid);
    Piece q{breaks[i], breaks[i + 1],
            [a, b, vf = pf.value, vg = pg.value](double t) { return Matrix(a * vf(t) + b * vg(t)); },
            {}};
    if (pf.derivative || pg.derivative) {
      const Matrix zero = Matrix::Zero(f.rows(), f.cols());
      Fn df = pf.derivative ? pf.derivative : constant_fn(zero);
      Fn dg = pg.derivative ? pg.derivative : constant_fn(zero);
      q.derivative = [a, b, df, dg](double t) { return Matrix(a * df(t) + b * dg(t)); };
    }
    pieces.push_back(std::move(q));
  }
  return PiecewiseFunction(f.rows(), f.cols(), std::move(pieces));
}

bool PiecewiseFunction::is_zero() const {
  for (const auto& p : pieces_) {
    if (!p.is_constant()) return false;
    if (!p.value(p.lo).isZero(0.0)) return false;
  }
  return true;
}

}  // namespace gspde
