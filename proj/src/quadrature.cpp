#include "gspde/quadrature.hpp"

#include <algorithm>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <limits>
#include <sstream>

#include "gspde/errors.hpp"

namespace gspde::quad {

namespace {

boost::math::quadrature::tanh_sinh<double>& rule() {
  thread_local boost::math::quadrature::tanh_sinh<double> integrator(15);
  return integrator;
}

void check(double value, double error, double l1, double tol, double a, double b) {
  if (!std::isfinite(value)) {
    std::ostringstream os;
    os << "quadrature produced a non-finite value on [" << a << ", " << b << "]";
    throw QuadratureError(os.str());
  }
  // tanh-sinh reports its last level difference, measured on the unit
  // interval; allow slack for the conservative estimate but reject clear
  // non-convergence.
  const double allowed = std::max(100.0 * tol * l1, 1e-12 * tol);
  if (error > allowed) {
    std::ostringstream os;
    os << "quadrature did not reach tolerance " << tol << " on [" << a << ", " << b
       << "]: error estimate " << error << ", L1 " << l1;
    throw QuadratureError(os.str());
  }
}

}  // namespace

// All integrals run on [0, 1] in the unit variable u with x = a + (b - a) u.
// boost reports the signed distance to the nearer endpoint as a second
// argument, which keeps x exact next to both ends; working at unit scale
// also keeps its error estimate meaningful on very short intervals.
static double unit_integral(const std::function<double(double, double)>& g, double a, double b,
                     double tol) {
  double error = 0.0;
  double l1 = 0.0;
  double value = 0.0;
  try {
    value = rule().integrate(g, 0.0, 1.0, tol, &error, &l1);
  } catch (const std::exception& e) {
    throw QuadratureError(std::string("quadrature failed: ") + e.what());
  }
  check(value, error, l1, tol, a, b);
  return (b - a) * value;
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
  if (b == a) return 0.0;
  if (b < a) return -integrate(f, b, a, tol);
  const double len = b - a;
  // Nodes that round onto an endpoint are moved one ulp inside, so that
  // kernels singular at a corner are never evaluated there.
  const double inner_a = std::nextafter(a, b), inner_b = std::nextafter(b, a);
  auto g = [&](double u, double uc) {
    const double x = u < 0.5 ? a - len * uc : b - len * uc;
    return f(std::clamp(x, inner_a, inner_b));
  };
  return unit_integral(g, a, b, tol);
}

double integrate_offset(const std::function<double(double)>& f, double len, double tol) {
  if (len <= 0.0) return 0.0;
  // Nodes whose offset underflows to 0 carry weight ~1e-300 and are dropped.
  auto g = [&](double u, double uc) {
    const double d = len * (u < 0.5 ? -uc : u);
    return d > 0.0 ? f(d) : 0.0;
  };
  return unit_integral(g, 0.0, len, tol);
}

double rectangle(const Integrand2d& g, double a, double b, double c, double d, double tol) {
  if (!(b > a) || !(d > c)) return 0.0;
  return integrate(
      [&](double x) {
        return integrate([&](double y) { return g(x, y, std::abs(x - y)); }, c, d, 0.1 * tol);
      },
      a, b, tol);
}

double rectangle_with_diagonal(const Integrand2d& g, double a, double b, double c, double d,
                               double tol) {
  if (!(b > a) || !(d > c)) return 0.0;
  const double lo = std::max(a, c);
  const double hi = std::min(b, d);
  if (!(hi > lo)) return rectangle(g, a, b, c, d, tol);

  double total = 0.0;
  // Off-diagonal strips; each touches the diagonal at most in a corner.
  total += rectangle(g, a, lo, c, d, tol);
  total += rectangle(g, hi, b, c, d, tol);
  total += rectangle(g, lo, hi, c, lo, tol);
  total += rectangle(g, lo, hi, hi, d, tol);

  // Square [lo, hi]^2: lower triangle y = x - s, upper triangle x = y - s.
  auto lower = [&](double x) {
    return integrate_offset([&](double s) { return g(x, x - s, s); }, x - lo, 0.1 * tol);
  };
  auto upper = [&](double y) {
    return integrate_offset([&](double s) { return g(y - s, y, s); }, y - lo, 0.1 * tol);
  };
  total += integrate(lower, lo, hi, tol);
  total += integrate(upper, lo, hi, tol);
  return total;
}

}  // namespace gspde::quad
