#pragma once

#include <functional>

namespace gspde::quad {

// Double-exponential (tanh-sinh) rules; integrable endpoint singularities are
// fine, interior kinks must be split off by the caller.

inline constexpr double kDefaultTolerance = 1e-10;

// \int_a^b f(x) dx
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol = kDefaultTolerance);

// \int_0^len f(d) dd where f may blow up as d -> 0. The offset d is passed
// without cancellation, so f sees distances down to the smallest normal.
double integrate_offset(const std::function<double(double)>& f, double len,
                        double tol = kDefaultTolerance);

// Integrand g(x, y, lag) with lag = |x - y| supplied without cancellation
// inside the rotated diagonal square.
using Integrand2d = std::function<double(double x, double y, double lag)>;

// \int_a^b \int_c^d g(x, y) dy dx for a rectangle whose interior does not meet
// a singular set of g other than its boundary.
double rectangle(const Integrand2d& g, double a, double b, double c, double d,
                 double tol = kDefaultTolerance);

// \int_a^b \int_c^d g(x, y) dy dx where g is singular (or has a kink) on the
// diagonal x = y. The overlap square is integrated in rotated coordinates
// (x, x - y) and (y, y - x) so the singularity sits on an edge.
double rectangle_with_diagonal(const Integrand2d& g, double a, double b, double c, double d,
                               double tol = kDefaultTolerance);

}  // namespace gspde::quad
