#pragma once

// Data-parallel inner loops over Monte Carlo paths. Each routine exists as a
// plain serial reference and an OpenMP version; tests hold the two against
// each other and bench/ times them. The OpenMP versions may use blocked Eigen
// products, so they agree with the reference to rounding, not bitwise; within
// one backend results do not depend on the thread count.
//
// Layout of path arrays: value(path p, node i, coordinate c) sits at
// [(p * m + i) * d + c].

#include <Eigen/Dense>
#include <cstdint>
#include <span>

namespace gspde::kernels {

// For every path p and coordinate c: draw d = m - 1 standard normals from the
// substream (seed, p, c), correlate them with the lower Cholesky factor of
// the increment covariance, and write scale[c] * cumulative sums (value 0 at
// node 0).
void correlate_paths_serial(const Eigen::MatrixXd& lower, std::span<const double> scales,
                            std::uint64_t seed, std::size_t n_paths, std::span<double> out);
void correlate_paths_omp(const Eigen::MatrixXd& lower, std::span<const double> scales,
                         std::uint64_t seed, std::size_t n_paths, std::span<double> out);

// w(p, k) = sum_{i < k} weights[i] * (G(p, i + 1) - G(p, i)), weights[i] of
// shape dim x N. Output layout as above with d = dim.
void accumulate_integrals_serial(std::span<const Eigen::MatrixXd> weights,
                                 std::span<const double> paths, std::size_t n_paths,
                                 std::size_t m, std::size_t n_coords, std::span<double> out);
void accumulate_integrals_omp(std::span<const Eigen::MatrixXd> weights,
                              std::span<const double> paths, std::size_t n_paths, std::size_t m,
                              std::size_t n_coords, std::span<double> out);

// out[p] = <a(p), b(p)> for per-path row vectors stored contiguously.
void rowwise_dot_serial(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, std::span<double> out);
void rowwise_dot_omp(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, std::span<double> out);

}  // namespace gspde::kernels
