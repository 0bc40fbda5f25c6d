#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gspde/operators.hpp"

namespace gspde {

// Sampling-based falsification of the structural conditions. Points are
// Gaussian coefficient vectors scaled by each amplitude in turn.
struct ConditionOptions {
  std::size_t n_samples = 1000;
  std::uint64_t seed = 1;
  std::vector<double> amplitudes = {1e-2, 1e-1, 1.0, 1e1, 1e2};
  // Evaluation times, cycled through the samples. Shifted operators must be
  // given nodes of their noise grid.
  std::vector<double> times = {0.0};
  double rel_tol = 1e-8;
};

struct ConditionReport {
  std::string condition;
  std::size_t samples = 0;
  // max over samples of (lhs - rhs) / scale; pass iff <= rel_tol
  double worst_margin = 0.0;
  double worst_abs_margin = 0.0;
  // (H2): max 2<A(u)-A(v),u-v> + ||B(u)-B(v)||^2 over ||u-v||_H^2.
  // (H4): max ||A(v)||_* / ||v||_V^{alpha-1}.
  double empirical_constant = 0.0;
  // (H4): log-log slope of ||A(s v)||_* against ||s v||_V.
  double slope = 0.0;
  // (H1): maximal adjacent jump at each lambda-grid level and their ratios.
  std::vector<double> jumps;
  std::vector<double> ratios;
  bool pass = false;
};

ConditionReport check_h1(const DriftOperator& a, const ConditionOptions& opts = {});
ConditionReport check_h2(const DriftOperator& a, const DiffusionOperator& b,
                         const ConditionOptions& opts = {});
ConditionReport check_h3(const DriftOperator& a, const DiffusionOperator& b,
                         const ConditionOptions& opts = {});
ConditionReport check_h4(const DriftOperator& a, const ConditionOptions& opts = {});

// |<F, v>| <= ||F||_* ||v||_V over random pairs; returns the worst ratio.
double duality_worst_ratio(const GalerkinSpace& space, std::size_t n_samples, std::uint64_t seed);

}  // namespace gspde
