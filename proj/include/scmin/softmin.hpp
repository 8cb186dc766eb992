#pragma once

#include <Eigen/Core>
#include <optional>
#include <span>
#include <vector>

#include "scmin/smoothing.hpp"

namespace scmin {

// Value, input-space gradient, and (optionally) input-space Hessian of one
// smoothed-min evaluation.  weights lives on the probability simplex: every
// entry is in [0, 1] and they sum to 1.  All indices are 0-based.
struct SoftMinEval {
  double value = 0.0;
  Eigen::VectorXd weights;
  std::optional<Eigen::MatrixXd> hessian;
};

struct ActiveIndexInfo {
  std::vector<int> active;  // indices within tie_tolerance of the min, increasing
  int largest_active = -1;
  double tie_tolerance = 0.0;
};

// Exact minimum of the first n entries via the nested positive-part
// recursion
//   psi_1 = a_1,  psi_{i+1} = a_{i+1} - (a_{i+1} - psi_i)_+ .
// When the positive part is active the two subtractions cancel exactly, so
// each step is evaluated without intermediate rounding and the result is
// bit-identical to the running prefix minimum.  Non-increasing in n.
double psi_exact(std::span<const double> a, std::size_t n);

// Full-length convenience form.
double psi_exact(std::span<const double> a);

// Smoothed minimum psi_{n,eps} obtained by replacing (.)_+ with g:
//   psi_{i+1,eps} = a_{i+1} - g(a_{i+1} - psi_{i,eps}).
// One forward pass also yields the gradient through
//   d psi_{i+1} / d a_j = delta_{i+1,j} - g'(gap) (delta_{i+1,j} - d psi_i / d a_j)
// and, if requested, the Hessian through the rank-one update
//   H_{i+1} = -g''(gap) (e_{i+1} - p_i)(e_{i+1} - p_i)^T + g'(gap) H_i,
// which keeps H negative semidefinite with operator norm <= 2(n-1) ||g''||.
SoftMinEval psi_smooth(std::span<const double> a, const SmoothPlus& g,
                       bool with_hessian = false);

// Closed-form weights
//   p_j = (prod_{i>j} g'(a_i - psi_{i-1,eps})) * (1 - g'(a_j - psi_{j-1,eps})),
// with the second factor defined as 1 for j = 0 (the seed index has no
// predecessor).  Agrees with psi_smooth().weights up to roundoff.
Eigen::VectorXd weights_product_form(std::span<const double> a,
                                     const SmoothPlus& g);

// eps -> 0 limit of the Moreau weights: the indicator of the largest index
// attaining the minimum within tie_tolerance.
Eigen::VectorXd limit_weights(std::span<const double> a, double tie_tolerance);

ActiveIndexInfo active_info(std::span<const double> a, double tie_tolerance);

// Log-sum-exp baseline psi(a) = -eps log( (1/n) sum_i exp(-a_i / eps) ),
// evaluated with min-shift stabilization; weights are the softmin
// probabilities.  Satisfies min(a) <= value <= min(a) + eps log n.  No
// Hessian is produced.
SoftMinEval lse_min(std::span<const double> a, double epsilon);

}  // namespace scmin
