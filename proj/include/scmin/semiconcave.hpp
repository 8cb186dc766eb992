#pragma once

#include <Eigen/Core>
#include <optional>
#include <vector>

#include "scmin/function.hpp"
#include "scmin/softmin.hpp"

namespace scmin {

enum class MinMode { Exact, Moreau, Algebraic, LogSumExp };

const char* to_string(MinMode mode);

// Grid estimates of L = max_i sup |grad phi_i| and C = max_i sup of the
// Hessian operator norm over the family domain.
struct FamilyConstants {
  double L = 0.0;
  double C = 0.0;
};

FamilyConstants estimate_constants(const FunctionFamily& family,
                                   int grid_per_axis = 201);

// Composite approximation v(x) = psi(phi_1(x), ..., phi_n(x)) of the
// pointwise minimum of a C^2 family, where psi is the exact min, a smoothed
// min, or the log-sum-exp baseline.  The smoothed modes keep v semiconcave:
// the composite Hessian satisfies lambda_max <= C and
// ||Hess v|| <= C + 2 n(n-1) L^2 ||g''||.
class SemiconcaveApprox {
 public:
  SemiconcaveApprox(FunctionFamily family, MinMode mode, double epsilon,
                    int constants_grid = 201, double tie_tolerance_rel = 1e-12);

  double value(const Eigen::VectorXd& x) const;

  // Smooth modes: sum_i p_i grad phi_i with the smoothed-min (or softmin)
  // weights.  Exact mode: the reference gradient grad phi_ihat, ihat the
  // largest active index.
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const;
  std::pair<double, Eigen::VectorXd> value_and_gradient(
      const Eigen::VectorXd& x) const;

  // Chain-rule Hessian J^T Hpsi J + sum_i p_i Hess phi_i.  Only the Moreau
  // and algebraic modes carry one; other modes throw std::logic_error.
  Eigen::MatrixXd hessian(const Eigen::VectorXd& x) const;

  ActiveIndexInfo active_set(const Eigen::VectorXd& x,
                             double tie_tolerance) const;

  // Membership in Omega_delta = {x : v_n(x) <= phi_j(x) - delta for every
  // inactive j}: every member gap is either <= the tie tolerance (active)
  // or >= delta (safely inactive); a gap strictly between disqualifies x.
  bool omega_delta_member(const Eigen::VectorXd& x, double delta) const;

  // Index of the largest weight; ties resolve to the largest index.
  int gradient_active_index(const Eigen::VectorXd& x) const;

  MinMode mode() const { return mode_; }
  double epsilon() const { return epsilon_; }
  double lipschitz() const { return constants_.L; }
  double curvature() const { return constants_.C; }
  const FunctionFamily& family() const { return family_; }
  const SmoothPlus* smoother() const;  // null unless Moreau/Algebraic
  double tie_tolerance_rel() const { return tie_rel_; }

 private:
  void member_values(const Eigen::VectorXd& x, std::vector<double>& out) const;
  Eigen::VectorXd weights_at(const Eigen::VectorXd& x,
                             std::vector<double>& vals) const;

  FunctionFamily family_;
  MinMode mode_;
  double epsilon_;
  double tie_rel_;
  std::optional<SmoothPlus> smoother_;
  FamilyConstants constants_;
};

// Eigenvalue check of the composite Hessian at the given points:
// lambda_max <= C and lambda_min >= -(C + 2 n(n-1) L^2 ||g''||), each with
// the caller's slack.
struct HessianBoundReport {
  double max_eigenvalue = 0.0;       // largest lambda_max seen
  double min_eigenvalue = 0.0;       // smallest lambda_min seen
  double upper_bound = 0.0;          // C
  double lower_bound = 0.0;          // -(C + 2 n(n-1) L^2 ||g''||)
  bool ok = false;
};

HessianBoundReport hessian_bound_check(
    const SemiconcaveApprox& approx,
    const std::vector<Eigen::VectorXd>& points, double slack = 1e-8);

}  // namespace scmin
