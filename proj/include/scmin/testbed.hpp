#pragma once

#include <Eigen/Core>
#include <array>
#include <vector>

#include "scmin/function.hpp"
#include "scmin/softmin.hpp"

namespace scmin {

// Family of 2d Gaussian bumps phi_i(x) = exp(-|x - c_i|^2 / 2) on [-1,1]^d
// with centers at the signed unit vectors: c_i = e_i for i < d and
// c_{d+i} = -e_i.  Every member solves the eikonal-type equation
// |grad phi|^2 + 2 log(phi) phi^2 = 0, so the pointwise min is a natural
// Hamilton-Jacobi test problem with known kink locations (the diagonals).
FunctionFamily exp_distance_family(int d);

// H(p, a) = |p|^2 + 2 log|a| a^2, extended by |p|^2 at a = 0.  Zero when
// (p, a) = (grad phi_i(x), phi_i(x)) for any exp-distance member.
double hamiltonian_residual(const Eigen::VectorXd& p, double a);

// Closed-form evaluator for v_d = min_i phi_i and its reference gradient
// grad phi_ihat, where ihat is the largest index active within a relative
// tie tolerance tol * (1 + |v_d(x)|).  Kept free of std::function layers so
// dense grids stay cheap.
class ExactSolution {
 public:
  ExactSolution(int d, double tie_tolerance_rel);

  int dim() const { return d_; }
  int members() const { return 2 * d_; }
  double tie_tolerance_rel() const { return tie_rel_; }

  double value(const Eigen::VectorXd& x) const;
  // Fills out[i] = phi_i(x); out must have size members().
  void member_values(const Eigen::VectorXd& x, double* out) const;
  Eigen::VectorXd ref_grad(const Eigen::VectorXd& x) const;
  void ref_grad(const Eigen::VectorXd& x, Eigen::VectorXd& out) const;
  ActiveIndexInfo active(const Eigen::VectorXd& x) const;

  const FunctionFamily& family() const { return family_; }

 private:
  int d_;
  double tie_rel_;
  Eigen::MatrixXd centers_;  // 2d x d
  FunctionFamily family_;
};

ExactSolution exact_solution(int d, double tie_tolerance_rel = 1e-12);

// One-dimensional family on [-2,2] whose pointwise min has a genuinely
// two-valued reachable gradient set at the origin:
//   phi_1(x) = -x,  phi_2(x) = exp(x) - 1,  phi_3(x) = -x^3.
// The min is exp(x)-1 on x <= 0, -x on (0,1], -x^3 on (1,2].  With
// modified = true, phi_3 is replaced by phi_3 + bump(2x), which lifts it
// clear of the min near the origin without changing the min anywhere.
FunctionFamily counterexample_family(bool modified);

// exp(-1/(1-x^2)) on (-1,1), 0 outside; returns 0 once |x| >= 1 - 1e-8 to
// keep the exponent finite.
double bump(double x);
double bump_deriv(double x);
double bump_second_deriv(double x);

// Both one-sided slopes of the counterexample min at x = 0.
constexpr std::array<double, 2> kReachableGradientsAtZero = {-1.0, 1.0};

}  // namespace scmin
