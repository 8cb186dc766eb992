#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "scmin/format.hpp"
#include "scmin/semiconcave.hpp"
#include "scmin/testbed.hpp"

namespace scmin {

// Uniform N x N tensor grid on [-1,1]^2 with the exact solution, its
// reference gradient, and one Omega_delta membership mask per requested
// delta precomputed.  Point (i, j) sits at (axis[i], axis[j]) and flat
// index i*N + j; reductions always run in flat-index order so reports are
// bit-identical regardless of worker count.
struct EvaluationGrid {
  int n = 0;
  std::vector<double> axis;
  std::vector<double> exact_value;            // n*n
  std::vector<double> ref_grad;               // n*n*2, (gx, gy) pairs
  std::vector<double> deltas;
  std::vector<std::vector<std::uint8_t>> masks;  // one per delta
  std::vector<double> fractions;                 // |mask| / n^2
  double tie_tolerance_rel = 0.0;

  int index(int i, int j) const { return i * n + j; }
  const std::vector<std::uint8_t>& mask_for(double delta) const;
  double fraction_for(double delta) const;
};

// delta = 0 means the full grid.  Masks use the gap dichotomy: a point
// belongs to Omega_delta iff every member gap is <= tie_tolerance_rel
// * (1 + |v(x)|) or >= delta.
EvaluationGrid build_grid(int n, const ExactSolution& exact,
                          const std::vector<double>& deltas,
                          double tie_tolerance_rel = 1e-12, int workers = 1);

struct MetricsReport {
  std::string method;
  int degree = 0;
  double epsilon = 0.0;
  double delta = 0.0;
  double d_c = 0.0;     // max |v_d - u|            over X cap Omega_delta
  double d_w1 = 0.0;    // mean |grad v_d - grad u|
  double d_winf = 0.0;  // max  |grad v_d - grad u|
  double d_h1 = 0.0;    // mean |H(grad u, u)|
  double d_hinf = 0.0;  // max  |H(grad u, u)|
  double omega_fraction = 0.0;
  double runtime_ms = 0.0;
};

using Hamiltonian = std::function<double(const Eigen::VectorXd&, double)>;

// Sup/mean discrepancies of u against the cached exact solution over the
// masked points.  dc_normalized divides the sup value error by the mask
// size (a legacy normalization kept behind the flag).  Throws
// std::runtime_error if the mask is empty.
MetricsReport compute_metrics(const SemiconcaveApprox& u,
                              const EvaluationGrid& grid, double delta,
                              const Hamiltonian& H, const ExactSolution& ref,
                              bool dc_normalized = false, int workers = 1);

// Same metrics for several deltas from a single sweep over the full grid;
// each report carries the shared sweep time.
std::vector<MetricsReport> compute_metrics_batch(
    const SemiconcaveApprox& u, const EvaluationGrid& grid,
    const std::vector<double>& deltas, const Hamiltonian& H,
    const ExactSolution& ref, bool dc_normalized = false, int workers = 1);

// K = |Omega| * max_i 1/(hi_i - lo_i); equals 2 on [-1,1]^2.
double box_constant(const Box& box);

// Verifies the coarea-type gradient estimate for a Lipschitz difference
// function w on the box:
//   ||grad w||_{L^p} <= (2 K d^2 + d^{p/2} |Omega|)^{1/p}
//       * ( ||w||_C^{1/p}  ||grad w||_inf^{(p-1)/p}
//         + ||w||_C^{1/(1+p)} ||grad w||_inf^{p/(1+p)} ).
// The left side is a trapezoid-weighted discrete L^p norm; the sup norms
// are taken over the same probe grid.
struct CoareaReport {
  double p = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  bool ok = false;
};

CoareaReport coarea_check(
    const std::function<double(const Eigen::VectorXd&)>& value,
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& grad,
    double p, const Box& box, int grid_per_axis = 201,
    double slack = 1e-6);

// Several exponents from one probe sweep.
std::vector<CoareaReport> coarea_check_multi(
    const std::function<double(const Eigen::VectorXd&)>& value,
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& grad,
    const std::vector<double>& ps, const Box& box, int grid_per_axis = 201,
    double slack = 1e-6);

// Global error bounds for the smoothed min over an approximating family
// phi_{i,m} against the exact family:
//   eq1:  sup |v_n - v_{n,m,eps}| <= max_i sup |phi_i - phi_{i,m}| + (n-1) eps
//   eq2:  ||grad v_{n,m,eps} - grad v_n||_{L^p}
//           <= (2 K d^2 + d^{p/2} |Omega|)^{1/p}
//              * ( E^{1/p} (L_m + L)^{(p-1)/p} + E^{1/(1+p)} (L_m + L)^{p/(1+p)} ),
// with E = max_i sup |phi_i - phi_{i,m}| + (n-1) eps.
struct GlobalBoundReport {
  double p = 0.0;
  double eq1_lhs = 0.0, eq1_rhs = 0.0;
  double eq2_lhs = 0.0, eq2_rhs = 0.0;
  bool ok = false;
};

GlobalBoundReport global_error_bound_check(const ExactSolution& exact,
                                           const FunctionFamily& approx_family,
                                           const SmoothPlus& g, double p,
                                           int grid_per_axis = 201,
                                           double slack = 1e-6);

// Localized gradient bound on Omega_delta, in the delta/2 form that the
// recursion actually yields: for eps < delta / (2(n-1)),
//   sup_{Omega_delta} |grad v_{n,m,eps} - grad v_n|
//     <= 2 L ( g'(0) + 1 - g'(delta/2)^{n-1} )
//        + 2 n(n-1) L ||g''|| max_i sup |phi_i - phi_{i,m}|
//        + max_i sup |grad phi_i - grad phi_{i,m}|.
struct LocalizedBoundReport {
  double delta = 0.0;
  double epsilon = 0.0;
  bool epsilon_admissible = false;  // eps < delta / (2(n-1))
  double lhs = 0.0;                 // measured sup over the masked grid
  double rhs = 0.0;
  bool ok = false;
};

LocalizedBoundReport localized_bound_check(const ExactSolution& exact,
                                           const FunctionFamily& approx_family,
                                           const SmoothPlus& g, double delta,
                                           const EvaluationGrid& grid,
                                           double slack = 1e-6,
                                           int workers = 1);

// results.csv schema, one row per report.
void write_results_csv(const std::vector<MetricsReport>& rows,
                       std::ostream& os);

}  // namespace scmin
