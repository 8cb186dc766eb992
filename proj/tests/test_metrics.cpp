#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "scmin/format.hpp"
#include "scmin/metrics.hpp"

using namespace scmin;

namespace {

Hamiltonian residual_fn() {
  return [](const Eigen::VectorXd& p, double a) {
    return hamiltonian_residual(p, a);
  };
}

}  // namespace

TEST_CASE("shortest decimal form round-trips every double") {
  CHECK(format_double(0.0) == "0");
  CHECK(format_double(-0.0) == "0");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(0.01) == "0.01");
  CHECK(format_double(1e-14) == "1e-14");
  CHECK(format_double(-2.5) == "-2.5");

  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int t = 0; t < 2000; ++t) {
    double v = u(rng);
    if (t % 3 == 0) v = std::exp(u(rng) * 1e-4);
    const std::string s = format_double(v);
    CHECK(std::strtod(s.c_str(), nullptr) == v);
  }
}

TEST_CASE("tiny grid: only the all-tied origin survives a huge delta") {
  const ExactSolution ex = exact_solution(2);
  const EvaluationGrid grid = build_grid(3, ex, {0.0, 10.0});
  CHECK(grid.n == 3);
  CHECK(grid.axis == std::vector<double>{-1.0, 0.0, 1.0});
  CHECK(grid.fraction_for(0.0) == 1.0);
  CHECK(grid.fraction_for(10.0) == doctest::Approx(1.0 / 9.0).epsilon(1e-15));
  const auto& mask = grid.mask_for(10.0);
  CHECK(mask[grid.index(1, 1)] == 1);  // the origin
  CHECK(mask[grid.index(0, 0)] == 0);

  CHECK_THROWS_AS(grid.mask_for(0.5), std::out_of_range);
  CHECK_THROWS_AS(build_grid(1, ex, {0.0}), std::invalid_argument);
  CHECK_THROWS_AS(build_grid(3, ex, {-1.0}), std::invalid_argument);
  CHECK_THROWS_AS(build_grid(3, ex, {0.0}, -1e-9), std::invalid_argument);
}

TEST_CASE("level-region fractions shrink with delta and match frozen values") {
  const ExactSolution ex = exact_solution(2);
  const std::vector<double> deltas = {0.0, 1e-4, 1e-3, 1e-2, 1e-1};
  const EvaluationGrid grid = build_grid(101, ex, deltas);
  double prev = 2.0;
  for (double d : deltas) {
    const double f = grid.fraction_for(d);
    CHECK(f <= prev + 1e-15);
    prev = f;
  }
  // Regression values measured on the 101^2 grid.
  CHECK(grid.fraction_for(1e-4) == 1.0);
  CHECK(grid.fraction_for(1e-2) ==
        doctest::Approx(0.935692579158906).epsilon(1e-12));
  CHECK(grid.fraction_for(1e-1) ==
        doctest::Approx(0.4326046466032742).epsilon(1e-12));

  // Nested masks, pointwise.
  const auto& loose = grid.mask_for(1e-2);
  const auto& tight = grid.mask_for(1e-1);
  for (std::size_t k = 0; k < loose.size(); ++k) {
    if (tight[k]) CHECK(loose[k]);
  }
}

TEST_CASE("self-comparison scores zero and the metric ordering holds") {
  const ExactSolution ex = exact_solution(2);
  const EvaluationGrid grid = build_grid(51, ex, {0.0, 1e-2});
  const SemiconcaveApprox u(ex.family(), MinMode::Exact, 0.0, 2);
  const MetricsReport r =
      compute_metrics(u, grid, 0.0, residual_fn(), ex);
  CHECK(r.method == "Exact");
  CHECK(r.d_c == 0.0);
  CHECK(r.d_w1 == 0.0);
  CHECK(r.d_winf == 0.0);
  // The members solve the equation analytically; only roundoff remains.
  CHECK(r.d_h1 <= 1e-14);
  CHECK(r.d_hinf <= 1e-14);
  CHECK(r.d_w1 <= r.d_winf);
  CHECK(r.d_h1 <= r.d_hinf);
  CHECK(r.omega_fraction == 1.0);
}

TEST_CASE("tight smoothing on the exact family nails the gradient metric") {
  const ExactSolution ex = exact_solution(2);
  const EvaluationGrid grid = build_grid(101, ex, {1e-3, 1e-2});

  // eps = 1e-4 < delta/(2(n-1)): on the masked points the weights are the
  // limit indicator, so the gradient error collapses.
  const SemiconcaveApprox mor(ex.family(), MinMode::Moreau, 1e-4, 2);
  const MetricsReport rm =
      compute_metrics(mor, grid, 1e-3, residual_fn(), ex);
  CHECK(rm.d_winf <= 1e-10);

  // Log-sum-exp keeps every member in play; ties cost a fixed gradient gap.
  const SemiconcaveApprox lse(ex.family(), MinMode::LogSumExp, 1e-2, 2);
  const MetricsReport rl =
      compute_metrics(lse, grid, 1e-2, residual_fn(), ex);
  CHECK(rl.d_winf >= 1e-1);
  CHECK(rl.d_w1 <= rl.d_winf);
  CHECK(rl.d_h1 <= rl.d_hinf);
}

TEST_CASE("empty level region is reported, not silently scored") {
  const ExactSolution ex = exact_solution(2);
  const EvaluationGrid grid = build_grid(2, ex, {10.0});
  CHECK(grid.fraction_for(10.0) == 0.0);
  const SemiconcaveApprox u(ex.family(), MinMode::Exact, 0.0, 2);
  CHECK_THROWS_AS(compute_metrics(u, grid, 10.0, residual_fn(), ex),
                  std::runtime_error);
}

TEST_CASE("worker count and batching never change the numbers") {
  const ExactSolution ex = exact_solution(2);
  const std::vector<double> deltas = {0.0, 1e-2};
  const EvaluationGrid g1 = build_grid(41, ex, deltas, 1e-12, 1);
  const EvaluationGrid g3 = build_grid(41, ex, deltas, 1e-12, 3);
  CHECK(g1.exact_value == g3.exact_value);
  CHECK(g1.ref_grad == g3.ref_grad);
  CHECK(g1.masks == g3.masks);

  const SemiconcaveApprox u(ex.family(), MinMode::Moreau, 1e-2, 2);
  const MetricsReport a =
      compute_metrics(u, g1, 1e-2, residual_fn(), ex, false, 1);
  const MetricsReport b =
      compute_metrics(u, g1, 1e-2, residual_fn(), ex, false, 3);
  CHECK(a.d_c == b.d_c);
  CHECK(a.d_w1 == b.d_w1);
  CHECK(a.d_winf == b.d_winf);
  CHECK(a.d_h1 == b.d_h1);
  CHECK(a.d_hinf == b.d_hinf);

  const std::vector<MetricsReport> batch =
      compute_metrics_batch(u, g1, deltas, residual_fn(), ex, false, 2);
  REQUIRE(batch.size() == 2);
  const MetricsReport d0 =
      compute_metrics(u, g1, 0.0, residual_fn(), ex);
  CHECK(batch[0].d_c == d0.d_c);
  CHECK(batch[0].d_winf == d0.d_winf);
  CHECK(batch[1].d_c == a.d_c);
  CHECK(batch[1].d_hinf == a.d_hinf);

  // The as-written normalization divides the sup value error by the mask
  // size; both variants must agree up to that single factor.
  const MetricsReport norm =
      compute_metrics(u, g1, 1e-2, residual_fn(), ex, true);
  const double count = g1.fraction_for(1e-2) * 41.0 * 41.0;
  CHECK(norm.d_c == doctest::Approx(a.d_c / count).epsilon(1e-12));
}

TEST_CASE("box constant and the coarea-type gradient estimate") {
  CHECK(box_constant(box2d(-1.0, 1.0)) == 2.0);
  CHECK(box_constant(box2d(0.0, 0.5)) == 0.5);

  const Box box = box2d(-1.0, 1.0);
  const auto zero_v = [](const Eigen::VectorXd&) { return 0.0; };
  const auto zero_g = [](const Eigen::VectorXd&) {
    return Eigen::VectorXd(Eigen::Vector2d(0.0, 0.0));
  };
  const CoareaReport z = coarea_check(zero_v, zero_g, 2.0, box, 21);
  CHECK(z.lhs == 0.0);
  CHECK(z.rhs == 0.0);
  CHECK(z.ok);

  // w = x_1: |grad w| = 1, so the lhs is |Omega|^{1/p} = 2 at p = 2 while
  // the rhs is (2K d^2 + d |Omega|)^{1/2} * 2.
  const auto lin_v = [](const Eigen::VectorXd& x) { return x[0]; };
  const auto lin_g = [](const Eigen::VectorXd&) {
    return Eigen::VectorXd(Eigen::Vector2d(1.0, 0.0));
  };
  const CoareaReport lin = coarea_check(lin_v, lin_g, 2.0, box, 41);
  CHECK(lin.lhs == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(lin.rhs == doctest::Approx(std::sqrt(24.0) * 2.0).epsilon(1e-12));
  CHECK(lin.ok);

  CHECK_THROWS_AS(coarea_check(lin_v, lin_g, 0.5, box), std::invalid_argument);
  CHECK_THROWS_AS(coarea_check(lin_v, lin_g, 1.0, box, 1),
                  std::invalid_argument);

  // One sweep for several exponents must equal the one-exponent calls.
  const std::vector<CoareaReport> multi =
      coarea_check_multi(lin_v, lin_g, {1.0, 2.0, 4.0}, box, 41);
  REQUIRE(multi.size() == 3);
  CHECK(multi[1].lhs == lin.lhs);
  CHECK(multi[1].rhs == lin.rhs);
  for (const CoareaReport& r : multi) CHECK(r.ok);
}

TEST_CASE("smoothing differences satisfy the gradient estimate") {
  const ExactSolution ex = exact_solution(2);
  const SemiconcaveApprox exact(ex.family(), MinMode::Exact, 0.0, 2);
  const SemiconcaveApprox mor(ex.family(), MinMode::Moreau, 1e-2, 2);
  const auto dv = [&](const Eigen::VectorXd& x) {
    return mor.value(x) - exact.value(x);
  };
  const auto dg = [&](const Eigen::VectorXd& x) {
    return Eigen::VectorXd(mor.gradient(x) - ex.ref_grad(x));
  };
  const CoareaReport r = coarea_check(dv, dg, 2.0, ex.family().domain, 201);
  CHECK(r.ok);
  CHECK(r.lhs <= r.rhs * (1.0 + 1e-6));
}

TEST_CASE("global value and gradient bounds on identical families") {
  const ExactSolution ex = exact_solution(2);
  const SmoothPlus g = moreau_plus(1e-3);
  const GlobalBoundReport r =
      global_error_bound_check(ex, ex.family(), g, 2.0, 101);
  CHECK(r.ok);
  CHECK(r.eq1_rhs == doctest::Approx(3e-3).epsilon(1e-15));
  CHECK(r.eq1_lhs <= 3e-3 + 1e-15);
  CHECK(r.eq2_lhs <= r.eq2_rhs * (1.0 + 1e-6));

  FunctionFamily short_family = ex.family();
  short_family.members.pop_back();
  CHECK_THROWS_AS(global_error_bound_check(ex, short_family, g, 2.0, 51),
                  std::invalid_argument);
  CHECK_THROWS_AS(global_error_bound_check(ex, ex.family(), g, 0.5, 51),
                  std::invalid_argument);
}

TEST_CASE("localized gradient bound and its admissibility window") {
  const ExactSolution ex = exact_solution(2);
  const EvaluationGrid grid = build_grid(101, ex, {1e-1, 1e-2});

  // eps well inside delta/(2(n-1)) = delta/6.
  const LocalizedBoundReport ok_r = localized_bound_check(
      ex, ex.family(), moreau_plus(1e-3), 1e-1, grid);
  CHECK(ok_r.epsilon_admissible);
  CHECK(ok_r.ok);
  CHECK(ok_r.lhs <= ok_r.rhs * (1.0 + 1e-6) + 1e-8);

  // eps too large for the window: flagged, not failed.
  const LocalizedBoundReport skip_r = localized_bound_check(
      ex, ex.family(), moreau_plus(1e-2), 1e-2, grid);
  CHECK_FALSE(skip_r.epsilon_admissible);
  CHECK(skip_r.ok);
}

TEST_CASE("results csv emits the exact schema") {
  MetricsReport r;
  r.method = "MoreauRegMin";
  r.degree = 4;
  r.epsilon = 0.01;
  r.delta = 0.001;
  r.d_c = 0.5;
  r.d_w1 = 0.25;
  r.d_winf = 0.75;
  r.d_h1 = 0.125;
  r.d_hinf = 0.375;
  r.omega_fraction = 0.9;
  r.runtime_ms = 1.5;
  std::ostringstream os;
  write_results_csv({r}, os);
  CHECK(os.str() ==
        "method,m,epsilon,delta,D_C,D_W1,D_Winf,D_H1,D_Hinf,omega_fraction,"
        "runtime_ms\n"
        "MoreauRegMin,4,0.01,0.001,0.5,0.25,0.75,0.125,0.375,0.9,1.5\n");
}
