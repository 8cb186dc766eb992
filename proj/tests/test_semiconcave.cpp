#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "scmin/semiconcave.hpp"
#include "scmin/testbed.hpp"

using namespace scmin;

TEST_CASE("mode names match the csv vocabulary") {
  CHECK(std::string(to_string(MinMode::Exact)) == "Exact");
  CHECK(std::string(to_string(MinMode::Moreau)) == "MoreauRegMin");
  CHECK(std::string(to_string(MinMode::Algebraic)) == "AlgebraicRegMin");
  CHECK(std::string(to_string(MinMode::LogSumExp)) == "LSE");
}

TEST_CASE("family constants land on the closed-form extrema") {
  // |grad phi| = r e^{-r^2/2} peaks at r = 1 (value e^{-1/2}) and the
  // Hessian operator norm peaks at each center (value 1); the default grid
  // contains both extremizers exactly.
  const FamilyConstants fc = estimate_constants(exp_distance_family(2));
  CHECK(fc.L == doctest::Approx(std::exp(-0.5)).epsilon(1e-12));
  CHECK(fc.C == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(estimate_constants(FunctionFamily{}), std::invalid_argument);
  CHECK_THROWS_AS(estimate_constants(exp_distance_family(2), 1),
                  std::invalid_argument);
}

TEST_CASE("constructor validates the configuration") {
  const FunctionFamily fam = exp_distance_family(2);
  CHECK_THROWS_AS(SemiconcaveApprox(fam, MinMode::Moreau, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(SemiconcaveApprox(fam, MinMode::LogSumExp, -1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(SemiconcaveApprox(FunctionFamily{}, MinMode::Exact, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(SemiconcaveApprox(fam, MinMode::Exact, 0.0, 201, -1.0),
                  std::invalid_argument);

  const SemiconcaveApprox ok(fam, MinMode::Exact, 0.0, 2);
  CHECK(ok.mode() == MinMode::Exact);
  CHECK(ok.smoother() == nullptr);
  const SemiconcaveApprox sm(fam, MinMode::Moreau, 1e-2, 2);
  REQUIRE(sm.smoother() != nullptr);
  CHECK(sm.smoother()->epsilon == 1e-2);
  CHECK(sm.epsilon() == 1e-2);
}

TEST_CASE("reference point: values, weights, gradients per mode") {
  const FunctionFamily fam = exp_distance_family(2);
  const Eigen::Vector2d q(-0.5, -0.5);
  const double v = std::exp(-1.25);

  const SemiconcaveApprox exact(fam, MinMode::Exact, 0.0, 2);
  CHECK(exact.value(q) == v);
  Eigen::VectorXd g = exact.gradient(q);
  CHECK(g[0] == doctest::Approx(0.5 * v).epsilon(1e-13));
  CHECK(g[1] == doctest::Approx(1.5 * v).epsilon(1e-13));
  CHECK(exact.gradient_active_index(q) == 1);
  CHECK_THROWS_AS(exact.hessian(q), std::logic_error);

  // The active gap is 0 and the inactive gap is about 0.49, far above eps,
  // so the Moreau weights are exactly the limit indicator.
  const SemiconcaveApprox mor(fam, MinMode::Moreau, 1e-3, 2);
  g = mor.gradient(q);
  CHECK(g[0] == doctest::Approx(0.5 * v).epsilon(1e-13));
  CHECK(g[1] == doctest::Approx(1.5 * v).epsilon(1e-13));
  const auto [mv, mg] = mor.value_and_gradient(q);
  CHECK(mv == mor.value(q));
  CHECK((mg - g).norm() == 0.0);

  // An exact two-way tie makes the log-sum-exp weights exactly (1/2, 1/2)
  // on the active pair; the far pair underflows.
  const SemiconcaveApprox lse(fam, MinMode::LogSumExp, 1e-3, 2);
  g = lse.gradient(q);
  CHECK(g[0] == doctest::Approx(1.0 * v).epsilon(1e-12));
  CHECK(g[1] == doctest::Approx(1.0 * v).epsilon(1e-12));
  CHECK_THROWS_AS(lse.hessian(q), std::logic_error);

  CHECK_THROWS_AS(exact.value(Eigen::Vector2d(1.5, 0.0)), std::domain_error);
}

TEST_CASE("active sets and level-region membership at the reference point") {
  const FunctionFamily fam = exp_distance_family(2);
  const SemiconcaveApprox u(fam, MinMode::Exact, 0.0, 2);
  const Eigen::Vector2d q(-0.5, -0.5);

  const ActiveIndexInfo info = u.active_set(q, 1e-12);
  CHECK(info.active == std::vector<int>{0, 1});
  CHECK(info.largest_active == 1);

  // Inactive gap e^{-1/4} - e^{-5/4} is about 0.49: inside the region for
  // delta below it, outside once delta overtakes the gap.
  CHECK(u.omega_delta_member(q, 0.0));
  CHECK(u.omega_delta_member(q, 0.1));
  CHECK_FALSE(u.omega_delta_member(q, 0.6));
  CHECK_THROWS_AS(u.omega_delta_member(q, -0.1), std::invalid_argument);

  // At the origin every member is active, so membership holds at any delta.
  CHECK(u.omega_delta_member(Eigen::Vector2d(0.0, 0.0), 100.0));
}

TEST_CASE("smoothed values stay within the uniform band of the exact min") {
  const FunctionFamily fam = exp_distance_family(2);
  const SemiconcaveApprox exact(fam, MinMode::Exact, 0.0, 2);
  const double eps = 1e-2;
  const SemiconcaveApprox mor(fam, MinMode::Moreau, eps, 2);
  const SemiconcaveApprox alg(fam, MinMode::Algebraic, eps, 2);
  const SemiconcaveApprox lse(fam, MinMode::LogSumExp, eps, 2);
  const double n = fam.size();

  std::mt19937 rng(23);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int t = 0; t < 2000; ++t) {
    const Eigen::Vector2d x(u(rng), u(rng));
    const double ve = exact.value(x);
    CHECK(std::abs(mor.value(x) - ve) <= (n - 1) * eps + 1e-12);
    CHECK(mor.value(x) >= ve - 1e-15);
    CHECK(std::abs(alg.value(x) - ve) <= (n - 1) * eps + 1e-12);
    CHECK(lse.value(x) >= ve - 1e-12);
    CHECK(lse.value(x) <= ve + eps * std::log(n) + 1e-12);
  }
}

TEST_CASE("composite hessian matches finite differences of the gradient") {
  // The algebraic smoother is C^infinity, so differences are safe anywhere.
  const FunctionFamily fam = exp_distance_family(2);
  const SemiconcaveApprox u(fam, MinMode::Algebraic, 1e-1, 2);
  std::mt19937 rng(29);
  std::uniform_real_distribution<double> dist(-0.9, 0.9);
  const double h = 1e-5;
  for (int t = 0; t < 50; ++t) {
    const Eigen::Vector2d x(dist(rng), dist(rng));
    const Eigen::MatrixXd H = u.hessian(x);
    CHECK(std::abs(H(0, 1) - H(1, 0)) <= 1e-10);
    for (int k = 0; k < 2; ++k) {
      Eigen::Vector2d xp = x, xm = x;
      xp[k] += h;
      xm[k] -= h;
      const Eigen::VectorXd fd = (u.gradient(xp) - u.gradient(xm)) / (2.0 * h);
      CHECK((H.col(k) - fd).cwiseAbs().maxCoeff() <= 1e-4);
    }
  }
}

TEST_CASE("hessian eigenvalue bounds hold on random samples") {
  const FunctionFamily fam = exp_distance_family(2);
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<Eigen::VectorXd> pts;
  for (int t = 0; t < 500; ++t) {
    pts.push_back(Eigen::Vector2d(dist(rng), dist(rng)));
  }
  for (MinMode mode : {MinMode::Moreau, MinMode::Algebraic}) {
    for (double eps : {1e-2, 1e-1}) {
      const SemiconcaveApprox u(fam, mode, eps);
      const HessianBoundReport r = hessian_bound_check(u, pts);
      CHECK(r.ok);
      CHECK(r.max_eigenvalue <= r.upper_bound + 1e-8);
      CHECK(r.min_eigenvalue >= r.lower_bound - 1e-8);
      CHECK(r.upper_bound == doctest::Approx(1.0).epsilon(1e-12));
    }
  }

  const SemiconcaveApprox lse(fam, MinMode::LogSumExp, 1e-2, 2);
  CHECK_THROWS_AS(hessian_bound_check(lse, pts), std::logic_error);
  const SemiconcaveApprox mor(fam, MinMode::Moreau, 1e-2, 2);
  CHECK_THROWS_AS(hessian_bound_check(mor, {}), std::invalid_argument);
}
