#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "scmin/softmin.hpp"

using namespace scmin;

namespace {

std::vector<double> recursion_gaps(const std::vector<double>& a,
                                   const SmoothPlus& g) {
  std::vector<double> gaps;
  double psi = a[0];
  for (std::size_t i = 1; i < a.size(); ++i) {
    const double gap = a[i] - psi;
    gaps.push_back(gap);
    psi = a[i] - g.value(gap);
  }
  return gaps;
}

bool clear_of_kinks(const std::vector<double>& a, const SmoothPlus& g,
                    double margin) {
  for (double gap : recursion_gaps(a, g)) {
    if (std::abs(gap) < margin || std::abs(gap - g.epsilon) < margin) {
      return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("exact min evaluates prefixes and rejects bad lengths") {
  const std::vector<double> a = {3.0, 1.0, 2.0};
  CHECK(psi_exact(a, 1) == 3.0);
  CHECK(psi_exact(a, 2) == 1.0);
  CHECK(psi_exact(a, 3) == 1.0);
  CHECK(psi_exact(a) == 1.0);
  CHECK_THROWS_AS(psi_exact(a, 0), std::invalid_argument);
  CHECK_THROWS_AS(psi_exact(a, 4), std::invalid_argument);
  CHECK_THROWS_AS(psi_exact(std::vector<double>{}), std::invalid_argument);
  CHECK_THROWS_AS(
      psi_exact(std::vector<double>{1.0, std::numeric_limits<double>::quiet_NaN()}),
      std::invalid_argument);
}

TEST_CASE("exact min is bit-identical to the running min and monotone in n") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int t = 0; t < 500; ++t) {
    std::vector<double> a(1 + rng() % 8);
    for (double& v : a) v = u(rng);
    double prev = std::numeric_limits<double>::infinity();
    for (std::size_t n = 1; n <= a.size(); ++n) {
      const double psi = psi_exact(a, n);
      CHECK(psi == *std::min_element(a.begin(), a.begin() + n));
      CHECK(psi <= prev);
      prev = psi;
    }
  }
}

TEST_CASE("two-point smoothed min hits the closed form on each branch") {
  const SmoothPlus g = moreau_plus(0.1);

  // Gap past the quadratic window: g(1) = 0.95, g'(1) = 1.
  const std::vector<double> up = {0.0, 1.0};
  SoftMinEval e = psi_smooth(up, g, true);
  CHECK(e.value == doctest::Approx(0.05).epsilon(1e-15));
  CHECK(e.weights[0] == 1.0);
  CHECK(e.weights[1] == 0.0);
  CHECK(e.hessian->norm() == 0.0);

  // Negative gap: the new entry is the min and the smoother is flat.
  const std::vector<double> down = {1.0, 0.0};
  e = psi_smooth(down, g, true);
  CHECK(e.value == 0.0);
  CHECK(e.weights[0] == 0.0);
  CHECK(e.weights[1] == 1.0);
  CHECK(e.hessian->norm() == 0.0);

  // Gap inside the quadratic window: weights split g' / 1 - g'.
  const std::vector<double> mid = {0.0, 0.05};
  e = psi_smooth(mid, g, true);
  CHECK(e.value == doctest::Approx(0.0375).epsilon(1e-15));
  CHECK(e.weights[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(e.weights[1] == doctest::Approx(0.5).epsilon(1e-15));
  // H = -g''(0.05) (e_2 - e_1)(e_2 - e_1)^T with g'' = 10.
  CHECK((*e.hessian)(0, 0) == doctest::Approx(-10.0).epsilon(1e-15));
  CHECK((*e.hessian)(0, 1) == doctest::Approx(10.0).epsilon(1e-15));
  CHECK((*e.hessian)(1, 1) == doctest::Approx(-10.0).epsilon(1e-15));
}

TEST_CASE("tied pair concentrates weight on the later index") {
  // gap = 0 sits on the quadratic branch: g'(0) = 0, g''(0) = 1/eps = 2.
  const std::vector<double> tie = {0.0, 0.0};
  const SoftMinEval e = psi_smooth(tie, moreau_plus(0.5), true);
  CHECK(e.value == 0.0);
  CHECK(e.weights[0] == 0.0);
  CHECK(e.weights[1] == 1.0);
  CHECK((*e.hessian)(0, 0) == -2.0);
  CHECK((*e.hessian)(0, 1) == 2.0);
  CHECK((*e.hessian)(1, 0) == 2.0);
  CHECK((*e.hessian)(1, 1) == -2.0);
}

TEST_CASE("three-point recursion carries weights through a flat step") {
  const std::vector<double> a = {0.3, 0.0, 1.0};
  const SoftMinEval e = psi_smooth(a, moreau_plus(0.1), false);
  CHECK(e.value == doctest::Approx(0.05).epsilon(1e-15));
  CHECK(e.weights[0] == 0.0);
  CHECK(e.weights[1] == 1.0);
  CHECK(e.weights[2] == 0.0);
  CHECK_FALSE(e.hessian.has_value());
}

TEST_CASE("smoothed min rejects bad input") {
  const SmoothPlus g = moreau_plus(0.1);
  CHECK_THROWS_AS(psi_smooth(std::vector<double>{}, g), std::invalid_argument);
  CHECK_THROWS_AS(
      psi_smooth(std::vector<double>{std::numeric_limits<double>::infinity()}, g),
      std::invalid_argument);
  CHECK_THROWS_AS(psi_smooth(std::vector<double>{1.0}, SmoothPlus{}),
                  std::invalid_argument);
}

TEST_CASE("random corpus: simplex weights, uniform bound, product form") {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  std::vector<SmoothPlus> smoothers;
  for (double eps : {1e-3, 1e-2, 1e-1}) {
    smoothers.push_back(moreau_plus(eps));
    smoothers.push_back(algebraic_plus(eps));
  }
  for (int t = 0; t < 2000; ++t) {
    std::vector<double> a(1 + rng() % 8);
    for (double& v : a) v = u(rng);
    const double exact = psi_exact(a);
    const int n = static_cast<int>(a.size());
    for (const SmoothPlus& g : smoothers) {
      const SoftMinEval e = psi_smooth(a, g, false);
      CHECK(e.weights.minCoeff() >= -1e-12);
      CHECK(std::abs(e.weights.sum() - 1.0) <= 1e-12);
      CHECK(std::abs(e.value - exact) <= (n - 1) * g.epsilon + 1e-12);
      if (g.kind == PlusKind::Moreau) CHECK(e.value >= exact - 1e-15);
      const Eigen::VectorXd p = weights_product_form(a, g);
      CHECK((p - e.weights).cwiseAbs().maxCoeff() <= 1e-12);
    }
  }
}

TEST_CASE("weights are the gradient: central differences confirm") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  const double h = 1e-6;
  for (const SmoothPlus& g : {moreau_plus(1e-2), algebraic_plus(1e-2)}) {
    int accepted = 0;
    for (int t = 0; t < 2000 && accepted < 100; ++t) {
      std::vector<double> a(2 + rng() % 5);
      for (double& v : a) v = u(rng);
      if (!clear_of_kinks(a, g, 1e-3)) continue;
      ++accepted;
      const SoftMinEval e = psi_smooth(a, g, false);
      for (std::size_t j = 0; j < a.size(); ++j) {
        std::vector<double> ap = a, am = a;
        ap[j] += h;
        am[j] -= h;
        const double fd =
            (psi_smooth(ap, g, false).value - psi_smooth(am, g, false).value) /
            (2.0 * h);
        CHECK(std::abs(e.weights[static_cast<int>(j)] - fd) <= 1e-5);
      }
    }
    CHECK(accepted >= 100);
  }
}

TEST_CASE("hessian stays negative semidefinite with bounded norm") {
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (const SmoothPlus& g : {moreau_plus(1e-2), algebraic_plus(1e-1)}) {
    for (int t = 0; t < 200; ++t) {
      std::vector<double> a(2 + rng() % 7);
      for (double& v : a) v = u(rng);
      const SoftMinEval e = psi_smooth(a, g, true);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(*e.hessian);
      const int n = static_cast<int>(a.size());
      CHECK(es.eigenvalues().maxCoeff() <= 1e-10);
      const double opnorm = es.eigenvalues().cwiseAbs().maxCoeff();
      CHECK(opnorm <= 2.0 * (n - 1) * g.sup_second_deriv + 1e-9);
    }
  }
}

TEST_CASE("active set and limit weights pick the largest active index") {
  const std::vector<double> a = {3.0, 1.0, 2.0};
  ActiveIndexInfo info = active_info(a, 0.0);
  CHECK(info.active == std::vector<int>{1});
  CHECK(info.largest_active == 1);
  Eigen::VectorXd w = limit_weights(a, 0.0);
  CHECK(w[0] == 0.0);
  CHECK(w[1] == 1.0);
  CHECK(w[2] == 0.0);

  const std::vector<double> tied = {2.0, 1.0, 1.0};
  info = active_info(tied, 0.0);
  CHECK(info.active == std::vector<int>{1, 2});
  CHECK(info.largest_active == 2);
  w = limit_weights(tied, 0.0);
  CHECK(w[2] == 1.0);

  CHECK_THROWS_AS(active_info(a, -1e-9), std::invalid_argument);
}

TEST_CASE("moreau weights collapse onto the limit indicator as eps shrinks") {
  const std::vector<double> a = {0.5, 0.2, 0.9, 0.4};
  const SoftMinEval e = psi_smooth(a, moreau_plus(1e-6), false);
  const Eigen::VectorXd w = limit_weights(a, 0.0);
  CHECK((e.weights - w).cwiseAbs().maxCoeff() <= 1e-8);

  // An exact tie already sits in the flat part of the quadratic branch, so
  // the weight lands on the later index at every eps.
  const std::vector<double> tie = {0.2, 0.2};
  const SoftMinEval et = psi_smooth(tie, moreau_plus(0.3), false);
  CHECK(et.weights[0] == 0.0);
  CHECK(et.weights[1] == 1.0);
}

TEST_CASE("log-sum-exp value, weights, and sandwich") {
  const std::vector<double> a = {0.0, 1.0};
  const SoftMinEval e = lse_min(a, 0.1);
  CHECK(e.value == doctest::Approx(0.06931017816607285).epsilon(1e-15));
  CHECK_FALSE(e.hessian.has_value());

  const std::vector<double> tie = {0.0, 0.0};
  const SoftMinEval et = lse_min(tie, 0.1);
  CHECK(et.weights[0] == 0.5);
  CHECK(et.weights[1] == 0.5);
  CHECK(et.value == 0.0 - 0.1 * std::log(2.0 / 2.0));

  std::mt19937 rng(17);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int t = 0; t < 2000; ++t) {
    std::vector<double> v(1 + rng() % 8);
    for (double& x : v) x = u(rng);
    const double lo = psi_exact(v);
    const double n = static_cast<double>(v.size());
    for (double eps : {1e-3, 1e-2, 1e-1}) {
      const SoftMinEval s = lse_min(v, eps);
      CHECK(s.value >= lo - 1e-12);
      CHECK(s.value <= lo + eps * std::log(n) + 1e-12);
      CHECK(s.weights.minCoeff() >= 0.0);
      CHECK(std::abs(s.weights.sum() - 1.0) <= 1e-12);
    }
  }

  // eps -> 0: the far entry underflows and only the eps log n shift remains.
  CHECK(lse_min(a, 1e-12).value ==
        doctest::Approx(1e-12 * std::log(2.0)).epsilon(1e-12));
  CHECK_THROWS_AS(lse_min(a, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(lse_min(a, -1.0), std::invalid_argument);
}
