#include "scmin/checks.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <memory>
#include <random>
#include <utility>

#include "scmin/chebyshev.hpp"
#include "scmin/format.hpp"
#include "scmin/metrics.hpp"
#include "scmin/semiconcave.hpp"
#include "scmin/softmin.hpp"
#include "scmin/testbed.hpp"

namespace scmin {

namespace {

CheckItem item(std::string name, double worst, double tolerance) {
  CheckItem it;
  it.invariant = std::move(name);
  it.worst = worst;
  it.tolerance = tolerance;
  it.pass = worst <= tolerance;
  return it;
}

void bump_worst(double& worst, double v) { worst = std::max(worst, v); }

std::vector<SmoothPlus> standard_smoothers() {
  std::vector<SmoothPlus> out;
  for (double eps : {1e-3, 1e-2, 1e-1}) {
    out.push_back(moreau_plus(eps));
    out.push_back(algebraic_plus(eps));
  }
  return out;
}

// Arguments fed to the smoother along the forward recursion.
std::vector<double> recursion_gaps(std::span<const double> a,
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

bool clear_of_breakpoints(std::span<const double> a, const SmoothPlus& g,
                          double margin) {
  for (double gap : recursion_gaps(a, g)) {
    if (std::abs(gap) < margin || std::abs(gap - g.epsilon) < margin) {
      return false;
    }
  }
  return true;
}

}  // namespace

bool CheckSuite::pass() const {
  return std::all_of(items.begin(), items.end(),
                     [](const CheckItem& it) { return it.pass; });
}

const CheckItem* CheckSuite::first_failure() const {
  for (const auto& it : items) {
    if (!it.pass) return &it;
  }
  return nullptr;
}

CheckSuite run_axiom_checks() {
  CheckSuite suite;
  suite.name = "axioms";
  for (double eps : {1e-4, 1e-3, 1e-2, 1e-1, 1.0}) {
    for (bool moreau : {true, false}) {
      const SmoothPlus g = moreau ? moreau_plus(eps) : algebraic_plus(eps);
      const PlusAxiomReport r = check_plus_axioms(g, 20001, -5.0, 5.0);
      const std::string tag =
          std::string(moreau ? "moreau" : "algebraic") + "(eps=" +
          format_double(eps) + ")";
      if (moreau) {
        suite.items.push_back(item("axioms/" + tag, r.worst(), 1e-12));
      } else {
        // The algebraic family undershoots zero by at most eps/2 on the
        // negative axis; every other axiom holds exactly.
        const double others =
            std::max({r.deriv_low, r.deriv_high, r.curvature, r.plus_distance,
                      r.upper, r.flat_left});
        suite.items.push_back(item("axioms/" + tag, others, 1e-12));
        suite.items.push_back(
            item("axioms_nonneg_envelope/" + tag, r.nonneg - eps / 2.0, 0.0));
      }

      // g' against central differences, step 1e-6, clear of 0 and eps.
      double fd_worst = 0.0, mono_worst = 0.0;
      const double h = 1e-6;
      double prev = -1.0;
      for (int k = 0; k <= 4000; ++k) {
        const double s = -5.0 + 10.0 * k / 4000.0;
        if (std::abs(s) < 1e-3 || std::abs(s - eps) < 1e-3) continue;
        const double fd = (g.value(s + h) - g.value(s - h)) / (2.0 * h);
        bump_worst(fd_worst, std::abs(fd - g.deriv(s)));
        const double d = g.deriv(s);
        if (prev >= 0.0) bump_worst(mono_worst, prev - d);
        prev = d;
      }
      suite.items.push_back(item("deriv_fd/" + tag, fd_worst, 1e-6));
      suite.items.push_back(item("deriv_monotone/" + tag, mono_worst, 1e-12));
    }
  }
  return suite;
}

CheckSuite run_softmin_checks_with(const std::vector<SmoothPlus>& smoothers,
                                   unsigned seed, int evaluations) {
  if (smoothers.empty()) {
    throw std::invalid_argument("run_softmin_checks_with: no smoothers");
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> length(1, 8);
  std::uniform_real_distribution<double> entry(-10.0, 10.0);

  double nonneg = 0.0, sum_dev = 0.0, prod_dev = 0.0, uniform = 0.0,
         exact_dev = 0.0;
  std::vector<double> a;
  for (int e = 0; e < evaluations; ++e) {
    const SmoothPlus& g = smoothers[e % smoothers.size()];
    const int n = length(rng);
    a.resize(n);
    for (double& v : a) v = entry(rng);

    const SoftMinEval eval = psi_smooth(a, g);
    bump_worst(nonneg, -eval.weights.minCoeff());
    bump_worst(sum_dev, std::abs(eval.weights.sum() - 1.0));
    const Eigen::VectorXd prod = weights_product_form(a, g);
    bump_worst(prod_dev, (eval.weights - prod).cwiseAbs().maxCoeff());

    const double pe = psi_exact(a);
    bump_worst(exact_dev,
               std::abs(pe - *std::min_element(a.begin(), a.end())));
    bump_worst(uniform, std::abs(eval.value - pe) - (n - 1.0) * g.epsilon);
  }

  CheckSuite suite;
  suite.name = "softmin";
  suite.items.push_back(item("simplex/weight_nonneg", nonneg, 1e-12));
  suite.items.push_back(item("simplex/weight_sum", sum_dev, 1e-12));
  suite.items.push_back(item("simplex/product_form", prod_dev, 1e-12));
  suite.items.push_back(item("uniform_bound", uniform, 1e-12));
  suite.items.push_back(item("psi_exact_is_min", exact_dev, 1e-15));
  return suite;
}

CheckSuite run_softmin_checks(unsigned seed, int evaluations) {
  CheckSuite suite = run_softmin_checks_with(standard_smoothers(), seed,
                                             evaluations);

  // Moreau never falls below the exact min.
  {
    std::mt19937_64 rng(seed + 1);
    std::uniform_int_distribution<int> length(1, 8);
    std::uniform_real_distribution<double> entry(-10.0, 10.0);
    double worst = 0.0;
    std::vector<double> a;
    for (int e = 0; e < 20000; ++e) {
      const SmoothPlus g = moreau_plus(e % 2 == 0 ? 1e-2 : 1e-1);
      a.resize(length(rng));
      for (double& v : a) v = entry(rng);
      bump_worst(worst, psi_exact(a) - psi_smooth(a, g).value);
    }
    suite.items.push_back(item("moreau_overestimates", worst, 1e-15));
  }

  // Weights against central differences of the value, away from breakpoints.
  {
    std::mt19937_64 rng(seed + 2);
    std::uniform_int_distribution<int> length(2, 8);
    std::uniform_real_distribution<double> entry(-10.0, 10.0);
    const double h = 1e-6;
    double worst = 0.0;
    std::vector<double> a, shifted;
    int accepted = 0;
    const auto smoothers = standard_smoothers();
    for (int tries = 0; tries < 200000 && accepted < 2000; ++tries) {
      const SmoothPlus& g = smoothers[tries % smoothers.size()];
      a.resize(length(rng));
      for (double& v : a) v = entry(rng);
      if (!clear_of_breakpoints(a, g, 1e-3)) continue;
      ++accepted;
      const SoftMinEval eval = psi_smooth(a, g);
      shifted = a;
      for (std::size_t j = 0; j < a.size(); ++j) {
        shifted[j] = a[j] + h;
        const double up = psi_smooth(shifted, g).value;
        shifted[j] = a[j] - h;
        const double dn = psi_smooth(shifted, g).value;
        shifted[j] = a[j];
        bump_worst(worst,
                   std::abs((up - dn) / (2.0 * h) - eval.weights[j]));
      }
    }
    suite.items.push_back(item("gradient_fd", worst, 1e-5));
  }

  // Hessian: negative semidefinite with operator norm <= 2(n-1) ||g''||.
  {
    std::mt19937_64 rng(seed + 3);
    std::uniform_int_distribution<int> length(2, 8);
    std::uniform_real_distribution<double> entry(-10.0, 10.0);
    double nsd = 0.0, norm_excess = 0.0;
    std::vector<double> a;
    const auto smoothers = standard_smoothers();
    for (int e = 0; e < 2000; ++e) {
      const SmoothPlus& g = smoothers[e % smoothers.size()];
      const int n = length(rng);
      a.resize(n);
      for (double& v : a) v = entry(rng);
      const SoftMinEval eval = psi_smooth(a, g, /*with_hessian=*/true);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(*eval.hessian);
      bump_worst(nsd, es.eigenvalues().maxCoeff());
      const double opnorm = es.eigenvalues().cwiseAbs().maxCoeff();
      bump_worst(norm_excess,
                 opnorm - 2.0 * (n - 1.0) * g.sup_second_deriv);
    }
    suite.items.push_back(item("hessian_nsd", nsd, 1e-10));
    suite.items.push_back(item("hessian_norm", norm_excess, 1e-9));
  }

  // Moreau weights hit the limit indicator once eps clears the gaps.
  {
    std::mt19937_64 rng(seed + 4);
    std::uniform_int_distribution<int> length(2, 8);
    std::uniform_real_distribution<double> entry(-10.0, 10.0);
    double worst = 0.0;
    std::vector<double> a, sorted;
    for (int e = 0; e < 200; ++e) {
      const int n = length(rng);
      a.resize(n);
      do {
        for (double& v : a) v = entry(rng);
        sorted = a;
        std::sort(sorted.begin(), sorted.end());
      } while ([&] {
        for (std::size_t i = 1; i < sorted.size(); ++i) {
          if (sorted[i] - sorted[i - 1] < 1e-3) return true;
        }
        return false;
      }());
      const Eigen::VectorXd lim = limit_weights(a, 0.0);
      for (double eps : {1e-2, 1e-4, 1e-6}) {
        const Eigen::VectorXd w = psi_smooth(a, moreau_plus(eps)).weights;
        if (eps == 1e-6) {
          bump_worst(worst, (w - lim).cwiseAbs().maxCoeff());
        }
      }
    }
    suite.items.push_back(item("moreau_limit_weights", worst, 1e-8));
  }

  // Log-sum-exp sandwich min <= value <= min + eps log n, simplex weights.
  {
    std::mt19937_64 rng(seed + 5);
    std::uniform_int_distribution<int> length(1, 8);
    std::uniform_real_distribution<double> entry(-10.0, 10.0);
    double sandwich = 0.0, simplex = 0.0;
    std::vector<double> a;
    for (int e = 0; e < 20000; ++e) {
      const double eps = (e % 3 == 0) ? 1e-3 : (e % 3 == 1) ? 1e-2 : 1e-1;
      const int n = length(rng);
      a.resize(n);
      for (double& v : a) v = entry(rng);
      const SoftMinEval eval = lse_min(a, eps);
      const double lo = *std::min_element(a.begin(), a.end());
      bump_worst(sandwich, lo - eval.value);
      bump_worst(sandwich, eval.value - lo - eps * std::log(double(n)));
      bump_worst(simplex, -eval.weights.minCoeff());
      bump_worst(simplex, std::abs(eval.weights.sum() - 1.0));
    }
    suite.items.push_back(item("lse/sandwich", sandwich, 1e-12));
    suite.items.push_back(item("lse/simplex", simplex, 1e-12));
  }

  return suite;
}

CheckSuite run_bounds_checks(unsigned seed, int workers) {
  CheckSuite suite;
  suite.name = "bounds";
  const ExactSolution exact = exact_solution(2);
  const FunctionFamily& fam = exact.family();
  const int n = exact.members();

  const SemiconcaveApprox v_exact(fam, MinMode::Exact, 0.0);
  const SemiconcaveApprox v_moreau(fam, MinMode::Moreau, 1e-2);
  const SemiconcaveApprox v_alg(fam, MinMode::Algebraic, 1e-2);
  const SemiconcaveApprox v_lse(fam, MinMode::LogSumExp, 1e-2);
  const double L = v_exact.lipschitz();

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  const auto draw = [&](double margin) {
    Eigen::VectorXd x(2);
    x[0] = coord(rng) * (1.0 - margin);
    x[1] = coord(rng) * (1.0 - margin);
    return x;
  };

  // |v(x) - v(y)| <= L |x - y| in every mode.
  {
    double worst = 0.0;
    for (int e = 0; e < 10000; ++e) {
      const Eigen::VectorXd x = draw(0.0), y = draw(0.0);
      const double dist = (x - y).norm();
      for (const SemiconcaveApprox* v : {&v_exact, &v_moreau, &v_alg, &v_lse}) {
        bump_worst(worst, std::abs(v->value(x) - v->value(y)) - L * dist);
      }
    }
    suite.items.push_back(item("lipschitz_transfer", worst, 1e-8));
  }

  // Distance to the exact min and the Moreau one-sided bound.
  {
    double moreau_close = 0.0, alg_close = 0.0, lse_close = 0.0,
           moreau_below = 0.0;
    for (int e = 0; e < 10000; ++e) {
      const Eigen::VectorXd x = draw(0.0);
      const double ve = v_exact.value(x);
      const double vm = v_moreau.value(x);
      bump_worst(moreau_close, std::abs(vm - ve) - (n - 1.0) * 1e-2);
      bump_worst(alg_close, std::abs(v_alg.value(x) - ve) - (n - 1.0) * 1e-2);
      bump_worst(lse_close,
                 std::abs(v_lse.value(x) - ve) - 1e-2 * std::log(double(n)));
      bump_worst(moreau_below, ve - vm);
    }
    suite.items.push_back(item("mode_closeness/moreau", moreau_close, 1e-12));
    suite.items.push_back(item("mode_closeness/algebraic", alg_close, 1e-12));
    suite.items.push_back(item("mode_closeness/lse", lse_close, 1e-12));
    suite.items.push_back(item("moreau_overestimates_min", moreau_below, 1e-15));
  }

  // Composite gradients against central differences where the weights are
  // locally stable (smallest nonzero member gap >= 10 eps).
  {
    const double h = 1e-6;
    double worst = 0.0;
    int accepted = 0;
    std::vector<double> vals(n);
    for (int tries = 0; tries < 100000 && accepted < 200; ++tries) {
      const Eigen::VectorXd x = draw(1e-3);
      exact.member_values(x, vals.data());
      const double lo = *std::min_element(vals.begin(), vals.end());
      bool stable = true;
      for (double v : vals) {
        const double gap = v - lo;
        if (gap > 1e-9 && gap < 10.0 * 1e-2) stable = false;
      }
      if (!stable) continue;
      ++accepted;
      for (const SemiconcaveApprox* v : {&v_moreau, &v_alg, &v_lse}) {
        const Eigen::VectorXd g = v->gradient(x);
        for (int k = 0; k < 2; ++k) {
          Eigen::VectorXd xp = x, xm = x;
          xp[k] += h;
          xm[k] -= h;
          const double fd = (v->value(xp) - v->value(xm)) / (2.0 * h);
          bump_worst(worst, std::abs(fd - g[k]));
        }
      }
    }
    suite.items.push_back(item("composite_gradient_fd", worst, 1e-5));
  }

  // Composite Hessian eigenvalue window.
  {
    std::vector<Eigen::VectorXd> pts;
    pts.reserve(1000);
    for (int e = 0; e < 1000; ++e) pts.push_back(draw(0.0));
    for (const SemiconcaveApprox* v : {&v_moreau, &v_alg}) {
      const HessianBoundReport r = hessian_bound_check(*v, pts, 1e-8);
      const std::string tag = v == &v_moreau ? "moreau" : "algebraic";
      suite.items.push_back(item("composite_hessian_upper/" + tag,
                                 r.max_eigenvalue - r.upper_bound, 1e-8));
      suite.items.push_back(item("composite_hessian_lower/" + tag,
                                 r.lower_bound - r.min_eigenvalue, 1e-8));
    }
  }

  // Global bounds for interpolated families.
  {
    double eq1 = -1.0, eq2 = -1.0;
    for (int m : {4, 8}) {
      const FunctionFamily fam_m = interpolate_family(fam, m);
      for (double eps : {1e-3, 1e-2}) {
        const SmoothPlus g = moreau_plus(eps);
        for (double p : {1.0, 2.0, 4.0}) {
          const GlobalBoundReport r =
              global_error_bound_check(exact, fam_m, g, p, 201);
          bump_worst(eq1, r.eq1_lhs - r.eq1_rhs * (1.0 + 1e-6));
          bump_worst(eq2, r.eq2_lhs - r.eq2_rhs * (1.0 + 1e-6));
        }
      }
    }
    suite.items.push_back(item("global_bound_eq1", eq1, 0.0));
    suite.items.push_back(item("global_bound_eq2", eq2, 0.0));
  }

  // Localized gradient bound on Omega_delta (delta/2 form), admissible eps.
  {
    const EvaluationGrid grid =
        build_grid(201, exact, {1e-2, 1e-1}, 1e-12, workers);
    double excess = -1.0;
    for (int m : {6, 10}) {
      const FunctionFamily fam_m = interpolate_family(fam, m);
      const std::vector<std::pair<double, double>> combos = {
          {1e-1, 1e-3}, {1e-1, 1e-2}, {1e-2, 1e-3}};
      for (const auto& [delta, eps] : combos) {
        const LocalizedBoundReport r = localized_bound_check(
            exact, fam_m, moreau_plus(eps), delta, grid, 1e-6, workers);
        if (!r.epsilon_admissible) continue;
        bump_worst(excess, r.lhs - (r.rhs * (1.0 + 1e-6) + 1e-8));
      }
    }
    suite.items.push_back(item("localized_bound", excess, 0.0));
  }

  return suite;
}

CheckSuite run_coarea_checks(unsigned seed, int functions, int workers) {
  (void)workers;  // probe sweeps are sequential; callers parallelize elsewhere
  CheckSuite suite;
  suite.name = "coarea";
  const ExactSolution exact = exact_solution(2);
  const Box box = exact.family().domain;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> log_eps(std::log(1e-4),
                                                 std::log(0.3));
  std::uniform_int_distribution<int> degree(1, 12);

  double excess[3] = {-1.0, -1.0, -1.0};
  const double ps[3] = {1.0, 2.0, 4.0};
  for (int f = 0; f < functions; ++f) {
    const double eps = std::exp(log_eps(rng));
    std::shared_ptr<SemiconcaveApprox> u;
    if (f % 2 == 0) {
      u = std::make_shared<SemiconcaveApprox>(exact.family(), MinMode::Moreau,
                                              eps, /*constants_grid=*/2);
    } else {
      const int m = degree(rng);
      u = std::make_shared<SemiconcaveApprox>(
          interpolate_family(exact.family(), m), MinMode::Moreau, eps,
          /*constants_grid=*/2);
    }
    const auto value = [&exact, u](const Eigen::VectorXd& x) {
      return u->value(x) - exact.value(x);
    };
    const auto grad = [&exact, u](const Eigen::VectorXd& x) {
      return Eigen::VectorXd(u->gradient(x) - exact.ref_grad(x));
    };
    const std::vector<CoareaReport> reports =
        coarea_check_multi(value, grad, {ps[0], ps[1], ps[2]}, box, 201, 1e-6);
    for (int k = 0; k < 3; ++k) {
      bump_worst(excess[k], reports[k].lhs - reports[k].rhs * (1.0 + 1e-6));
    }
  }
  suite.items.push_back(item("coarea/p=1", excess[0], 0.0));
  suite.items.push_back(item("coarea/p=2", excess[1], 0.0));
  suite.items.push_back(item("coarea/p=4", excess[2], 0.0));
  return suite;
}

}  // namespace scmin
