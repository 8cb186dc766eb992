#pragma once

#include <string>
#include <vector>

#include "scmin/smoothing.hpp"

namespace scmin {

// One verified invariant: its name, the worst violation observed, and the
// tolerance it was held to.
struct CheckItem {
  std::string invariant;
  double worst = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct CheckSuite {
  std::string name;
  std::vector<CheckItem> items;

  bool pass() const;
  const CheckItem* first_failure() const;
};

// Smoother axioms for both built-in kinds over an epsilon ladder.
CheckSuite run_axiom_checks();

// Random-corpus invariants of the smoothed min: simplex weights, product
// form agreement, uniform bound |psi_eps - psi| <= (n-1) eps, the Moreau
// overestimate, finite-difference gradient agreement, Hessian sign and
// norm, limit consistency, and the log-sum-exp sandwich.  `evaluations`
// counts the simplex corpus size.
CheckSuite run_softmin_checks(unsigned seed, int evaluations = 100000);

// Same suite against caller-supplied smoothers (used to vet fixtures and
// user smoothers; breaking the derivative range must surface here as a
// simplex violation).
CheckSuite run_softmin_checks_with(const std::vector<SmoothPlus>& smoothers,
                                   unsigned seed, int evaluations);

// Composite-level bounds on the exp-distance testbed: Lipschitz transfer,
// mode closeness, composite Hessian eigenvalue bounds, and the global and
// localized error bounds for Chebyshev-interpolated families.
CheckSuite run_bounds_checks(unsigned seed, int workers = 1);

// Coarea estimate on random (smoothed - exact) and (interpolated - exact)
// difference functions at p in {1, 2, 4}.
CheckSuite run_coarea_checks(unsigned seed, int functions = 200,
                             int workers = 1);

}  // namespace scmin
