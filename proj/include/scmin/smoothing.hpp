#pragma once

#include <functional>

namespace scmin {

enum class PlusKind { Moreau, Algebraic, Custom };

// Smooth convex approximation g of the positive part s -> (s)_+ = max(s, 0).
//
// Every admissible smoother satisfies, for its parameter eps > 0:
//   0 <= g' <= 1,   g'' >= 0 a.e.,   |g(s) - (s)_+| <= eps,
// and g'' is bounded (sup_second_deriv holds the exact sup).  Nonnegativity
// g >= 0 holds exactly for the Moreau family; the algebraic family
// undershoots zero on the negative axis by at most eps/2 (see below), which
// the axiom checker reports against that envelope.  The Moreau smoother
// additionally underestimates the positive part (g <= (s)_+) and is exactly
// flat on the negative axis (g'(s) = 0 for s <= 0), which is what makes
// min-point weights collapse onto a single index as eps -> 0.
struct SmoothPlus {
  PlusKind kind = PlusKind::Custom;
  double epsilon = 0.0;
  std::function<double(double)> value;
  std::function<double(double)> deriv;
  std::function<double(double)> second_deriv;
  double sup_second_deriv = 0.0;
};

// Moreau envelope of the positive part:
//   g(s) = 0 for s < 0,  s^2/(2 eps) on [0, eps),  s - eps/2 for s >= eps.
// Piecewise C^1 with g'' = 1/eps on [0, eps) and 0 elsewhere; at the
// breakpoints the left-closed convention is used (g''(0) = 1/eps,
// g''(eps) = 0).  ||g''||_inf = 1/eps.
SmoothPlus moreau_plus(double epsilon);

// Algebraic smoother g(s) = (s + sqrt(s^2 + eps^2) - eps) / 2, C^infinity
// with g'(0) = 1/2 at every eps and ||g''||_inf = 1/(2 eps) attained at
// s = 0.  Sandwiched as (s)_+ - eps/2 <= g(s) <= (s)_+, so it dips below
// zero for s < 0 (down to -eps/2 in the limit s -> -inf); it does not
// satisfy the nonnegativity axiom literally, only up to the eps/2 envelope.
SmoothPlus algebraic_plus(double epsilon);

// Worst observed violation per axiom, each clamped at 0 (so 0 means the
// axiom held on every sample).  upper and flat_left only apply to smoothers
// that claim the Moreau-only properties; they stay 0 otherwise.
struct PlusAxiomReport {
  double nonneg = 0.0;         // max(0, -g)
  double deriv_low = 0.0;      // max(0, -g')
  double deriv_high = 0.0;     // max(0, g' - 1)
  double curvature = 0.0;      // max(0, -g'')
  double plus_distance = 0.0;  // max(0, |g - (s)_+| - eps)
  double upper = 0.0;          // Moreau: max(0, g - (s)_+)
  double flat_left = 0.0;      // Moreau: max |g'| over s <= 0

  double worst() const;
  bool pass(double tolerance) const { return worst() <= tolerance; }
};

// Samples g on an even grid over [lo, hi] (plus the breakpoints 0 and eps)
// and reports the worst violation of each axiom.  Reports rather than
// asserts so callers can vet user-supplied smoothers.
PlusAxiomReport check_plus_axioms(const SmoothPlus& g, int samples, double lo,
                                  double hi);

}  // namespace scmin
