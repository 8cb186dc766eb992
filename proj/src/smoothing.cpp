#include "scmin/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace scmin {

SmoothPlus moreau_plus(double epsilon) {
  if (!(epsilon > 0.0)) {
    throw std::invalid_argument("moreau_plus: epsilon must be positive");
  }
  SmoothPlus g;
  g.kind = PlusKind::Moreau;
  g.epsilon = epsilon;
  g.value = [epsilon](double s) {
    if (s < 0.0) return 0.0;
    if (s < epsilon) return s * s / (2.0 * epsilon);
    return s - epsilon / 2.0;
  };
  g.deriv = [epsilon](double s) {
    if (s < 0.0) return 0.0;
    if (s < epsilon) return s / epsilon;
    return 1.0;
  };
  // Left-closed pieces: g''(0) = 1/eps, g''(eps) = 0.
  g.second_deriv = [epsilon](double s) {
    return (s >= 0.0 && s < epsilon) ? 1.0 / epsilon : 0.0;
  };
  g.sup_second_deriv = 1.0 / epsilon;
  return g;
}

SmoothPlus algebraic_plus(double epsilon) {
  if (!(epsilon > 0.0)) {
    throw std::invalid_argument("algebraic_plus: epsilon must be positive");
  }
  SmoothPlus g;
  g.kind = PlusKind::Algebraic;
  g.epsilon = epsilon;
  g.value = [epsilon](double s) {
    return (s + std::sqrt(s * s + epsilon * epsilon) - epsilon) / 2.0;
  };
  g.deriv = [epsilon](double s) {
    return (1.0 + s / std::sqrt(s * s + epsilon * epsilon)) / 2.0;
  };
  g.second_deriv = [epsilon](double s) {
    const double r = std::sqrt(s * s + epsilon * epsilon);
    return epsilon * epsilon / (2.0 * r * r * r);
  };
  g.sup_second_deriv = 1.0 / (2.0 * epsilon);
  return g;
}

double PlusAxiomReport::worst() const {
  return std::max({nonneg, deriv_low, deriv_high, curvature, plus_distance,
                   upper, flat_left});
}

PlusAxiomReport check_plus_axioms(const SmoothPlus& g, int samples, double lo,
                                  double hi) {
  if (samples < 2 || !(lo < hi)) {
    throw std::invalid_argument("check_plus_axioms: need samples >= 2, lo < hi");
  }
  std::vector<double> pts;
  pts.reserve(static_cast<std::size_t>(samples) + 4);
  for (int k = 0; k < samples; ++k) {
    pts.push_back(lo + (hi - lo) * k / (samples - 1));
  }
  // The piecewise smoothers switch branches at 0 and eps; probe both sides.
  for (double s : {0.0, g.epsilon, std::nextafter(0.0, -1.0),
                   std::nextafter(g.epsilon, 0.0)}) {
    if (s >= lo && s <= hi) pts.push_back(s);
  }

  PlusAxiomReport r;
  const bool moreau_claims = (g.kind == PlusKind::Moreau);
  for (double s : pts) {
    const double v = g.value(s);
    const double d = g.deriv(s);
    const double dd = g.second_deriv(s);
    const double plus = std::max(s, 0.0);
    r.nonneg = std::max(r.nonneg, -v);
    r.deriv_low = std::max(r.deriv_low, -d);
    r.deriv_high = std::max(r.deriv_high, d - 1.0);
    r.curvature = std::max(r.curvature, -dd);
    r.plus_distance = std::max(r.plus_distance, std::abs(v - plus) - g.epsilon);
    if (moreau_claims) {
      r.upper = std::max(r.upper, v - plus);
      if (s <= 0.0) r.flat_left = std::max(r.flat_left, std::abs(d));
    }
  }
  r.nonneg = std::max(r.nonneg, 0.0);
  r.deriv_low = std::max(r.deriv_low, 0.0);
  r.deriv_high = std::max(r.deriv_high, 0.0);
  r.curvature = std::max(r.curvature, 0.0);
  r.plus_distance = std::max(r.plus_distance, 0.0);
  r.upper = std::max(r.upper, 0.0);
  r.flat_left = std::max(r.flat_left, 0.0);
  return r;
}

}  // namespace scmin
