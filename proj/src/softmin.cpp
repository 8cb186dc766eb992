#include "scmin/softmin.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace scmin {

namespace {

void require_input(std::span<const double> a, const char* who) {
  if (a.empty()) {
    throw std::invalid_argument(std::string(who) + ": empty input");
  }
  for (double v : a) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument(std::string(who) + ": non-finite entry");
    }
  }
}

void require_smoother(const SmoothPlus& g, const char* who) {
  if (!(g.epsilon > 0.0) || !g.value || !g.deriv || !g.second_deriv) {
    throw std::invalid_argument(std::string(who) + ": incomplete smoother");
  }
}

}  // namespace

double psi_exact(std::span<const double> a, std::size_t n) {
  if (n == 0 || n > a.size()) {
    throw std::invalid_argument("psi_exact: prefix length out of range");
  }
  require_input(a.first(n), "psi_exact");
  double psi = a[0];
  for (std::size_t i = 1; i < n; ++i) {
    // a_i - (a_i - psi)_+ : when the gap is positive the subtractions cancel
    // exactly to psi, so evaluate the step in exact arithmetic.
    psi = (a[i] - psi > 0.0) ? psi : a[i];
  }
  return psi;
}

double psi_exact(std::span<const double> a) { return psi_exact(a, a.size()); }

SoftMinEval psi_smooth(std::span<const double> a, const SmoothPlus& g,
                       bool with_hessian) {
  require_input(a, "psi_smooth");
  require_smoother(g, "psi_smooth");
  const int n = static_cast<int>(a.size());

  SoftMinEval out;
  out.weights = Eigen::VectorXd::Zero(n);
  out.weights[0] = 1.0;
  out.value = a[0];
  if (with_hessian) out.hessian = Eigen::MatrixXd::Zero(n, n);

  Eigen::VectorXd diff;  // e_i - p_{i-1}, reused across steps
  if (with_hessian) diff.resize(n);

  for (int i = 1; i < n; ++i) {
    const double gap = a[i] - out.value;
    const double gp = g.deriv(gap);
    if (with_hessian) {
      const double gpp = g.second_deriv(gap);
      diff.head(i) = -out.weights.head(i);
      diff[i] = 1.0;
      auto block = out.hessian->topLeftCorner(i + 1, i + 1);
      block *= gp;
      if (gpp != 0.0) {
        block.noalias() -=
            gpp * diff.head(i + 1) * diff.head(i + 1).transpose();
      }
    }
    out.weights.head(i) *= gp;
    out.weights[i] = 1.0 - gp;
    out.value = a[i] - g.value(gap);
  }
  return out;
}

Eigen::VectorXd weights_product_form(std::span<const double> a,
                                     const SmoothPlus& g) {
  require_input(a, "weights_product_form");
  require_smoother(g, "weights_product_form");
  const int n = static_cast<int>(a.size());

  // Forward pass for the derivative factors g'(a_i - psi_{i-1,eps}).
  Eigen::VectorXd gp(n);
  double psi = a[0];
  gp[0] = 0.0;  // unused; index 0 has no predecessor
  for (int i = 1; i < n; ++i) {
    const double gap = a[i] - psi;
    gp[i] = g.deriv(gap);
    psi = a[i] - g.value(gap);
  }

  Eigen::VectorXd p(n);
  double suffix = 1.0;  // prod_{i > j} gp[i]
  for (int j = n - 1; j >= 0; --j) {
    p[j] = suffix * (j == 0 ? 1.0 : 1.0 - gp[j]);
    if (j > 0) suffix *= gp[j];
  }
  return p;
}

Eigen::VectorXd limit_weights(std::span<const double> a,
                              double tie_tolerance) {
  const ActiveIndexInfo info = active_info(a, tie_tolerance);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(static_cast<int>(a.size()));
  w[info.largest_active] = 1.0;
  return w;
}

ActiveIndexInfo active_info(std::span<const double> a, double tie_tolerance) {
  require_input(a, "active_info");
  if (tie_tolerance < 0.0) {
    throw std::invalid_argument("active_info: negative tie tolerance");
  }
  const double lo = *std::min_element(a.begin(), a.end());
  ActiveIndexInfo info;
  info.tie_tolerance = tie_tolerance;
  for (int i = 0; i < static_cast<int>(a.size()); ++i) {
    if (a[i] <= lo + tie_tolerance) {
      info.active.push_back(i);
      info.largest_active = i;
    }
  }
  return info;
}

SoftMinEval lse_min(std::span<const double> a, double epsilon) {
  require_input(a, "lse_min");
  if (!(epsilon > 0.0)) {
    throw std::invalid_argument("lse_min: epsilon must be positive");
  }
  const int n = static_cast<int>(a.size());
  const double lo = *std::min_element(a.begin(), a.end());

  SoftMinEval out;
  out.weights.resize(n);
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    // Shift by the min so the largest exponent is exactly 0.
    const double e = std::exp(-(a[i] - lo) / epsilon);
    out.weights[i] = e;
    total += e;
  }
  out.weights /= total;
  out.value = lo - epsilon * std::log(total / n);
  return out;
}

}  // namespace scmin
