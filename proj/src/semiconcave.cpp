#include "scmin/semiconcave.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace scmin {

namespace {

double sym_opnorm(const Eigen::MatrixXd& h) {
  const int d = static_cast<int>(h.rows());
  if (d == 1) return std::abs(h(0, 0));
  if (d == 2) {
    // Eigenvalues of [[a,b],[b,c]]: (a+c)/2 +- sqrt(((a-c)/2)^2 + b^2).
    const double mid = (h(0, 0) + h(1, 1)) / 2.0;
    const double rad =
        std::sqrt(std::pow((h(0, 0) - h(1, 1)) / 2.0, 2) + h(0, 1) * h(0, 1));
    return std::max(std::abs(mid + rad), std::abs(mid - rad));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

// Value-only recursions, allocation free for the grid sweeps.
double smooth_value(const double* a, int n, const SmoothPlus& g) {
  double psi = a[0];
  for (int i = 1; i < n; ++i) psi = a[i] - g.value(a[i] - psi);
  return psi;
}

double exact_value(const double* a, int n) {
  double psi = a[0];
  for (int i = 1; i < n; ++i) psi = (a[i] - psi > 0.0) ? psi : a[i];
  return psi;
}

double lse_value(const double* a, int n, double eps) {
  double lo = a[0];
  for (int i = 1; i < n; ++i) lo = std::min(lo, a[i]);
  double total = 0.0;
  for (int i = 0; i < n; ++i) total += std::exp(-(a[i] - lo) / eps);
  return lo - eps * std::log(total / n);
}

void for_each_grid_point(const Box& box, int per_axis,
                         const std::function<void(const Eigen::VectorXd&)>& fn) {
  const int d = box.dim();
  std::vector<int> idx(d, 0);
  Eigen::VectorXd x(d);
  while (true) {
    for (int k = 0; k < d; ++k) {
      x[k] = box.lo[k] + (box.hi[k] - box.lo[k]) * idx[k] / (per_axis - 1);
    }
    fn(x);
    int k = 0;
    while (k < d && ++idx[k] == per_axis) idx[k++] = 0;
    if (k == d) break;
  }
}

}  // namespace

const char* to_string(MinMode mode) {
  switch (mode) {
    case MinMode::Exact: return "Exact";
    case MinMode::Moreau: return "MoreauRegMin";
    case MinMode::Algebraic: return "AlgebraicRegMin";
    case MinMode::LogSumExp: return "LSE";
  }
  return "?";
}

FamilyConstants estimate_constants(const FunctionFamily& family,
                                   int grid_per_axis) {
  if (family.members.empty()) {
    throw std::invalid_argument("estimate_constants: empty family");
  }
  if (grid_per_axis < 2) {
    throw std::invalid_argument("estimate_constants: need >= 2 points/axis");
  }
  FamilyConstants k;
  for_each_grid_point(family.domain, grid_per_axis,
                      [&](const Eigen::VectorXd& x) {
                        for (const auto& member : family.members) {
                          k.L = std::max(k.L, member.gradient(x).norm());
                          k.C = std::max(k.C, sym_opnorm(member.hessian(x)));
                        }
                      });
  return k;
}

SemiconcaveApprox::SemiconcaveApprox(FunctionFamily family, MinMode mode,
                                     double epsilon, int constants_grid,
                                     double tie_tolerance_rel)
    : family_(std::move(family)),
      mode_(mode),
      epsilon_(epsilon),
      tie_rel_(tie_tolerance_rel) {
  if (family_.members.empty()) {
    throw std::invalid_argument("SemiconcaveApprox: empty family");
  }
  if (tie_rel_ < 0.0) {
    throw std::invalid_argument("SemiconcaveApprox: negative tie tolerance");
  }
  if (mode_ != MinMode::Exact && !(epsilon_ > 0.0)) {
    throw std::invalid_argument(
        "SemiconcaveApprox: smoothed modes need epsilon > 0");
  }
  if (mode_ == MinMode::Moreau) smoother_ = moreau_plus(epsilon_);
  if (mode_ == MinMode::Algebraic) smoother_ = algebraic_plus(epsilon_);
  constants_ = estimate_constants(family_, constants_grid);
}

const SmoothPlus* SemiconcaveApprox::smoother() const {
  return smoother_ ? &*smoother_ : nullptr;
}

void SemiconcaveApprox::member_values(const Eigen::VectorXd& x,
                                      std::vector<double>& out) const {
  if (!family_.domain.contains(x)) {
    throw std::domain_error("SemiconcaveApprox: point outside the domain box");
  }
  out.resize(family_.members.size());
  for (std::size_t i = 0; i < family_.members.size(); ++i) {
    out[i] = family_.members[i].value(x);
  }
}

double SemiconcaveApprox::value(const Eigen::VectorXd& x) const {
  std::vector<double> vals;
  member_values(x, vals);
  const int n = static_cast<int>(vals.size());
  switch (mode_) {
    case MinMode::Exact: return exact_value(vals.data(), n);
    case MinMode::Moreau:
    case MinMode::Algebraic: return smooth_value(vals.data(), n, *smoother_);
    case MinMode::LogSumExp: return lse_value(vals.data(), n, epsilon_);
  }
  throw std::logic_error("SemiconcaveApprox: bad mode");
}

Eigen::VectorXd SemiconcaveApprox::weights_at(const Eigen::VectorXd& x,
                                              std::vector<double>& vals) const {
  member_values(x, vals);
  switch (mode_) {
    case MinMode::Exact: {
      const double v = exact_value(vals.data(), static_cast<int>(vals.size()));
      return limit_weights(vals, tie_rel_ * (1.0 + std::abs(v)));
    }
    case MinMode::Moreau:
    case MinMode::Algebraic: return psi_smooth(vals, *smoother_).weights;
    case MinMode::LogSumExp: return lse_min(vals, epsilon_).weights;
  }
  throw std::logic_error("SemiconcaveApprox: bad mode");
}

Eigen::VectorXd SemiconcaveApprox::gradient(const Eigen::VectorXd& x) const {
  std::vector<double> vals;
  const Eigen::VectorXd w = weights_at(x, vals);
  Eigen::VectorXd g = Eigen::VectorXd::Zero(family_.domain.dim());
  for (int i = 0; i < w.size(); ++i) {
    if (w[i] != 0.0) g.noalias() += w[i] * family_.members[i].gradient(x);
  }
  return g;
}

std::pair<double, Eigen::VectorXd> SemiconcaveApprox::value_and_gradient(
    const Eigen::VectorXd& x) const {
  std::vector<double> vals;
  const Eigen::VectorXd w = weights_at(x, vals);
  const int n = static_cast<int>(vals.size());
  double v = 0.0;
  switch (mode_) {
    case MinMode::Exact: v = exact_value(vals.data(), n); break;
    case MinMode::Moreau:
    case MinMode::Algebraic: v = smooth_value(vals.data(), n, *smoother_); break;
    case MinMode::LogSumExp: v = lse_value(vals.data(), n, epsilon_); break;
  }
  Eigen::VectorXd g = Eigen::VectorXd::Zero(family_.domain.dim());
  for (int i = 0; i < n; ++i) {
    if (w[i] != 0.0) g.noalias() += w[i] * family_.members[i].gradient(x);
  }
  return {v, g};
}

Eigen::MatrixXd SemiconcaveApprox::hessian(const Eigen::VectorXd& x) const {
  if (mode_ != MinMode::Moreau && mode_ != MinMode::Algebraic) {
    throw std::logic_error(
        "SemiconcaveApprox::hessian: only the smoothed-min modes carry one");
  }
  std::vector<double> vals;
  member_values(x, vals);
  const int n = static_cast<int>(vals.size());
  const int d = family_.domain.dim();
  const SoftMinEval eval = psi_smooth(vals, *smoother_, /*with_hessian=*/true);

  Eigen::MatrixXd jac(n, d);  // row i = grad phi_i
  for (int i = 0; i < n; ++i) jac.row(i) = family_.members[i].gradient(x);

  Eigen::MatrixXd h = jac.transpose() * (*eval.hessian) * jac;
  for (int i = 0; i < n; ++i) {
    if (eval.weights[i] != 0.0) h += eval.weights[i] * family_.members[i].hessian(x);
  }
  return h;
}

ActiveIndexInfo SemiconcaveApprox::active_set(const Eigen::VectorXd& x,
                                              double tie_tolerance) const {
  std::vector<double> vals;
  member_values(x, vals);
  return active_info(vals, tie_tolerance);
}

bool SemiconcaveApprox::omega_delta_member(const Eigen::VectorXd& x,
                                           double delta) const {
  if (delta < 0.0) {
    throw std::invalid_argument("omega_delta_member: negative delta");
  }
  std::vector<double> vals;
  member_values(x, vals);
  const double v = exact_value(vals.data(), static_cast<int>(vals.size()));
  const double tol = tie_rel_ * (1.0 + std::abs(v));
  for (double a : vals) {
    const double gap = a - v;
    if (gap > tol && gap < delta) return false;
  }
  return true;
}

int SemiconcaveApprox::gradient_active_index(const Eigen::VectorXd& x) const {
  std::vector<double> vals;
  const Eigen::VectorXd w = weights_at(x, vals);
  int best = 0;
  for (int i = 1; i < w.size(); ++i) {
    if (w[i] >= w[best]) best = i;  // ties resolve upward
  }
  return best;
}

HessianBoundReport hessian_bound_check(
    const SemiconcaveApprox& approx,
    const std::vector<Eigen::VectorXd>& points, double slack) {
  const SmoothPlus* g = approx.smoother();
  if (g == nullptr) {
    throw std::logic_error("hessian_bound_check: mode carries no Hessian");
  }
  if (points.empty()) {
    throw std::invalid_argument("hessian_bound_check: no points");
  }
  const double n = approx.family().size();
  const double L = approx.lipschitz();
  HessianBoundReport r;
  r.upper_bound = approx.curvature();
  r.lower_bound =
      -(approx.curvature() + 2.0 * n * (n - 1.0) * L * L * g->sup_second_deriv);
  r.max_eigenvalue = -std::numeric_limits<double>::infinity();
  r.min_eigenvalue = std::numeric_limits<double>::infinity();
  for (const auto& x : points) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(approx.hessian(x));
    r.max_eigenvalue = std::max(r.max_eigenvalue, es.eigenvalues().maxCoeff());
    r.min_eigenvalue = std::min(r.min_eigenvalue, es.eigenvalues().minCoeff());
  }
  r.ok = r.max_eigenvalue <= r.upper_bound + slack &&
         r.min_eigenvalue >= r.lower_bound - slack;
  return r;
}

}  // namespace scmin
