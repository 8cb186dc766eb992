#include "scmin/testbed.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace scmin {

namespace {

Eigen::MatrixXd unit_centers(int d) {
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(2 * d, d);
  for (int i = 0; i < d; ++i) {
    c(i, i) = 1.0;
    c(d + i, i) = -1.0;
  }
  return c;
}

C2Function gaussian_bump(const Eigen::VectorXd& center, const Box& domain) {
  C2Function f;
  f.domain = domain;
  f.value = [center](const Eigen::VectorXd& x) {
    return std::exp(-(x - center).squaredNorm() / 2.0);
  };
  f.gradient = [center](const Eigen::VectorXd& x) {
    const Eigen::VectorXd r = x - center;
    return Eigen::VectorXd(-r * std::exp(-r.squaredNorm() / 2.0));
  };
  f.hessian = [center](const Eigen::VectorXd& x) {
    const Eigen::VectorXd r = x - center;
    const double v = std::exp(-r.squaredNorm() / 2.0);
    Eigen::MatrixXd h = r * r.transpose();
    h.diagonal().array() -= 1.0;
    return Eigen::MatrixXd(h * v);
  };
  return f;
}

}  // namespace

FunctionFamily exp_distance_family(int d) {
  if (d < 1) throw std::invalid_argument("exp_distance_family: need d >= 1");
  FunctionFamily fam;
  fam.domain.lo = Eigen::VectorXd::Constant(d, -1.0);
  fam.domain.hi = Eigen::VectorXd::Constant(d, 1.0);
  const Eigen::MatrixXd centers = unit_centers(d);
  fam.members.reserve(2 * d);
  for (int i = 0; i < 2 * d; ++i) {
    fam.members.push_back(gaussian_bump(centers.row(i), fam.domain));
  }
  return fam;
}

double hamiltonian_residual(const Eigen::VectorXd& p, double a) {
  const double kinetic = p.squaredNorm();
  if (a == 0.0) return kinetic;
  return kinetic + 2.0 * std::log(std::abs(a)) * a * a;
}

ExactSolution::ExactSolution(int d, double tie_tolerance_rel)
    : d_(d), tie_rel_(tie_tolerance_rel) {
  if (d < 1) throw std::invalid_argument("ExactSolution: need d >= 1");
  if (tie_rel_ < 0.0) {
    throw std::invalid_argument("ExactSolution: negative tie tolerance");
  }
  centers_ = unit_centers(d);
  family_ = exp_distance_family(d);
}

double ExactSolution::value(const Eigen::VectorXd& x) const {
  double lo = std::exp(-(x.transpose() - centers_.row(0)).squaredNorm() / 2.0);
  for (int i = 1; i < centers_.rows(); ++i) {
    const double v =
        std::exp(-(x.transpose() - centers_.row(i)).squaredNorm() / 2.0);
    lo = std::min(lo, v);
  }
  return lo;
}

void ExactSolution::member_values(const Eigen::VectorXd& x,
                                  double* out) const {
  for (int i = 0; i < centers_.rows(); ++i) {
    out[i] = std::exp(-(x.transpose() - centers_.row(i)).squaredNorm() / 2.0);
  }
}

Eigen::VectorXd ExactSolution::ref_grad(const Eigen::VectorXd& x) const {
  Eigen::VectorXd g(d_);
  ref_grad(x, g);
  return g;
}

void ExactSolution::ref_grad(const Eigen::VectorXd& x,
                             Eigen::VectorXd& out) const {
  const ActiveIndexInfo info = active(x);
  const int i = info.largest_active;
  const Eigen::VectorXd r = x - centers_.row(i).transpose();
  out = -r * std::exp(-r.squaredNorm() / 2.0);
}

ActiveIndexInfo ExactSolution::active(const Eigen::VectorXd& x) const {
  std::vector<double> vals(static_cast<std::size_t>(2 * d_));
  member_values(x, vals.data());
  const double v = *std::min_element(vals.begin(), vals.end());
  return active_info(vals, tie_rel_ * (1.0 + std::abs(v)));
}

ExactSolution exact_solution(int d, double tie_tolerance_rel) {
  return ExactSolution(d, tie_tolerance_rel);
}

double bump(double x) {
  if (std::abs(x) >= 1.0 - 1e-8) return 0.0;
  return std::exp(-1.0 / (1.0 - x * x));
}

double bump_deriv(double x) {
  if (std::abs(x) >= 1.0 - 1e-8) return 0.0;
  const double q = 1.0 - x * x;
  return bump(x) * (-2.0 * x / (q * q));
}

double bump_second_deriv(double x) {
  if (std::abs(x) >= 1.0 - 1e-8) return 0.0;
  const double q = 1.0 - x * x;
  const double s = -2.0 * x / (q * q);  // (d/dx) of the exponent -1/q
  return bump(x) * (s * s - 2.0 * (1.0 + 3.0 * x * x) / (q * q * q));
}

FunctionFamily counterexample_family(bool modified) {
  FunctionFamily fam;
  fam.domain = box1d(-2.0, 2.0);

  C2Function phi1;
  phi1.domain = fam.domain;
  phi1.value = [](const Eigen::VectorXd& x) { return -x[0]; };
  phi1.gradient = [](const Eigen::VectorXd&) {
    return Eigen::VectorXd::Constant(1, -1.0);
  };
  phi1.hessian = [](const Eigen::VectorXd&) {
    return Eigen::MatrixXd::Zero(1, 1);
  };

  C2Function phi2;
  phi2.domain = fam.domain;
  phi2.value = [](const Eigen::VectorXd& x) { return std::exp(x[0]) - 1.0; };
  phi2.gradient = [](const Eigen::VectorXd& x) {
    return Eigen::VectorXd::Constant(1, std::exp(x[0]));
  };
  phi2.hessian = [](const Eigen::VectorXd& x) {
    return Eigen::MatrixXd::Constant(1, 1, std::exp(x[0]));
  };

  C2Function phi3;
  phi3.domain = fam.domain;
  if (modified) {
    // -x^3 + bump(2x): strictly above -x^3 on (-1/2, 1/2), so the pointwise
    // min is untouched while the third member leaves the min near 0.
    phi3.value = [](const Eigen::VectorXd& x) {
      return -x[0] * x[0] * x[0] + bump(2.0 * x[0]);
    };
    phi3.gradient = [](const Eigen::VectorXd& x) {
      return Eigen::VectorXd::Constant(
          1, -3.0 * x[0] * x[0] + 2.0 * bump_deriv(2.0 * x[0]));
    };
    phi3.hessian = [](const Eigen::VectorXd& x) {
      return Eigen::MatrixXd::Constant(
          1, 1, -6.0 * x[0] + 4.0 * bump_second_deriv(2.0 * x[0]));
    };
  } else {
    phi3.value = [](const Eigen::VectorXd& x) { return -x[0] * x[0] * x[0]; };
    phi3.gradient = [](const Eigen::VectorXd& x) {
      return Eigen::VectorXd::Constant(1, -3.0 * x[0] * x[0]);
    };
    phi3.hessian = [](const Eigen::VectorXd& x) {
      return Eigen::MatrixXd::Constant(1, 1, -6.0 * x[0]);
    };
  }

  fam.members = {phi1, phi2, phi3};
  return fam;
}

}  // namespace scmin
