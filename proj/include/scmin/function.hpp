#pragma once

#include <Eigen/Core>
#include <functional>
#include <vector>

namespace scmin {

// Closed axis-aligned box [lo_1, hi_1] x ... x [lo_d, hi_d].
struct Box {
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;

  int dim() const { return static_cast<int>(lo.size()); }
  bool contains(const Eigen::VectorXd& x) const;
  double volume() const;
};

Box box2d(double lo, double hi);
Box box1d(double lo, double hi);

// A twice continuously differentiable function given by callables for the
// value, gradient and Hessian on a box domain.
struct C2Function {
  std::function<double(const Eigen::VectorXd&)> value;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> gradient;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> hessian;
  Box domain;
};

// Finite family {phi_1, ..., phi_n} sharing one domain.
struct FunctionFamily {
  std::vector<C2Function> members;
  Box domain;

  int size() const { return static_cast<int>(members.size()); }
};

}  // namespace scmin
