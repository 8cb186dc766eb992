#include "scmin/function.hpp"

#include <stdexcept>

namespace scmin {

bool Box::contains(const Eigen::VectorXd& x) const {
  if (x.size() != lo.size()) return false;
  for (int i = 0; i < lo.size(); ++i) {
    if (x[i] < lo[i] || x[i] > hi[i]) return false;
  }
  return true;
}

double Box::volume() const {
  double v = 1.0;
  for (int i = 0; i < lo.size(); ++i) v *= hi[i] - lo[i];
  return v;
}

Box box2d(double lo, double hi) {
  if (!(lo < hi)) throw std::invalid_argument("box2d: need lo < hi");
  Box b;
  b.lo = Eigen::Vector2d::Constant(lo);
  b.hi = Eigen::Vector2d::Constant(hi);
  return b;
}

Box box1d(double lo, double hi) {
  if (!(lo < hi)) throw std::invalid_argument("box1d: need lo < hi");
  Box b;
  b.lo = Eigen::VectorXd::Constant(1, lo);
  b.hi = Eigen::VectorXd::Constant(1, hi);
  return b;
}

}  // namespace scmin
