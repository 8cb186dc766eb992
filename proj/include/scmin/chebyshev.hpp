#pragma once

#include <Eigen/Core>
#include <functional>
#include <iosfwd>
#include <string>

#include "scmin/function.hpp"

namespace scmin {

// Tensor-product Chebyshev series on [-1,1]^2 of per-axis degree m:
//   p(x, y) = sum_{i=0}^{m} sum_{j=0}^{m} coeffs(i,j) T_i(x) T_j(y).
struct ChebCoeffs2D {
  int degree = 0;
  Eigen::MatrixXd coeffs;  // (m+1) x (m+1)
};

// Interpolates f at the Chebyshev-Gauss-Lobatto tensor grid
// (cos(pi k/m), cos(pi l/m)), k,l = 0..m (the single node 0 when m = 0),
// via the discrete Chebyshev transform.  Throws std::domain_error naming
// the offending node if f returns a non-finite sample.
ChebCoeffs2D interpolate(const std::function<double(double, double)>& f,
                         int degree);

double cheb_eval(const ChebCoeffs2D& c, double x, double y);

// Coefficient matrix of the partial derivative along axis 0 (x) or 1 (y),
// via the Chebyshev degree-lowering recurrence.  Same storage size; the top
// degree row/column becomes zero.
ChebCoeffs2D cheb_derivative(const ChebCoeffs2D& c, int axis);

// Wraps a coefficient matrix as a C2Function on [-1,1]^2; the gradient and
// Hessian series are differentiated once at construction and evaluated by
// Clenshaw recurrences afterwards.
C2Function as_c2_function(const ChebCoeffs2D& c);

// Interpolates every member of a bivariate family at the same degree.
FunctionFamily interpolate_family(const FunctionFamily& family, int degree);

// CSV serialization, row-major with header "i,j,theta" and 1-based indices.
void write_csv(const ChebCoeffs2D& c, std::ostream& os);
void write_csv(const ChebCoeffs2D& c, const std::string& path);
ChebCoeffs2D read_csv(std::istream& is);

}  // namespace scmin
