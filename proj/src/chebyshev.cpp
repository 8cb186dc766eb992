#include "scmin/chebyshev.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "scmin/format.hpp"

namespace scmin {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Chebyshev-Gauss-Lobatto nodes cos(pi k/m), k = 0..m, descending 1 -> -1.
Eigen::VectorXd cgl_nodes(int m) {
  if (m == 0) return Eigen::VectorXd::Zero(1);
  Eigen::VectorXd x(m + 1);
  for (int k = 0; k <= m; ++k) x[k] = std::cos(kPi * k / m);
  return x;
}

// Discrete Chebyshev transform on CGL samples: with gamma_i = m for
// i in {0, m} and m/2 otherwise,
//   b_i = (1/gamma_i) sum_k'' f(x_k) cos(i pi k / m),
// where '' halves the k = 0 and k = m terms.
Eigen::VectorXd transform_1d(const Eigen::VectorXd& samples, int m) {
  if (m == 0) return samples;
  Eigen::VectorXd b(m + 1);
  for (int i = 0; i <= m; ++i) {
    double acc = 0.0;
    for (int k = 0; k <= m; ++k) {
      const double w = (k == 0 || k == m) ? 0.5 : 1.0;
      acc += w * samples[k] * std::cos(kPi * i * k / m);
    }
    const double gamma = (i == 0 || i == m) ? m : m / 2.0;
    b[i] = acc / gamma;
  }
  return b;
}

// Clenshaw evaluation of sum_k b_k T_k(x).
double clenshaw(const double* b, int len, double x) {
  double u1 = 0.0, u2 = 0.0;
  for (int k = len - 1; k >= 1; --k) {
    const double u = 2.0 * x * u1 - u2 + b[k];
    u2 = u1;
    u1 = u;
  }
  return x * u1 - u2 + b[0];
}

}  // namespace

ChebCoeffs2D interpolate(const std::function<double(double, double)>& f,
                         int degree) {
  if (degree < 0) throw std::invalid_argument("interpolate: negative degree");
  if (!f) throw std::invalid_argument("interpolate: null function");
  const int m = degree;
  const Eigen::VectorXd x = cgl_nodes(m);

  Eigen::MatrixXd samples(m + 1, m + 1);
  for (int k = 0; k <= m; ++k) {
    for (int l = 0; l <= m; ++l) {
      const double v = f(x[k], x[l]);
      if (!std::isfinite(v)) {
        std::ostringstream msg;
        msg << "interpolate: non-finite sample at node (k=" << k << ", l=" << l
            << "), x=(" << x[k] << ", " << x[l] << ")";
        throw std::domain_error(msg.str());
      }
      samples(k, l) = v;
    }
  }

  // Separable transform: first along axis 0 (rows index T_i(x1)), then 1.
  Eigen::MatrixXd half(m + 1, m + 1);
  for (int l = 0; l <= m; ++l) half.col(l) = transform_1d(samples.col(l), m);
  ChebCoeffs2D c;
  c.degree = m;
  c.coeffs.resize(m + 1, m + 1);
  for (int i = 0; i <= m; ++i) {
    c.coeffs.row(i) = transform_1d(half.row(i).transpose(), m).transpose();
  }
  return c;
}

double cheb_eval(const ChebCoeffs2D& c, double x, double y) {
  const int len = c.degree + 1;
  // sum_j T_j(y) * (sum_i coeffs(i,j) T_i(x)); columns are contiguous.
  Eigen::VectorXd inner(len);
  for (int j = 0; j < len; ++j) {
    inner[j] = clenshaw(c.coeffs.col(j).data(), len, x);
  }
  return clenshaw(inner.data(), len, y);
}

ChebCoeffs2D cheb_derivative(const ChebCoeffs2D& c, int axis) {
  if (axis != 0 && axis != 1) {
    throw std::invalid_argument("cheb_derivative: axis must be 0 or 1");
  }
  const int m = c.degree;
  ChebCoeffs2D out;
  out.degree = m;
  out.coeffs = Eigen::MatrixXd::Zero(m + 1, m + 1);
  if (m == 0) return out;

  // Degree-lowering recurrence d_k = d_{k+2} + 2(k+1) b_{k+1}, d_0 halved.
  auto derive = [m](const Eigen::VectorXd& b) {
    Eigen::VectorXd d = Eigen::VectorXd::Zero(m + 1);
    for (int k = m - 1; k >= 0; --k) {
      d[k] = (k + 2 <= m - 1 ? d[k + 2] : 0.0) + 2.0 * (k + 1) * b[k + 1];
    }
    d[0] /= 2.0;
    return d;
  };

  if (axis == 0) {
    for (int j = 0; j <= m; ++j) out.coeffs.col(j) = derive(c.coeffs.col(j));
  } else {
    for (int i = 0; i <= m; ++i) {
      out.coeffs.row(i) = derive(c.coeffs.row(i).transpose()).transpose();
    }
  }
  return out;
}

C2Function as_c2_function(const ChebCoeffs2D& c) {
  const auto cx = cheb_derivative(c, 0);
  const auto cy = cheb_derivative(c, 1);
  const auto cxx = cheb_derivative(cx, 0);
  const auto cxy = cheb_derivative(cx, 1);
  const auto cyy = cheb_derivative(cy, 1);

  C2Function f;
  f.domain = box2d(-1.0, 1.0);
  f.value = [c](const Eigen::VectorXd& x) { return cheb_eval(c, x[0], x[1]); };
  f.gradient = [cx, cy](const Eigen::VectorXd& x) {
    Eigen::VectorXd g(2);
    g[0] = cheb_eval(cx, x[0], x[1]);
    g[1] = cheb_eval(cy, x[0], x[1]);
    return g;
  };
  f.hessian = [cxx, cxy, cyy](const Eigen::VectorXd& x) {
    Eigen::MatrixXd h(2, 2);
    h(0, 0) = cheb_eval(cxx, x[0], x[1]);
    h(0, 1) = h(1, 0) = cheb_eval(cxy, x[0], x[1]);
    h(1, 1) = cheb_eval(cyy, x[0], x[1]);
    return h;
  };
  return f;
}

FunctionFamily interpolate_family(const FunctionFamily& family, int degree) {
  if (family.domain.dim() != 2) {
    throw std::invalid_argument("interpolate_family: domain must be 2-D");
  }
  // Members are sampled on [-1,1]^2; reject other boxes rather than rescale.
  if (family.domain.lo[0] != -1.0 || family.domain.hi[0] != 1.0 ||
      family.domain.lo[1] != -1.0 || family.domain.hi[1] != 1.0) {
    throw std::invalid_argument("interpolate_family: domain must be [-1,1]^2");
  }
  FunctionFamily out;
  out.domain = family.domain;
  out.members.reserve(family.members.size());
  for (const auto& member : family.members) {
    auto sample = [&member](double x, double y) {
      Eigen::VectorXd p(2);
      p << x, y;
      return member.value(p);
    };
    out.members.push_back(as_c2_function(interpolate(sample, degree)));
  }
  return out;
}

void write_csv(const ChebCoeffs2D& c, std::ostream& os) {
  os << "i,j,theta\n";
  for (int i = 0; i <= c.degree; ++i) {
    for (int j = 0; j <= c.degree; ++j) {
      os << (i + 1) << ',' << (j + 1) << ',' << format_double(c.coeffs(i, j))
         << '\n';
    }
  }
}

void write_csv(const ChebCoeffs2D& c, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("write_csv: cannot open " + path);
  write_csv(c, os);
  if (!os.good()) throw std::runtime_error("write_csv: write failed: " + path);
}

ChebCoeffs2D read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "i,j,theta") {
    throw std::runtime_error("read_csv: missing i,j,theta header");
  }
  std::vector<std::tuple<int, int, double>> entries;
  int max_index = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    int i = 0, j = 0;
    double theta = 0.0;
    char comma1 = 0, comma2 = 0;
    if (!(row >> i >> comma1 >> j >> comma2 >> theta) || comma1 != ',' ||
        comma2 != ',') {
      throw std::runtime_error("read_csv: malformed row: " + line);
    }
    if (i < 1 || j < 1) throw std::runtime_error("read_csv: indices are 1-based");
    entries.emplace_back(i, j, theta);
    max_index = std::max({max_index, i, j});
  }
  if (entries.empty()) throw std::runtime_error("read_csv: no rows");
  ChebCoeffs2D c;
  c.degree = max_index - 1;
  c.coeffs = Eigen::MatrixXd::Zero(max_index, max_index);
  for (const auto& [i, j, theta] : entries) c.coeffs(i - 1, j - 1) = theta;
  return c;
}

}  // namespace scmin
