#include "scmin/metrics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "scmin/parallel.hpp"

namespace scmin {

namespace {

int find_delta(const std::vector<double>& deltas, double delta) {
  for (std::size_t k = 0; k < deltas.size(); ++k) {
    if (deltas[k] == delta) return static_cast<int>(k);
  }
  throw std::out_of_range("EvaluationGrid: delta was not precomputed");
}

struct SweepArrays {
  std::vector<double> value_err;
  std::vector<double> grad_err;
  std::vector<double> ham_res;
};

// One pass over the full grid in flat-index order; rows are distributed
// over workers but every per-point result lands in its own slot, so the
// numbers cannot depend on the partitioning.
SweepArrays sweep_grid(const SemiconcaveApprox& u, const EvaluationGrid& grid,
                       const Hamiltonian& H, int workers) {
  const int n = grid.n;
  SweepArrays s;
  s.value_err.resize(static_cast<std::size_t>(n) * n);
  s.grad_err.resize(s.value_err.size());
  s.ham_res.resize(s.value_err.size());
  parallel_blocks(n, workers, [&](int row_begin, int row_end) {
    Eigen::VectorXd x(2);
    for (int i = row_begin; i < row_end; ++i) {
      x[0] = grid.axis[i];
      for (int j = 0; j < n; ++j) {
        x[1] = grid.axis[j];
        const int p = grid.index(i, j);
        const auto [val, grad] = u.value_and_gradient(x);
        s.value_err[p] = std::abs(grid.exact_value[p] - val);
        const double dx = grid.ref_grad[2 * p] - grad[0];
        const double dy = grid.ref_grad[2 * p + 1] - grad[1];
        s.grad_err[p] = std::sqrt(dx * dx + dy * dy);
        s.ham_res[p] = std::abs(H(grad, val));
      }
    }
  });
  return s;
}

MetricsReport aggregate(const SweepArrays& s, const EvaluationGrid& grid,
                        double delta, bool dc_normalized) {
  const auto& mask = grid.mask_for(delta);
  MetricsReport r;
  r.delta = delta;
  r.omega_fraction = grid.fraction_for(delta);
  long count = 0;
  double sum_g = 0.0, sum_h = 0.0;
  for (std::size_t p = 0; p < mask.size(); ++p) {
    if (!mask[p]) continue;
    ++count;
    r.d_c = std::max(r.d_c, s.value_err[p]);
    r.d_winf = std::max(r.d_winf, s.grad_err[p]);
    r.d_hinf = std::max(r.d_hinf, s.ham_res[p]);
    sum_g += s.grad_err[p];
    sum_h += s.ham_res[p];
  }
  if (count == 0) {
    throw std::runtime_error("compute_metrics: Omega_delta mask is empty");
  }
  r.d_w1 = sum_g / count;
  r.d_h1 = sum_h / count;
  if (dc_normalized) r.d_c /= static_cast<double>(count);
  return r;
}

double lp_exponent_sum(double k_term, double p, double sup_v, double sup_g) {
  // A^(1/p) * ( ||v||^{1/p} ||g||^{(p-1)/p} + ||v||^{1/(1+p)} ||g||^{p/(1+p)} )
  const double a = std::pow(k_term, 1.0 / p);
  return a * (std::pow(sup_v, 1.0 / p) * std::pow(sup_g, (p - 1.0) / p) +
              std::pow(sup_v, 1.0 / (1.0 + p)) * std::pow(sup_g, p / (1.0 + p)));
}

// Trapezoid weight along one axis.
double axis_weight(int k, int n, double h) {
  return (k == 0 || k == n - 1) ? h / 2.0 : h;
}

}  // namespace

const std::vector<std::uint8_t>& EvaluationGrid::mask_for(double delta) const {
  return masks[find_delta(deltas, delta)];
}

double EvaluationGrid::fraction_for(double delta) const {
  return fractions[find_delta(deltas, delta)];
}

EvaluationGrid build_grid(int n, const ExactSolution& exact,
                          const std::vector<double>& deltas,
                          double tie_tolerance_rel, int workers) {
  if (n < 2) throw std::invalid_argument("build_grid: need n >= 2");
  if (exact.dim() != 2) throw std::invalid_argument("build_grid: grid is 2-D");
  if (tie_tolerance_rel < 0.0) {
    throw std::invalid_argument("build_grid: negative tie tolerance");
  }
  for (double d : deltas) {
    if (d < 0.0) throw std::invalid_argument("build_grid: negative delta");
  }

  EvaluationGrid g;
  g.n = n;
  g.tie_tolerance_rel = tie_tolerance_rel;
  g.deltas = deltas;
  g.axis.resize(n);
  for (int i = 0; i < n; ++i) {
    g.axis[i] = -1.0 + 2.0 * i / (n - 1);
  }
  const std::size_t total = static_cast<std::size_t>(n) * n;
  g.exact_value.resize(total);
  g.ref_grad.resize(2 * total);
  g.masks.assign(deltas.size(), std::vector<std::uint8_t>(total, 0));

  const int members = exact.members();
  parallel_blocks(n, workers, [&](int row_begin, int row_end) {
    std::vector<double> vals(members);
    Eigen::VectorXd x(2), grad(2);
    for (int i = row_begin; i < row_end; ++i) {
      x[0] = g.axis[i];
      for (int j = 0; j < n; ++j) {
        x[1] = g.axis[j];
        const int p = g.index(i, j);
        exact.member_values(x, vals.data());
        const double v = *std::min_element(vals.begin(), vals.end());
        g.exact_value[p] = v;
        exact.ref_grad(x, grad);
        g.ref_grad[2 * p] = grad[0];
        g.ref_grad[2 * p + 1] = grad[1];
        const double tol = tie_tolerance_rel * (1.0 + std::abs(v));
        for (std::size_t k = 0; k < deltas.size(); ++k) {
          bool member = true;
          for (int m = 0; m < members; ++m) {
            const double gap = vals[m] - v;
            if (gap > tol && gap < deltas[k]) {
              member = false;
              break;
            }
          }
          g.masks[k][p] = member ? 1 : 0;
        }
      }
    }
  });

  g.fractions.resize(deltas.size());
  for (std::size_t k = 0; k < deltas.size(); ++k) {
    long count = 0;
    for (auto b : g.masks[k]) count += b;
    g.fractions[k] = static_cast<double>(count) / static_cast<double>(total);
  }
  return g;
}

std::vector<MetricsReport> compute_metrics_batch(
    const SemiconcaveApprox& u, const EvaluationGrid& grid,
    const std::vector<double>& deltas, const Hamiltonian& H,
    const ExactSolution& ref, bool dc_normalized, int workers) {
  if (!H) throw std::invalid_argument("compute_metrics: null Hamiltonian");
  if (u.family().domain.dim() != 2 || ref.dim() != 2) {
    throw std::invalid_argument("compute_metrics: 2-D domains required");
  }
  const auto start = std::chrono::steady_clock::now();
  const SweepArrays arrays = sweep_grid(u, grid, H, workers);
  std::vector<MetricsReport> out;
  out.reserve(deltas.size());
  for (double delta : deltas) {
    MetricsReport r = aggregate(arrays, grid, delta, dc_normalized);
    r.method = to_string(u.mode());
    r.epsilon = u.epsilon();
    out.push_back(std::move(r));
  }
  const auto end = std::chrono::steady_clock::now();
  const double ms =
      std::chrono::duration<double, std::milli>(end - start).count();
  for (auto& r : out) r.runtime_ms = ms;
  return out;
}

MetricsReport compute_metrics(const SemiconcaveApprox& u,
                              const EvaluationGrid& grid, double delta,
                              const Hamiltonian& H, const ExactSolution& ref,
                              bool dc_normalized, int workers) {
  return compute_metrics_batch(u, grid, {delta}, H, ref, dc_normalized,
                               workers)[0];
}

double box_constant(const Box& box) {
  double worst = 0.0;
  for (int i = 0; i < box.dim(); ++i) {
    worst = std::max(worst, 1.0 / (box.hi[i] - box.lo[i]));
  }
  return box.volume() * worst;
}

std::vector<CoareaReport> coarea_check_multi(
    const std::function<double(const Eigen::VectorXd&)>& value,
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& grad,
    const std::vector<double>& ps, const Box& box, int grid_per_axis,
    double slack) {
  for (double p : ps) {
    if (!(p >= 1.0)) throw std::invalid_argument("coarea_check: need p >= 1");
  }
  if (grid_per_axis < 2) {
    throw std::invalid_argument("coarea_check: need >= 2 points/axis");
  }
  const int d = box.dim();
  std::vector<int> idx(d, 0);
  std::vector<double> h(d);
  for (int k = 0; k < d; ++k) {
    h[k] = (box.hi[k] - box.lo[k]) / (grid_per_axis - 1);
  }

  Eigen::VectorXd x(d);
  std::vector<double> int_p(ps.size(), 0.0);
  double sup_v = 0.0, sup_g = 0.0;
  while (true) {
    double w = 1.0;
    for (int k = 0; k < d; ++k) {
      x[k] = box.lo[k] + h[k] * idx[k];
      w *= axis_weight(idx[k], grid_per_axis, h[k]);
    }
    const double gn = grad(x).norm();
    sup_v = std::max(sup_v, std::abs(value(x)));
    sup_g = std::max(sup_g, gn);
    for (std::size_t q = 0; q < ps.size(); ++q) {
      int_p[q] += w * std::pow(gn, ps[q]);
    }
    int k = 0;
    while (k < d && ++idx[k] == grid_per_axis) idx[k++] = 0;
    if (k == d) break;
  }

  std::vector<CoareaReport> out(ps.size());
  for (std::size_t q = 0; q < ps.size(); ++q) {
    const double p = ps[q];
    CoareaReport& r = out[q];
    r.p = p;
    r.lhs = std::pow(int_p[q], 1.0 / p);
    const double k_term =
        2.0 * box_constant(box) * d * d +
        std::pow(static_cast<double>(d), p / 2.0) * box.volume();
    r.rhs = lp_exponent_sum(k_term, p, sup_v, sup_g);
    r.ok = r.lhs <= r.rhs * (1.0 + slack);
  }
  return out;
}

CoareaReport coarea_check(
    const std::function<double(const Eigen::VectorXd&)>& value,
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& grad,
    double p, const Box& box, int grid_per_axis, double slack) {
  return coarea_check_multi(value, grad, {p}, box, grid_per_axis, slack)[0];
}

GlobalBoundReport global_error_bound_check(const ExactSolution& exact,
                                           const FunctionFamily& approx_family,
                                           const SmoothPlus& g, double p,
                                           int grid_per_axis, double slack) {
  if (!(p >= 1.0)) throw std::invalid_argument("need p >= 1");
  const int n = exact.members();
  if (approx_family.size() != n) {
    throw std::invalid_argument("family sizes differ");
  }
  const Box& box = approx_family.domain;
  const int d = box.dim();
  if (d != 2 || exact.dim() != 2) {
    throw std::invalid_argument("global_error_bound_check: 2-D only");
  }

  const double h = (box.hi[0] - box.lo[0]) / (grid_per_axis - 1);
  Eigen::VectorXd x(2);
  std::vector<double> vals(n);

  double e0 = 0.0;        // max_i sup |phi_i - phi_{i,m}|
  double l_m = 0.0;       // sup |grad phi_{i,m}|
  double l_exact = 0.0;   // sup |grad phi_i|
  double eq1_lhs = 0.0;
  double int_p = 0.0;

  for (int i = 0; i < grid_per_axis; ++i) {
    x[0] = box.lo[0] + h * i;
    const double wi = axis_weight(i, grid_per_axis, h);
    for (int j = 0; j < grid_per_axis; ++j) {
      x[1] = box.lo[1] + h * j;
      const double w = wi * axis_weight(j, grid_per_axis, h);

      for (int m = 0; m < n; ++m) {
        vals[m] = approx_family.members[m].value(x);
        e0 = std::max(e0, std::abs(vals[m] - exact.family().members[m].value(x)));
      }
      const SoftMinEval eval = psi_smooth(vals, g);
      eq1_lhs = std::max(eq1_lhs, std::abs(exact.value(x) - eval.value));

      Eigen::Vector2d grad_m = Eigen::Vector2d::Zero();
      for (int m = 0; m < n; ++m) {
        const Eigen::VectorXd gm = approx_family.members[m].gradient(x);
        l_m = std::max(l_m, gm.norm());
        grad_m += eval.weights[m] * gm;
        l_exact = std::max(l_exact, exact.family().members[m].gradient(x).norm());
      }
      const double gn = (grad_m - exact.ref_grad(x)).norm();
      int_p += w * std::pow(gn, p);
    }
  }

  GlobalBoundReport r;
  r.p = p;
  r.eq1_lhs = eq1_lhs;
  r.eq1_rhs = e0 + (n - 1.0) * g.epsilon;
  r.eq2_lhs = std::pow(int_p, 1.0 / p);
  const double k_term = 2.0 * box_constant(box) * d * d +
                        std::pow(static_cast<double>(d), p / 2.0) * box.volume();
  r.eq2_rhs = lp_exponent_sum(k_term, p, e0 + (n - 1.0) * g.epsilon,
                              l_m + l_exact);
  r.ok = r.eq1_lhs <= r.eq1_rhs * (1.0 + slack) &&
         r.eq2_lhs <= r.eq2_rhs * (1.0 + slack);
  return r;
}

LocalizedBoundReport localized_bound_check(const ExactSolution& exact,
                                           const FunctionFamily& approx_family,
                                           const SmoothPlus& g, double delta,
                                           const EvaluationGrid& grid,
                                           double slack, int workers) {
  const int n = exact.members();
  if (approx_family.size() != n) {
    throw std::invalid_argument("family sizes differ");
  }
  LocalizedBoundReport r;
  r.delta = delta;
  r.epsilon = g.epsilon;
  r.epsilon_admissible = g.epsilon < delta / (2.0 * (n - 1.0));

  const auto& mask = grid.mask_for(delta);
  const int nn = grid.n;

  // One pass collects the masked sup |sum_i p_i grad phi_{i,m} - grad v_n|
  // together with the member sup errors and the exact-family Lipschitz
  // constant the bound is stated with (all on the same axis grid).
  std::vector<double> row_sup(nn, 0.0), row_e0(nn, 0.0), row_e1(nn, 0.0),
      row_l(nn, 0.0);
  parallel_blocks(nn, workers, [&](int row_begin, int row_end) {
    std::vector<double> vals(n);
    Eigen::VectorXd x(2);
    for (int i = row_begin; i < row_end; ++i) {
      x[0] = grid.axis[i];
      for (int j = 0; j < nn; ++j) {
        x[1] = grid.axis[j];
        const int p = grid.index(i, j);
        for (int m = 0; m < n; ++m) {
          vals[m] = approx_family.members[m].value(x);
          row_e0[i] = std::max(
              row_e0[i],
              std::abs(vals[m] - exact.family().members[m].value(x)));
        }
        Eigen::Vector2d grad_m = Eigen::Vector2d::Zero();
        const SoftMinEval eval = psi_smooth(vals, g);
        for (int m = 0; m < n; ++m) {
          const Eigen::VectorXd gm = approx_family.members[m].gradient(x);
          const Eigen::VectorXd ge = exact.family().members[m].gradient(x);
          row_e1[i] = std::max(row_e1[i], (gm - ge).norm());
          row_l[i] = std::max(row_l[i], ge.norm());
          grad_m += eval.weights[m] * gm;
        }
        if (!mask[p]) continue;
        const double dx = grad_m[0] - grid.ref_grad[2 * p];
        const double dy = grad_m[1] - grid.ref_grad[2 * p + 1];
        row_sup[i] = std::max(row_sup[i], std::sqrt(dx * dx + dy * dy));
      }
    }
  });

  double lhs = 0.0, e0 = 0.0, e1 = 0.0, l_exact = 0.0;
  for (int i = 0; i < nn; ++i) {
    lhs = std::max(lhs, row_sup[i]);
    e0 = std::max(e0, row_e0[i]);
    e1 = std::max(e1, row_e1[i]);
    l_exact = std::max(l_exact, row_l[i]);
  }

  const double gp0 = g.deriv(0.0);
  const double gph = g.deriv(delta / 2.0);
  r.lhs = lhs;
  r.rhs = 2.0 * l_exact * (gp0 + 1.0 - std::pow(gph, n - 1)) +
          2.0 * n * (n - 1.0) * l_exact * g.sup_second_deriv * e0 + e1;
  r.ok = !r.epsilon_admissible || r.lhs <= r.rhs * (1.0 + slack) + 1e-8;
  return r;
}

void write_results_csv(const std::vector<MetricsReport>& rows,
                       std::ostream& os) {
  os << "method,m,epsilon,delta,D_C,D_W1,D_Winf,D_H1,D_Hinf,omega_fraction,"
        "runtime_ms\n";
  for (const auto& r : rows) {
    os << r.method << ',' << r.degree << ',' << format_double(r.epsilon) << ','
       << format_double(r.delta) << ',' << format_double(r.d_c) << ','
       << format_double(r.d_w1) << ',' << format_double(r.d_winf) << ','
       << format_double(r.d_h1) << ',' << format_double(r.d_hinf) << ','
       << format_double(r.omega_fraction) << ','
       << format_double(r.runtime_ms) << '\n';
  }
}

}  // namespace scmin
