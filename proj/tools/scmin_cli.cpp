// Command-line driver: convergence experiments, the active-set table, the
// invariant suites, and the closed-form point check on the exp-distance
// testbed.  Exit codes: 0 ok, 1 usage, 2 I/O, 3 invariant failure.

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "scmin/checks.hpp"
#include "scmin/format.hpp"
#include "scmin/metrics.hpp"
#include "scmin/parallel.hpp"
#include "scmin/semiconcave.hpp"
#include "scmin/chebyshev.hpp"
#include "scmin/softmin.hpp"
#include "scmin/testbed.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;
constexpr int kExitInvariant = 3;

struct RunConfig {
  std::vector<int> degrees = {2, 4, 6, 8, 10};
  std::vector<double> epsilons = {1e-4, 1e-2, 1e-1};
  std::vector<double> deltas = {0.0, 1e-3, 1e-2, 1e-1};
  std::vector<std::string> methods = {"moreau", "lse"};
  int grid = 1001;
  int dim = 2;
  std::string out = ".";
  int workers = 0;
  bool dc_normalized = false;
};

int validate(const RunConfig& c, std::string& why) {
  if (c.degrees.empty() || c.epsilons.empty() || c.deltas.empty() ||
      c.methods.empty()) {
    why = "degrees, epsilons, deltas, and methods must be non-empty";
    return kExitUsage;
  }
  for (int m : c.degrees) {
    if (m < 1) {
      why = "degrees must be >= 1";
      return kExitUsage;
    }
  }
  for (double e : c.epsilons) {
    if (!(e > 0.0)) {
      why = "epsilons must be > 0";
      return kExitUsage;
    }
  }
  for (double d : c.deltas) {
    if (d < 0.0) {
      why = "deltas must be >= 0";
      return kExitUsage;
    }
  }
  for (const std::string& m : c.methods) {
    if (m != "moreau" && m != "lse") {
      why = "unknown method '" + m + "' (expected moreau or lse)";
      return kExitUsage;
    }
  }
  if (c.grid < 2) {
    why = "grid must be >= 2";
    return kExitUsage;
  }
  if (c.dim != 2) {
    why = "only the planar testbed (--dim 2) is wired up";
    return kExitUsage;
  }
  return kExitOk;
}

std::ofstream open_output(const std::string& dir, const std::string& name,
                          int& status) {
  std::ofstream os(dir + "/" + name);
  if (!os) {
    std::cerr << "cannot open " << dir << "/" << name << " for writing\n";
    status = kExitIo;
  }
  return os;
}

scmin::Hamiltonian testbed_hamiltonian() {
  return [](const Eigen::VectorXd& p, double a) {
    return scmin::hamiltonian_residual(p, a);
  };
}

int cmd_run(const RunConfig& cfg) {
  std::string why;
  if (int rc = validate(cfg, why); rc != kExitOk) {
    std::cerr << why << '\n';
    return rc;
  }
  const int workers = scmin::resolve_workers(cfg.workers);
  const scmin::ExactSolution exact = scmin::exact_solution(cfg.dim);
  const scmin::EvaluationGrid grid =
      scmin::build_grid(cfg.grid, exact, cfg.deltas, 1e-12, workers);
  const scmin::Hamiltonian H = testbed_hamiltonian();

  std::vector<scmin::MetricsReport> rows;
  for (const std::string& method : cfg.methods) {
    const scmin::MinMode mode = method == "moreau"
                                    ? scmin::MinMode::Moreau
                                    : scmin::MinMode::LogSumExp;
    for (int m : cfg.degrees) {
      const scmin::FunctionFamily fam_m =
          scmin::interpolate_family(exact.family(), m);
      for (double eps : cfg.epsilons) {
        const scmin::SemiconcaveApprox u(fam_m, mode, eps,
                                         /*constants_grid=*/2);
        std::vector<scmin::MetricsReport> batch = scmin::compute_metrics_batch(
            u, grid, cfg.deltas, H, exact, cfg.dc_normalized, workers);
        for (auto& r : batch) {
          r.degree = m;
          rows.push_back(std::move(r));
        }
      }
    }
  }

  int status = kExitOk;
  {
    std::ofstream os = open_output(cfg.out, "results.csv", status);
    if (status != kExitOk) return status;
    scmin::write_results_csv(rows, os);
  }

  // Plot data: one file per metric; one row per (delta, m), one column per
  // (method, epsilon) series.
  const std::vector<std::pair<std::string, double scmin::MetricsReport::*>>
      metrics = {{"D_C", &scmin::MetricsReport::d_c},
                 {"D_W1", &scmin::MetricsReport::d_w1},
                 {"D_Winf", &scmin::MetricsReport::d_winf},
                 {"D_H1", &scmin::MetricsReport::d_h1},
                 {"D_Hinf", &scmin::MetricsReport::d_hinf}};
  const auto find_row = [&rows](const std::string& method, int m, double eps,
                                double delta) -> const scmin::MetricsReport& {
    for (const auto& r : rows) {
      if (r.method == method && r.degree == m && r.epsilon == eps &&
          r.delta == delta) {
        return r;
      }
    }
    throw std::logic_error("missing metrics row");
  };
  std::vector<std::string> method_names;
  for (const std::string& method : cfg.methods) {
    method_names.push_back(scmin::to_string(
        method == "moreau" ? scmin::MinMode::Moreau : scmin::MinMode::LogSumExp));
  }
  for (const auto& [name, field] : metrics) {
    std::ofstream os = open_output(cfg.out, "metric_" + name + ".csv", status);
    if (status != kExitOk) return status;
    os << "delta,m";
    for (const std::string& mn : method_names) {
      for (double eps : cfg.epsilons) {
        os << ',' << mn << "_eps" << scmin::format_double(eps);
      }
    }
    os << '\n';
    for (double delta : cfg.deltas) {
      for (int m : cfg.degrees) {
        os << scmin::format_double(delta) << ',' << m;
        for (const std::string& mn : method_names) {
          for (double eps : cfg.epsilons) {
            os << ',' << scmin::format_double(find_row(mn, m, eps, delta).*field);
          }
        }
        os << '\n';
      }
    }
  }

  std::cout << "wrote " << rows.size() << " rows to " << cfg.out
            << "/results.csv and " << metrics.size()
            << " plot files (grid " << cfg.grid << ", workers " << workers
            << ")\n";
  return kExitOk;
}

int cmd_table1(int grid, std::vector<double> deltas, const std::string& out,
               int workers_flag) {
  if (grid < 2) {
    std::cerr << "grid must be >= 2\n";
    return kExitUsage;
  }
  for (double d : deltas) {
    if (d < 0.0) {
      std::cerr << "deltas must be >= 0\n";
      return kExitUsage;
    }
  }
  const int workers = scmin::resolve_workers(workers_flag);
  const scmin::ExactSolution exact = scmin::exact_solution(2);
  const scmin::EvaluationGrid g =
      scmin::build_grid(grid, exact, deltas, 1e-12, workers);
  int status = kExitOk;
  std::ofstream os = open_output(out, "table1.csv", status);
  if (status != kExitOk) return status;
  os << "delta,fraction\n";
  std::printf("%-12s %s\n", "delta", "fraction");
  for (std::size_t k = 0; k < deltas.size(); ++k) {
    std::printf("%-12s %.6f\n", scmin::format_double(deltas[k]).c_str(),
                g.fractions[k]);
    os << scmin::format_double(deltas[k]) << ','
       << scmin::format_double(g.fractions[k]) << '\n';
  }
  return kExitOk;
}

void print_suite(const scmin::CheckSuite& s) {
  for (const auto& it : s.items) {
    std::printf("  %-4s %-42s worst=% .3e tol=%.1e\n",
                it.pass ? "ok" : "FAIL", it.invariant.c_str(), it.worst,
                it.tolerance);
  }
}

int cmd_check(const std::string& scope, unsigned seed, int workers_flag,
              bool broken_fixture) {
  const int workers = scmin::resolve_workers(workers_flag);
  std::printf("check scope=%s seed=%u\n", scope.c_str(), seed);
  std::vector<scmin::CheckSuite> suites;
  if (broken_fixture) {
    if (scope != "softmin") {
      std::cerr << "--broken-smoother-fixture requires scope softmin\n";
      return kExitUsage;
    }
    // Checker self-test: a smoother whose derivative leaves [0,1] must
    // surface as a simplex violation.
    scmin::SmoothPlus bad = scmin::moreau_plus(1e-2);
    bad.kind = scmin::PlusKind::Custom;
    const scmin::SmoothPlus base = scmin::moreau_plus(1e-2);
    bad.value = [base](double s) { return 1.5 * base.value(s); };
    bad.deriv = [base](double s) { return 1.5 * base.deriv(s); };
    bad.second_deriv = [base](double s) { return 1.5 * base.second_deriv(s); };
    bad.sup_second_deriv = 1.5 * base.sup_second_deriv;
    suites.push_back(scmin::run_softmin_checks_with({bad}, seed, 10000));
  } else {
    if (scope == "axioms" || scope == "all") {
      suites.push_back(scmin::run_axiom_checks());
    }
    if (scope == "softmin" || scope == "all") {
      suites.push_back(scmin::run_softmin_checks(seed));
    }
    if (scope == "bounds" || scope == "all") {
      suites.push_back(scmin::run_bounds_checks(seed, workers));
    }
    if (scope == "coarea" || scope == "all") {
      suites.push_back(scmin::run_coarea_checks(seed, 200, workers));
    }
  }
  bool all_pass = true;
  const scmin::CheckItem* first_fail = nullptr;
  for (const auto& s : suites) {
    std::printf("suite %s\n", s.name.c_str());
    print_suite(s);
    if (!s.pass()) {
      all_pass = false;
      if (!first_fail) first_fail = s.first_failure();
    }
  }
  if (!all_pass) {
    std::cerr << "invariant failed: " << first_fail->invariant << " (worst "
              << scmin::format_double(first_fail->worst) << " > tol "
              << scmin::format_double(first_fail->tolerance) << ")\n";
    return kExitInvariant;
  }
  std::printf("all invariants hold\n");
  return kExitOk;
}

int cmd_pointcheck() {
  const scmin::ExactSolution exact = scmin::exact_solution(2);
  Eigen::VectorXd x(2);
  x << -0.5, -0.5;
  const double c = std::exp(-1.25);
  const double vd = exact.value(x);

  Eigen::VectorXd g1(2), g2(2), lse_target(2);
  g1 << 1.5 * c, 0.5 * c;        // grad phi_1 = (3,1) e^{-5/4} / 2
  g2 << 0.5 * c, 1.5 * c;        // grad phi_2 = (1,3) e^{-5/4} / 2
  lse_target << c, c;            // (grad phi_1 + grad phi_2) / 2

  std::printf("x = (-1/2, -1/2)\n");
  std::printf("v_d(x)      = %.16g   (e^{-5/4} = %.16g)\n", vd, c);
  std::printf("grad phi_1  = (%.16g, %.16g)   [(3,1) e^{-5/4}/2]\n", g1[0],
              g1[1]);
  std::printf("grad phi_2  = (%.16g, %.16g)   [(1,3) e^{-5/4}/2]\n", g2[0],
              g2[1]);

  const scmin::SemiconcaveApprox um(exact.family(), scmin::MinMode::Moreau,
                                    1e-3, 2);
  const scmin::SemiconcaveApprox ul(exact.family(), scmin::MinMode::LogSumExp,
                                    1e-3, 2);
  const Eigen::VectorXd gm = um.gradient(x);
  const Eigen::VectorXd gl = ul.gradient(x);
  const double dev_m = (gm - g2).cwiseAbs().maxCoeff();
  const double dev_l = (gl - lse_target).cwiseAbs().maxCoeff();
  const double hm = scmin::hamiltonian_residual(gm, vd);
  const double hl = scmin::hamiltonian_residual(gl, vd);
  const double hl_target = -std::exp(-2.5) / 2.0;

  std::printf("moreau eps=1e-3:\n");
  std::printf("  gradient  = (%.16g, %.16g)\n", gm[0], gm[1]);
  std::printf("  deviation from (1,3) e^{-5/4}/2 = %.3e\n", dev_m);
  std::printf("  H(grad, v_d(x)) = %.3e  (limit 0)\n", hm);
  std::printf("lse eps=1e-3:\n");
  std::printf("  gradient  = (%.16g, %.16g)\n", gl[0], gl[1]);
  std::printf("  deviation from (1,1) e^{-5/4}   = %.3e\n", dev_l);
  std::printf("  H(grad, v_d(x)) = %.16g\n", hl);
  std::printf("  deviation from -e^{-5/2}/2 = %.3e\n",
              std::abs(hl - hl_target));

  struct Gate {
    const char* what;
    double got;
    double tol;
  };
  const Gate gates[] = {{"moreau gradient deviation", dev_m, 1e-8},
                        {"moreau Hamiltonian residual", std::abs(hm), 1e-6},
                        {"lse gradient deviation", dev_l, 1e-8},
                        {"lse Hamiltonian deviation",
                         std::abs(hl - hl_target), 1e-4}};
  for (const Gate& g : gates) {
    if (g.got > g.tol) {
      std::cerr << "invariant failed: " << g.what << " = "
                << scmin::format_double(g.got) << " > "
                << scmin::format_double(g.tol) << '\n';
      return kExitInvariant;
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Smooth, semiconcavity-preserving approximations of pointwise minima: "
      "experiments and invariant suites on the exp-distance testbed"};
  app.require_subcommand(1);

  RunConfig cfg;
  CLI::App* run = app.add_subcommand(
      "run", "Convergence experiment over (method, degree, epsilon, delta)");
  run->add_option("--degrees", cfg.degrees, "Chebyshev degrees")
      ->delimiter(',')
      ->capture_default_str();
  run->add_option("--epsilons", cfg.epsilons, "smoothing scales")
      ->delimiter(',')
      ->capture_default_str();
  run->add_option("--deltas", cfg.deltas, "Omega_delta margins (0 = full grid)")
      ->delimiter(',')
      ->capture_default_str();
  run->add_option("--methods", cfg.methods, "moreau and/or lse")
      ->delimiter(',')
      ->capture_default_str();
  run->add_option("--grid", cfg.grid, "points per axis")
      ->capture_default_str();
  run->add_option("--dim", cfg.dim, "testbed dimension")
      ->capture_default_str();
  run->add_option("--out", cfg.out, "output directory")
      ->capture_default_str();
  run->add_option("--workers", cfg.workers, "worker threads (0 = hardware)")
      ->capture_default_str();
  run->add_flag("--dc-normalized", cfg.dc_normalized,
                "divide D_C by the Omega_delta point count");

  int t1_grid = 1001;
  std::vector<double> t1_deltas = {1e-4, 1e-3, 1e-2, 1e-1};
  std::string t1_out = ".";
  int t1_workers = 0;
  CLI::App* table1 = app.add_subcommand(
      "table1", "Omega_delta membership fractions of the exact solution");
  table1->add_option("--grid", t1_grid, "points per axis")
      ->capture_default_str();
  table1->add_option("--deltas", t1_deltas, "margins")
      ->delimiter(',')
      ->capture_default_str();
  table1->add_option("--out", t1_out, "output directory")
      ->capture_default_str();
  table1->add_option("--workers", t1_workers, "worker threads (0 = hardware)")
      ->capture_default_str();

  std::string scope = "all";
  unsigned seed = 42;
  int chk_workers = 0;
  bool broken_fixture = false;
  CLI::App* check = app.add_subcommand("check", "Run the invariant suites");
  check
      ->add_option("scope", scope,
                   "axioms | softmin | bounds | coarea | all")
      ->check(CLI::IsMember({"axioms", "softmin", "bounds", "coarea", "all"}))
      ->capture_default_str();
  check->add_option("--seed", seed, "corpus seed")->capture_default_str();
  check->add_option("--workers", chk_workers, "worker threads (0 = hardware)")
      ->capture_default_str();
  check->add_flag("--broken-smoother-fixture", broken_fixture,
                  "checker self-test: run softmin against a smoother whose "
                  "derivative leaves [0,1]");

  CLI::App* pointcheck = app.add_subcommand(
      "pointcheck",
      "Closed-form gradient and Hamiltonian check at x = (-1/2, -1/2)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (run->parsed()) return cmd_run(cfg);
    if (table1->parsed()) return cmd_table1(t1_grid, t1_deltas, t1_out,
                                            t1_workers);
    if (check->parsed()) return cmd_check(scope, seed, chk_workers,
                                          broken_fixture);
    if (pointcheck->parsed()) return cmd_pointcheck();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvariant;
  }
  return kExitUsage;
}
