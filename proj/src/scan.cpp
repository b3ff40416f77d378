#include "sparsepde/scan.hpp"

#include <cmath>
#include <stdexcept>

#include "sparsepde/asymptotics.hpp"

namespace sparsepde {

std::pair<double, double> golden_section_max(const std::function<double(double)>& f, double lo, double hi,
                                             double tol) {
  const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return fc >= fd ? std::pair{c, fc} : std::pair{d, fd};
}

RiskCurve risk_curve(const EstimatorKind& kind, const ModelConfig& cfg, double theta_max, int n_points,
                     const QuadratureRule& rule) {
  if (!(theta_max > 0.0) || !std::isfinite(theta_max))
    throw std::domain_error("risk_curve: theta_max must be positive");
  if (n_points < 64) throw std::domain_error("risk_curve: n_points must be >= 64");
  const Estimator est(kind, cfg, theta_max);
  RiskCurve c;
  c.kind = kind;
  c.cfg = cfg;
  c.benchmark = benchmark_univariate(cfg);
  c.thetas.resize(n_points);
  c.rhos.resize(n_points);
  c.details.resize(n_points);
  const double h = theta_max / (n_points - 1);
  int best = 0;
  for (int i = 0; i < n_points; ++i) {
    const double theta = i + 1 == n_points ? theta_max : h * i;
    c.thetas[i] = theta;
    c.details[i] = est.risk(theta, rule, false);
    c.rhos[i] = c.details[i].rho;
    if (c.rhos[i] > c.rhos[best]) best = i;
  }
  c.max_rho = c.rhos[best];
  c.argmax_theta = c.thetas[best];
  const double lo = c.thetas[best > 0 ? best - 1 : 0];
  const double hi = c.thetas[best + 1 < n_points ? best + 1 : best];
  if (hi > lo) {
    const auto [t, rho] = golden_section_max([&](double x) { return est.risk(x, rule, false).rho; }, lo, hi);
    if (rho > c.max_rho) {
      c.max_rho = rho;
      c.argmax_theta = t;
    }
  }
  c.ratio = c.max_rho / c.benchmark;
  return c;
}

TableRow table1_row(double eta, double r, const QuadratureRule& rule, int n_points) {
  const ModelConfig cfg = make_config(eta, r);
  const double theta_max = 5.0 * cfg.lambda;
  TableRow row;
  row.eta = eta;
  row.r = r;
  row.benchmark = benchmark_univariate(cfg);
  auto cell = [&](const EstimatorKind& kind) {
    const RiskCurve c = risk_curve(kind, cfg, theta_max, n_points, rule);
    return CellResult{c.max_rho, c.ratio, c.argmax_theta};
  };
  row.plugin = cell(EstimatorKind::plugin());
  row.bigrid = cell(EstimatorKind::bigrid());
  row.ss = cell(EstimatorKind::spike_slab(theta_max));
  row.grid = cell(EstimatorKind::grid());
  return row;
}

std::vector<TableRow> table1(const std::vector<double>& etas, const std::vector<double>& rs,
                             const QuadratureRule& rule, int n_points) {
  if (etas.empty() || rs.empty()) throw std::domain_error("table1: eta and r lists must be nonempty");
  std::vector<TableRow> rows;
  for (double eta : etas) {
    for (double r : rs) rows.push_back(table1_row(eta, r, rule, n_points));
  }
  return rows;
}

}  // namespace sparsepde
