#pragma once

#include <utility>
#include <vector>

#include "sparsepde/risk.hpp"

namespace sparsepde {

inline constexpr int kDefaultScanPoints = 2048;

/// Risk sampled on a uniform grid over [0, theta_max] (symmetry covers
/// theta < 0), with the maximum refined by golden-section search.
struct RiskCurve {
  EstimatorKind kind;
  ModelConfig cfg;
  std::vector<double> thetas;
  std::vector<double> rhos;
  std::vector<RiskBreakdown> details;
  double max_rho = 0.0;
  double argmax_theta = 0.0;
  double benchmark = 0.0;
  double ratio = 0.0;
};

/// Throws std::domain_error unless theta_max > 0 and n_points >= 64.
RiskCurve risk_curve(const EstimatorKind& kind, const ModelConfig& cfg, double theta_max, int n_points,
                     const QuadratureRule& rule);

/// Maximizes f on [lo, hi] by golden-section search until the bracket is
/// narrower than tol. Returns {argmax, max}.
std::pair<double, double> golden_section_max(const std::function<double(double)>& f, double lo, double hi,
                                             double tol = 1e-6);

struct CellResult {
  double max_rho = 0.0;
  double ratio = 0.0;
  double argmax = 0.0;
};

struct TableRow {
  double eta = 0.0;
  double r = 0.0;
  double benchmark = 0.0;
  CellResult plugin, bigrid, ss, grid;
};

/// Scan domain [0, 5 lambda]; the spike-and-slab half-width is 5 lambda.
TableRow table1_row(double eta, double r, const QuadratureRule& rule, int n_points = kDefaultScanPoints);

/// One row per (eta, r), eta-major.
std::vector<TableRow> table1(const std::vector<double>& etas, const std::vector<double>& rs,
                             const QuadratureRule& rule, int n_points = kDefaultScanPoints);

inline const std::vector<double> kTableEtas{0.1, 0.001, 1e-10};
inline const std::vector<double> kTableRatios{1.0, 0.5, 0.25, 0.1};

}  // namespace sparsepde
