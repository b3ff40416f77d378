#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sparsepde/asymptotics.hpp"
#include "sparsepde/scan.hpp"

namespace sparsepde {

/// Exit codes of the command-line front end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitNumerical = 1;
inline constexpr int kExitUsage = 2;

/// Parses `args` (without the program name), runs the subcommand and writes
/// its output to `out` or to --out. Diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Writers shared by the CLI and the Python module.

void write_risk_curve_csv(const RiskCurve& curve, std::ostream& os);
std::string risk_curve_json(const RiskCurve& curve);

/// {eta, r, estimator, benchmark, max_rho, ratio, argmax_theta, quad_order, points}
std::string max_risk_json(const RiskCurve& curve, int quad_order, int points);
void write_max_risk_csv(const RiskCurve& curve, int quad_order, int points, std::ostream& os);

void write_table_csv(const std::vector<TableRow>& rows, std::ostream& os);
std::string table_json(const std::vector<TableRow>& rows);

/// CSV lattice followed by a "# {...}" summary line.
void write_sigma_csv(const std::vector<SigmaPoint>& surface, const ModelConfig& cfg, const BiGridSpec& spec,
                     std::ostream& os);

struct DensityGrid {
  std::vector<double> ys;
  std::vector<double> phat;
  double integral = 0.0;  // trapezoid over the emitted grid
};

/// Uniform grid on [-L, L] with L = |x| + 10 lambda + 14.
DensityGrid density_grid(const SparsePrior& prior, const ModelConfig& cfg, double x, int points);
void write_density_csv(const DensityGrid& grid, std::ostream& os);

/// {"weight_at_zero", "atoms":[{"mu","mass"}], "slab":{"l","mass"}|null,
///  "spec":{"b","K","c_eta"}|null}
std::string prior_json(const SparsePrior& prior, const std::optional<BiGridSpec>& spec);

}  // namespace sparsepde
