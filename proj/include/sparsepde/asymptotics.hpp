#pragma once

#include <vector>

#include "sparsepde/priors.hpp"

namespace sparsepde {

/// First-order minimax risk per nonzero coordinate: lambda^2 / (2r).
double benchmark_univariate(const ModelConfig& cfg);

struct PhaseConstant {
  double h = 0.0;
  double h_plus = 0.0;  // max(h, 0), positive iff r < r0
};

/// h(r) = (1+2r)(1+r)^{-2}(1-2r-4r^2)/4. Throws std::domain_error for r <= 0.
PhaseConstant h_r(double r);

/// Leading lambda^2 coefficient of the risk at theta = lambda (alpha_l + omega).
struct SigmaPoint {
  int l = 1;
  double omega = 0.0;
  double theta = 0.0;
  double n_val = 0.0;
  double n_check_val = 0.0;
  double d_val = 0.0;
  double sigma = 0.0;
};

SigmaPoint sigma_at(const ModelConfig& cfg, const BiGridSpec& spec, int l, double omega);

/// sigma on the lattice omega = k alpha_dot(l) / omega_steps, k < omega_steps,
/// for l = 1..l_max, with the two breakpoints of each row (where n and n_check
/// cross, and where d changes sign) added whenever they fall inside the row.
/// Rows are ordered by l, then omega.
std::vector<SigmaPoint> sigma_surface(const ModelConfig& cfg, const BiGridSpec& spec, int l_max,
                                      int omega_steps = 512);

/// Zone index that contains theta = 7 lambda (the scan range plus margin).
int default_sigma_l_max(const ModelConfig& cfg, const BiGridSpec& spec);

/// Largest sigma on a surface; ties go to the smaller theta.
SigmaPoint sigma_max(const std::vector<SigmaPoint>& surface);

/// Grid prior (b = 1): the larger of sigma(1, 0) = 1 and sigma(1, (1+v)/2).
SigmaPoint grid_sigma_max(const ModelConfig& cfg);

/// G(mu_j; theta) = mu_j^2/2 - mu_j theta + lambda^2 (beta_j + 1/r) / 2.
double gap_G(int j, double theta, const ModelConfig& cfg, const BiGridSpec& spec);

/// argmin of gap_G over j = 1..j_max; ties go to the larger index.
int gap_argmin(double theta, const ModelConfig& cfg, const BiGridSpec& spec, int j_max);

struct RiskBounds {
  double lower = 0.0;
  double upper = 0.0;
};

/// Multivariate maximum risk over s-sparse means in dimension n, bracketed by
/// univariate quantities: lower = s sup_rho_bounded,
/// upper = (n - s) rho_at_zero + s sup_rho.
RiskBounds multivariate_bounds(long long s, long long n, double rho_at_zero, double sup_rho,
                               double sup_rho_bounded);

}  // namespace sparsepde
