#include "sparsepde/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sparsepde {

double benchmark_univariate(const ModelConfig& cfg) { return -std::log(cfg.eta) / (1.0 + cfg.r); }

PhaseConstant h_r(double r) {
  if (!(r > 0.0)) throw std::domain_error("h_r: r must be positive");
  PhaseConstant out;
  const double q = 1.0 + r;
  out.h = (1.0 + 2.0 * r) / (q * q) * (1.0 - 2.0 * r - 4.0 * r * r) / 4.0;
  out.h_plus = std::max(out.h, 0.0);
  return out;
}

SigmaPoint sigma_at(const ModelConfig& cfg, const BiGridSpec& spec, int l, double omega) {
  if (l < 1) throw std::domain_error("sigma_at: l must be >= 1");
  const double a = spec.alpha(l);
  const double b = spec.beta(l);
  const double ad = spec.alpha_dot(l);
  const double iv = 1.0 / cfg.v;
  const double ir = 1.0 / cfg.r;
  SigmaPoint p;
  p.l = l;
  p.omega = omega;
  p.theta = cfg.lambda * (a + omega);
  p.n_val = iv * (a * a + 2.0 * a * omega) - b - ir;
  p.n_check_val = p.n_val + 2.0 * iv * ad * omega - (1.0 + iv) * ad * ad;
  p.d_val = a * a + 2.0 * a * omega - b - ir;
  p.sigma = (a + omega) * (a + omega) - cfg.r * std::max(p.n_val, p.n_check_val) +
            cfg.r * std::max(p.d_val, 0.0);
  return p;
}

std::vector<SigmaPoint> sigma_surface(const ModelConfig& cfg, const BiGridSpec& spec, int l_max,
                                      int omega_steps) {
  if (l_max < 1) throw std::domain_error("sigma_surface: l_max must be >= 1");
  if (omega_steps < 2) throw std::domain_error("sigma_surface: omega_steps must be >= 2");
  std::vector<SigmaPoint> out;
  std::vector<double> omegas;
  for (int l = 1; l <= l_max; ++l) {
    const double ad = spec.alpha_dot(l);
    const double a = spec.alpha(l);
    omegas.clear();
    for (int k = 0; k < omega_steps; ++k) omegas.push_back(ad * k / omega_steps);
    const double cross = 0.5 * (1.0 + cfg.v) * ad;
    const double d_zero = (spec.beta(l) + 1.0 / cfg.r - a * a) / (2.0 * a);
    for (double w : {cross, d_zero}) {
      if (w > 0.0 && w < ad) omegas.push_back(w);
    }
    std::sort(omegas.begin(), omegas.end());
    omegas.erase(std::unique(omegas.begin(), omegas.end()), omegas.end());
    for (double w : omegas) out.push_back(sigma_at(cfg, spec, l, w));
  }
  return out;
}

int default_sigma_l_max(const ModelConfig& cfg, const BiGridSpec& spec) {
  return theta_to_coords(7.0 * cfg.lambda, cfg, spec).l;
}

SigmaPoint sigma_max(const std::vector<SigmaPoint>& surface) {
  if (surface.empty()) throw std::domain_error("sigma_max: empty surface");
  SigmaPoint best = surface.front();
  for (const SigmaPoint& p : surface) {
    if (p.sigma > best.sigma || (p.sigma == best.sigma && p.theta < best.theta)) best = p;
  }
  return best;
}

SigmaPoint grid_sigma_max(const ModelConfig& cfg) {
  const BiGridSpec spec = grid_spec(cfg);
  const SigmaPoint at_zero = sigma_at(cfg, spec, 1, 0.0);
  const SigmaPoint at_cross = sigma_at(cfg, spec, 1, 0.5 * (1.0 + cfg.v));
  return at_cross.sigma > at_zero.sigma ? at_cross : at_zero;
}

double gap_G(int j, double theta, const ModelConfig& cfg, const BiGridSpec& spec) {
  if (j < 1) throw std::domain_error("gap_G: j must be >= 1");
  if (!(theta >= cfg.lambda)) throw std::domain_error("gap_G: requires theta >= lambda");
  const double mu = cfg.lambda * spec.alpha(j);
  return 0.5 * mu * mu - mu * theta + 0.5 * cfg.lambda * cfg.lambda * (spec.beta(j) + 1.0 / cfg.r);
}

int gap_argmin(double theta, const ModelConfig& cfg, const BiGridSpec& spec, int j_max) {
  if (j_max < 1) throw std::domain_error("gap_argmin: j_max must be >= 1");
  int best = 1;
  double best_val = gap_G(1, theta, cfg, spec);
  for (int j = 2; j <= j_max; ++j) {
    const double g = gap_G(j, theta, cfg, spec);
    // Relative tolerance so that exact ties at omega = 0 resolve upward.
    if (g <= best_val + 1e-12 * std::max(1.0, std::abs(best_val))) {
      best = j;
      best_val = std::min(g, best_val);
    }
  }
  return best;
}

RiskBounds multivariate_bounds(long long s, long long n, double rho_at_zero, double sup_rho,
                               double sup_rho_bounded) {
  if (!(s > 0 && s <= n)) throw std::domain_error("multivariate_bounds: requires 0 < s <= n");
  if (rho_at_zero < 0.0 || sup_rho < 0.0 || sup_rho_bounded < 0.0)
    throw std::domain_error("multivariate_bounds: risks must be nonnegative");
  RiskBounds out;
  out.lower = static_cast<double>(s) * sup_rho_bounded;
  out.upper = static_cast<double>(n - s) * rho_at_zero + static_cast<double>(s) * sup_rho;
  return out;
}

}  // namespace sparsepde
