#include "sparsepde/priors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sparsepde {

ModelConfig make_config(double eta, double r) {
  if (!(eta > 0.0 && eta < 1.0)) throw std::domain_error("make_config: eta must lie in (0, 1)");
  if (!(r > 0.0) || !std::isfinite(r)) throw std::domain_error("make_config: r must be positive");
  ModelConfig cfg;
  cfg.eta = eta;
  cfg.r = r;
  cfg.v = r / (1.0 + r);
  cfg.log_zeta = cfg.v * std::log(eta);
  cfg.zeta = std::exp(cfg.log_zeta);
  cfg.lambda = std::sqrt(-2.0 * cfg.log_zeta);
  return cfg;
}

double SparsePrior::total_mass() const {
  double m = weight_at_zero;
  for (const auto& a : atoms) m += 2.0 * a.mass;
  if (slab) m += slab->total_mass;
  return m;
}

double BiGridSpec::alpha(int j) const {
  if (j <= K) return 1.0 + b * (j - 1);
  return 1.0 + b * (K - 1) + (j - K);
}

double BiGridSpec::beta(int j) const {
  if (j <= K) return 1.0 + b * b * (j - 1);
  return 1.0 + b * b * (K - 1) + (j - K);
}

double BiGridSpec::alpha_dot(int j) const { return j < K ? b : 1.0; }

double BiGridSpec::beta_dot(int j) const { return j < K ? b * b : 1.0; }

double b_of_r(double r) {
  if (!(r > 0.0)) throw std::domain_error("b_of_r: r must be positive");
  // 4r(1+r)/(1+2r) >= 1  <=>  4r^2 + 2r - 1 >= 0.
  if (4.0 * r * r + 2.0 * r - 1.0 >= -1e-14) return 1.0;
  return 4.0 * r * (1.0 + r) / (1.0 + 2.0 * r);
}

int K_of_b(double b) {
  if (!(b > 0.0 && b <= 1.0)) throw std::domain_error("K_of_b: b must lie in (0, 1]");
  const double x = 2.0 * std::pow(b, -1.5);
  return 1 + static_cast<int>(std::ceil(x * (1.0 - 1e-14)));
}

namespace {

// 1 - zeta^p, with zeta = exp(log_zeta).
double one_minus_pow(double log_zeta, double p) { return -std::expm1(p * log_zeta); }

void check_discrete_config(const ModelConfig& cfg, double theta_max, double mass_tol) {
  if (!(cfg.eta > 0.0 && cfg.eta < 0.5))
    throw std::domain_error("discrete priors require 0 < eta < 0.5");
  if (!(theta_max > 0.0) || !std::isfinite(theta_max))
    throw std::domain_error("theta_max must be positive and finite");
  if (!(mass_tol > 0.0 && mass_tol <= 1e-12))
    throw std::domain_error("mass_tol must lie in (0, 1e-12]");
}

// Builds atoms j = 1..J from (location, log mass, log tail/mass ratio)
// callbacks and folds the tail into atom J.
template <class Loc, class LogMass, class LogTailRatio>
std::vector<Atom> truncated_atoms(double reach, int min_atoms, double mass_tol, Loc loc,
                                  LogMass log_mass, LogTailRatio log_tail_ratio) {
  std::vector<Atom> atoms;
  const double log_tol = std::log(mass_tol);
  for (int j = 1;; ++j) {
    Atom a{loc(j), 0.0, log_mass(j)};
    const double log_tail = a.log_mass + log_tail_ratio(j);
    const bool done = j >= min_atoms && a.mu >= reach && std::log(2.0) + log_tail < log_tol;
    if (done) a.log_mass += std::log1p(std::exp(log_tail_ratio(j)));
    a.mass = std::exp(a.log_mass);
    atoms.push_back(a);
    if (done) break;
    if (j > 1000000) throw std::runtime_error("atom truncation did not terminate");
  }
  return atoms;
}

}  // namespace

BiGridSpec make_spec(const ModelConfig& cfg, double b) {
  if (!(b > 0.0 && b <= 1.0)) throw std::domain_error("make_spec: b must lie in (0, 1]");
  BiGridSpec spec;
  spec.b = b;
  spec.K = K_of_b(b);
  const double lz = cfg.log_zeta;
  const double b2 = b * b;
  const double inv_2c = one_minus_pow(lz, b2 * spec.K) / one_minus_pow(lz, b2) +
                        std::exp((b2 * (spec.K - 1) + 1.0) * lz) / one_minus_pow(lz, 1.0);
  spec.c_eta = 0.5 / inv_2c;
  return spec;
}

SparsePrior grid_prior(const ModelConfig& cfg, double theta_max, double mass_tol) {
  check_discrete_config(cfg, theta_max, mass_tol);
  const double lz = cfg.log_zeta;
  const double log_first = std::log(0.5 * cfg.eta) + std::log(one_minus_pow(lz, 1.0));
  const double log_ratio = lz - std::log(one_minus_pow(lz, 1.0));
  SparsePrior p;
  p.weight_at_zero = 1.0 - cfg.eta;
  p.atoms = truncated_atoms(
      theta_max + 15.0, 1, mass_tol, [&](int j) { return cfg.lambda * j; },
      [&](int j) { return log_first + (j - 1) * lz; }, [&](int) { return log_ratio; });
  return p;
}

BiGridPrior bigrid_prior(const ModelConfig& cfg, double theta_max, double mass_tol) {
  check_discrete_config(cfg, theta_max, mass_tol);
  BiGridPrior out;
  out.spec = bigrid_spec(cfg);
  const BiGridSpec& s = out.spec;
  const double lz = cfg.log_zeta;
  const double b2 = s.b * s.b;
  const double log_scale = std::log(s.c_eta) + std::log(cfg.eta);
  auto log_tail_ratio = [&](int j) {
    // sum_{i > j} pi_i / pi_j
    if (j >= s.K) return lz - std::log(one_minus_pow(lz, 1.0));
    const double inner = std::exp(b2 * lz) * one_minus_pow(lz, b2 * (s.K - j)) / one_minus_pow(lz, b2);
    const double outer = std::exp((s.beta(s.K) - s.beta(j) + 1.0) * lz) / one_minus_pow(lz, 1.0);
    return std::log(inner + outer);
  };
  out.prior.weight_at_zero = 1.0 - cfg.eta;
  out.prior.atoms = truncated_atoms(
      theta_max + 15.0, 1, mass_tol, [&](int j) { return cfg.lambda * s.alpha(j); },
      [&](int j) { return log_scale + (s.beta(j) - 1.0) * lz; }, log_tail_ratio);
  return out;
}

SparsePrior spike_slab_prior(double eta, double l) {
  if (!(eta > 0.0 && eta < 1.0)) throw std::domain_error("spike_slab_prior: eta must lie in (0, 1)");
  if (!(l > 0.0) || !std::isfinite(l)) throw std::domain_error("spike_slab_prior: l must be positive");
  SparsePrior p;
  p.weight_at_zero = 1.0 - eta;
  p.slab = Slab{l, eta};
  return p;
}

SparsePrior point_prior() { return SparsePrior{}; }

Coords theta_to_coords(double theta, const ModelConfig& cfg, const BiGridSpec& spec) {
  if (!(theta >= cfg.lambda) || !std::isfinite(theta))
    throw std::domain_error("theta_to_coords: requires theta >= lambda");
  const double t = theta / cfg.lambda;
  Coords c;
  const double aK = spec.alpha(spec.K);
  if (t < aK) {
    c.l = 1 + static_cast<int>(std::floor((t - 1.0) / spec.b));
    if (c.l >= spec.K) c.l = spec.K - 1;
  } else {
    c.l = spec.K + static_cast<int>(std::floor(t - aK));
  }
  c.l = std::max(c.l, 1);
  // floor() on a ratio can land one cell off; settle on the half-open cell.
  for (int guard = 0; guard < 4; ++guard) {
    c.omega = t - spec.alpha(c.l);
    if (c.omega < 0.0 && c.l > 1) {
      --c.l;
    } else if (c.omega >= spec.alpha_dot(c.l)) {
      ++c.l;
    } else {
      break;
    }
  }
  if (c.omega < 0.0) c.omega = 0.0;
  // theta = lambda * alpha(l + 1) can arrive a rounding error short.
  if (spec.alpha_dot(c.l) - c.omega <= 1e-12 * t) {
    ++c.l;
    c.omega = 0.0;
  }
  return c;
}

}  // namespace sparsepde
