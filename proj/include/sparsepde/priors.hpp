#pragma once

#include <optional>
#include <vector>

namespace sparsepde {

/// Sparsity eta, variance ratio r = v_y / v_x and the derived oracle quantities.
struct ModelConfig {
  double eta = 0.0;
  double r = 0.0;
  double v = 0.0;       // r / (1 + r)
  double lambda = 0.0;  // sqrt(2 v log(1/eta))
  double zeta = 0.0;    // eta^v = exp(-lambda^2 / 2)
  double log_zeta = 0.0;
};

/// Throws std::domain_error unless 0 < eta < 1 and r > 0.
ModelConfig make_config(double eta, double r);

/// (sqrt(5) - 1) / 4: the variance ratio below which the grid prior loses
/// first-order minimaxity.
inline constexpr double kCriticalRatio = 0.30901699437494742410;

/// Positive support point; its mirror at -mu carries the same mass.
struct Atom {
  double mu = 0.0;
  double mass = 0.0;      // per side
  double log_mass = 0.0;  // kept separately so far atoms never underflow
};

/// Uniform density total_mass / (2 half_width) on [-half_width, half_width].
struct Slab {
  double half_width = 0.0;
  double total_mass = 0.0;
};

/// Symmetric sparse prior: point mass at zero plus mirrored atoms and/or a
/// centred uniform slab.
struct SparsePrior {
  double weight_at_zero = 1.0;
  std::vector<Atom> atoms;
  std::optional<Slab> slab;

  double total_mass() const;
};

/// Spacing/decay machinery of the discrete prior family. Indices are 1-based
/// to match the support-point numbering mu_j = lambda * alpha(j).
struct BiGridSpec {
  double b = 1.0;
  int K = 3;
  double c_eta = 0.0;

  double alpha(int j) const;
  double beta(int j) const;
  /// alpha(j + 1) - alpha(j): b inside the inner zone (j < K), 1 from K on.
  double alpha_dot(int j) const;
  double beta_dot(int j) const;
};

/// min{4r(1+r)/(1+2r), 1}; exactly 1 whenever r >= r0.
double b_of_r(double r);

/// 1 + ceil(2 b^{-3/2}).
int K_of_b(double b);

/// Spacing spec for a given b with c(eta) from the normalization identity.
BiGridSpec make_spec(const ModelConfig& cfg, double b);
inline BiGridSpec grid_spec(const ModelConfig& cfg) { return make_spec(cfg, 1.0); }
inline BiGridSpec bigrid_spec(const ModelConfig& cfg) { return make_spec(cfg, b_of_r(cfg.r)); }

inline constexpr double kDefaultMassTol = 1e-16;

/// Grid prior: atoms at lambda * j with geometric decay eta^v. Atoms are
/// truncated once lambda * J >= theta_max + 15 and the remaining tail mass is
/// below mass_tol; the exact tail is folded into the last atom.
SparsePrior grid_prior(const ModelConfig& cfg, double theta_max, double mass_tol = kDefaultMassTol);

struct BiGridPrior {
  SparsePrior prior;
  BiGridSpec spec;
};

/// Bi-grid prior: K inner atoms at spacing b*lambda with decay zeta^{b^2},
/// then the outer grid. Same truncation rule as grid_prior.
BiGridPrior bigrid_prior(const ModelConfig& cfg, double theta_max, double mass_tol = kDefaultMassTol);

/// (1 - eta) delta_0 + eta * Uniform[-l, l].
SparsePrior spike_slab_prior(double eta, double l);

/// delta_0.
SparsePrior point_prior();

struct Coords {
  int l = 1;
  double omega = 0.0;
};

/// The unique (l, omega) with theta = lambda (alpha_l + omega) and
/// omega in [0, alpha_dot(l)). Throws std::domain_error for theta < lambda.
Coords theta_to_coords(double theta, const ModelConfig& cfg, const BiGridSpec& spec);

}  // namespace sparsepde
