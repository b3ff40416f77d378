#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "sparsepde/priors.hpp"
#include "sparsepde/quadrature.hpp"

namespace sparsepde {

/// One point of a KL risk curve, split into the three decomposition terms.
struct RiskBreakdown {
  double theta = 0.0;
  double quad_term = 0.0;  // theta^2 / (2r)
  double e_log_N = 0.0;    // E log N_{theta,v}(Z); NaN for the plug-in
  double e_log_D = 0.0;    // E log N_{theta,1}(Z); NaN for the plug-in
  double rho = 0.0;
  double quad_err = 0.0;
};

enum class EstimatorType { GridBayes, BiGridBayes, SpikeSlab, HardPlugin, PointMassBayes };

struct EstimatorKind {
  EstimatorType type = EstimatorType::GridBayes;
  double slab_half_width = 0.0;  // SpikeSlab only

  static EstimatorKind grid() { return {EstimatorType::GridBayes}; }
  static EstimatorKind bigrid() { return {EstimatorType::BiGridBayes}; }
  static EstimatorKind plugin() { return {EstimatorType::HardPlugin}; }
  static EstimatorKind point() { return {EstimatorType::PointMassBayes}; }
  /// Throws std::domain_error unless l > 0.
  static EstimatorKind spike_slab(double l);

  bool is_bayes() const { return type != EstimatorType::HardPlugin; }
};

/// CLI-facing names: grid, bigrid, ss, plugin, point.
std::string estimator_name(const EstimatorKind& kind);

/// Inverse of estimator_name. "ss" needs slab_l; throws std::invalid_argument
/// on an unknown name.
EstimatorKind parse_estimator(std::string_view name, std::optional<double> slab_l = std::nullopt);

/// log N_{theta,var}(z). variance must be cfg.v or 1.
double log_N(const SparsePrior& prior, const ModelConfig& cfg, double theta, double variance, double z);

/// E log N_{theta,var}(Z) by the given rule, with a doubling error estimate.
Expectation e_log_N(const SparsePrior& prior, const ModelConfig& cfg, double theta, double variance,
                    const QuadratureRule& rule);

/// log E N_{theta,var}(Z) in closed form (upper bound for e_log_N).
double log_mean_N(const SparsePrior& prior, const ModelConfig& cfg, double theta, double variance);

/// theta^2/(2r) - E log N_{theta,v} + E log N_{theta,1} for the Bayes
/// predictive density under `prior`. Without `with_error` the doubled-order
/// pass is skipped and quad_err is 0.
RiskBreakdown bayes_rho(const SparsePrior& prior, const ModelConfig& cfg, double theta,
                        const QuadratureRule& rule, bool with_error = true);

/// Closed-form risk of the hard-threshold plug-in x 1{|x| > lambda / sqrt(v)}.
double rho_plugin(const ModelConfig& cfg, double theta);

/// An estimator with its prior built once, for repeated risk evaluations.
class Estimator {
 public:
  /// Bayes priors are truncated for |theta| <= theta_max + 2 lambda.
  Estimator(EstimatorKind kind, const ModelConfig& cfg, double theta_max);

  RiskBreakdown risk(double theta, const QuadratureRule& rule, bool with_error = true) const;

  const EstimatorKind& kind() const { return kind_; }
  const ModelConfig& config() const { return cfg_; }
  /// Null for the plug-in.
  const SparsePrior* prior() const { return prior_ ? &*prior_ : nullptr; }
  /// Set for grid and bi-grid.
  const std::optional<BiGridSpec>& spec() const { return spec_; }

 private:
  EstimatorKind kind_;
  ModelConfig cfg_;
  std::optional<SparsePrior> prior_;
  std::optional<BiGridSpec> spec_;
};

/// Single-shot risk; builds the prior with theta_max = |theta|.
RiskBreakdown risk(const EstimatorKind& kind, const ModelConfig& cfg, double theta,
                   const QuadratureRule& rule);

/// Prior-averaged risk: w0 rho(0) + sum 2 m_j rho(mu_j) + slab integral.
double bayes_risk(const SparsePrior& prior, const ModelConfig& cfg, const QuadratureRule& rule);

/// Bayes predictive density of Y at y given X = x.
double predictive_density(const SparsePrior& prior, const ModelConfig& cfg, double x, double y);

struct MonteCarloEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

inline constexpr std::int64_t kDefaultMcSamples = 10000000;

/// Seeded Monte-Carlo estimate of E log N_{theta,var}(Z). Throws
/// std::domain_error for n_samples < 1e5.
MonteCarloEstimate mc_oracle_e_log_N(const SparsePrior& prior, const ModelConfig& cfg, double theta,
                                     double variance, std::int64_t n_samples, std::uint64_t seed);

}  // namespace sparsepde
