#include "sparsepde/risk.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "sparsepde/numerics.hpp"

namespace sparsepde {

namespace {

constexpr double kQuadReach = 14.5;
constexpr double kPruneLog = -45.0;
const double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_variance(const ModelConfig& cfg, double variance) {
  if (variance == 1.0) return;
  if (std::abs(variance - cfg.v) <= 1e-15 * cfg.v) return;
  throw std::domain_error("log_N: variance must be v or 1");
}

// log(1 + sum_k e^{t_k}) given the t_k.
double log1p_sum_exp(const std::vector<double>& t) {
  if (t.empty()) return 0.0;
  const double m = *std::max_element(t.begin(), t.end());
  if (m <= 0.0) {
    double s = 0.0;
    for (double x : t) s += std::exp(x);
    return std::log1p(s);
  }
  double s = std::exp(-m);
  for (double x : t) s += std::exp(x - m);
  return m + std::log(s);
}

// z -> log N_{theta,var}(z) with atom terms linear in z. Terms that stay
// below e^-45 for |z| <= reach are dropped.
class LogNTerms {
 public:
  LogNTerms(const SparsePrior& prior, const ModelConfig& cfg, double theta, double variance,
            double reach) {
    check_variance(cfg, variance);
    const double sd = std::sqrt(variance);
    const double log_w0 = std::log(prior.weight_at_zero);
    for (const Atom& a : prior.atoms) {
      for (double sign : {1.0, -1.0}) {
        const double mu = sign * a.mu;
        const double slope = mu / sd;
        const double icpt = a.log_mass - log_w0 + mu * theta / variance - mu * mu / (2.0 * variance);
        if (icpt + std::abs(slope) * reach < kPruneLog) continue;
        slope_.push_back(slope);
        intercept_.push_back(icpt);
      }
    }
    if (prior.slab) {
      const Slab& s = *prior.slab;
      has_slab_ = true;
      slab_log_c_ = std::log(s.total_mass) - log_w0 - std::log(2.0 * s.half_width) -
                    std::log(kInvSqrt2Pi) + 0.5 * std::log(variance);
      shift_ = theta / sd;
      lo_ = (-s.half_width - theta) / sd;
      hi_ = (s.half_width - theta) / sd;
    }
    buf_.resize(slope_.size() + (has_slab_ ? 1 : 0));
  }

  double operator()(double z) const {
    const std::size_t n = slope_.size();
    for (std::size_t k = 0; k < n; ++k) buf_[k] = intercept_[k] + slope_[k] * z;
    if (has_slab_) {
      const double u = z + shift_;
      buf_[n] = slab_log_c_ + 0.5 * u * u + log_interval_prob(lo_ - z, hi_ - z);
    }
    return log1p_sum_exp(buf_);
  }

 private:
  std::vector<double> slope_, intercept_;
  bool has_slab_ = false;
  double slab_log_c_ = 0.0, shift_ = 0.0, lo_ = 0.0, hi_ = 0.0;
  mutable std::vector<double> buf_;
};

// log(1 + sum_mu (pi/pi0) exp(mu s - a mu^2 / 2)) over the mirrored atoms and
// the slab. This is N(x, y) with s = x + y/r, a = 1/v, and D(x) with s = x,
// a = 1.
double log_mixture_sum(const SparsePrior& prior, double s, double a) {
  std::vector<double> t;
  const double log_w0 = std::log(prior.weight_at_zero);
  for (const Atom& at : prior.atoms) {
    const double base = at.log_mass - log_w0 - 0.5 * a * at.mu * at.mu;
    t.push_back(base + at.mu * s);
    t.push_back(base - at.mu * s);
  }
  if (prior.slab) {
    const Slab& sl = *prior.slab;
    const double ra = std::sqrt(a);
    const double c = s / a;
    t.push_back(std::log(sl.total_mass) - log_w0 - std::log(2.0 * sl.half_width) + 0.5 * s * c +
                0.5 * std::log(2.0 * kPi / a) +
                log_interval_prob(ra * (-sl.half_width - c), ra * (sl.half_width - c)));
  }
  return log1p_sum_exp(t);
}

// log(sinh(x) / x) for x >= 0.
double log_sinhc(double x) {
  if (x < 1e-4) return x * x / 6.0;
  if (x < 20.0) return std::log(std::sinh(x) / x);
  return x - std::log(2.0 * x) + std::log1p(-std::exp(-2.0 * x));
}

}  // namespace

EstimatorKind EstimatorKind::spike_slab(double l) {
  if (!(l > 0.0) || !std::isfinite(l)) throw std::domain_error("spike-slab half-width must be positive");
  return {EstimatorType::SpikeSlab, l};
}

std::string estimator_name(const EstimatorKind& kind) {
  switch (kind.type) {
    case EstimatorType::GridBayes: return "grid";
    case EstimatorType::BiGridBayes: return "bigrid";
    case EstimatorType::SpikeSlab: return "ss";
    case EstimatorType::HardPlugin: return "plugin";
    case EstimatorType::PointMassBayes: return "point";
  }
  return "unknown";
}

EstimatorKind parse_estimator(std::string_view name, std::optional<double> slab_l) {
  if (name == "grid") return EstimatorKind::grid();
  if (name == "bigrid") return EstimatorKind::bigrid();
  if (name == "plugin") return EstimatorKind::plugin();
  if (name == "point") return EstimatorKind::point();
  if (name == "ss") {
    if (!slab_l) throw std::invalid_argument("estimator ss requires a slab half-width");
    return EstimatorKind::spike_slab(*slab_l);
  }
  throw std::invalid_argument("unknown estimator '" + std::string(name) + "'");
}

double log_N(const SparsePrior& prior, const ModelConfig& cfg, double theta, double variance, double z) {
  const LogNTerms f(prior, cfg, theta, variance, std::max(kQuadReach, std::abs(z)));
  const double out = f(z);
  if (!std::isfinite(out)) {
    std::ostringstream msg;
    msg << "log_N is not finite at theta=" << theta << ", z=" << z;
    throw NumericalError(msg.str());
  }
  return out;
}

Expectation e_log_N(const SparsePrior& prior, const ModelConfig& cfg, double theta, double variance,
                    const QuadratureRule& rule) {
  const LogNTerms f(prior, cfg, theta, variance, kQuadReach);
  return gauss_expect(rule, [&](double z) { return f(z); });
}

double log_mean_N(const SparsePrior& prior, const ModelConfig& cfg, double theta, double variance) {
  check_variance(cfg, variance);
  std::vector<double> t;
  const double log_w0 = std::log(prior.weight_at_zero);
  for (const Atom& a : prior.atoms) {
    t.push_back(a.log_mass - log_w0 + a.mu * theta / variance);
    t.push_back(a.log_mass - log_w0 - a.mu * theta / variance);
  }
  if (prior.slab) {
    const Slab& s = *prior.slab;
    t.push_back(std::log(s.total_mass) - log_w0 + log_sinhc(std::abs(theta) * s.half_width / variance));
  }
  return log1p_sum_exp(t);
}

RiskBreakdown bayes_rho(const SparsePrior& prior, const ModelConfig& cfg, double theta,
                        const QuadratureRule& rule, bool with_error) {
  RiskBreakdown out;
  out.theta = theta;
  out.quad_term = theta * theta / (2.0 * cfg.r);
  const LogNTerms n(prior, cfg, theta, cfg.v, kQuadReach);
  const LogNTerms d(prior, cfg, theta, 1.0, kQuadReach);
  if (with_error) {
    const Expectation en = gauss_expect(rule, [&](double z) { return n(z); });
    const Expectation ed = gauss_expect(rule, [&](double z) { return d(z); });
    out.e_log_N = en.value;
    out.e_log_D = ed.value;
    out.quad_err = en.err_estimate + ed.err_estimate;
  } else {
    out.e_log_N = gauss_expect_value(rule, [&](double z) { return n(z); });
    out.e_log_D = gauss_expect_value(rule, [&](double z) { return d(z); });
  }
  out.rho = out.quad_term - out.e_log_N + out.e_log_D;
  return out;
}

double rho_plugin(const ModelConfig& cfg, double theta) {
  const double tau = cfg.lambda / std::sqrt(cfg.v);
  const double lo = -tau - theta;
  const double hi = tau - theta;
  const double kept = std::exp(log_interval_prob(lo, hi));
  return (theta * theta * kept + 1.0 - truncated_second_moment(lo, hi)) / (2.0 * cfg.r);
}

Estimator::Estimator(EstimatorKind kind, const ModelConfig& cfg, double theta_max) : kind_(kind), cfg_(cfg) {
  const double reach = theta_max + 2.0 * cfg.lambda;
  switch (kind.type) {
    case EstimatorType::GridBayes:
      prior_ = grid_prior(cfg, reach);
      spec_ = grid_spec(cfg);
      break;
    case EstimatorType::BiGridBayes: {
      BiGridPrior bg = bigrid_prior(cfg, reach);
      prior_ = std::move(bg.prior);
      spec_ = bg.spec;
      break;
    }
    case EstimatorType::SpikeSlab:
      prior_ = spike_slab_prior(cfg.eta, kind.slab_half_width);
      break;
    case EstimatorType::PointMassBayes:
      prior_ = point_prior();
      break;
    case EstimatorType::HardPlugin:
      break;
  }
}

RiskBreakdown Estimator::risk(double theta, const QuadratureRule& rule, bool with_error) const {
  if (!std::isfinite(theta)) throw std::domain_error("risk: theta must be finite");
  if (!prior_) {
    RiskBreakdown out;
    out.theta = theta;
    out.quad_term = theta * theta / (2.0 * cfg_.r);
    out.e_log_N = kNaN;
    out.e_log_D = kNaN;
    out.rho = rho_plugin(cfg_, theta);
    return out;
  }
  return bayes_rho(*prior_, cfg_, theta, rule, with_error);
}

RiskBreakdown risk(const EstimatorKind& kind, const ModelConfig& cfg, double theta, const QuadratureRule& rule) {
  const Estimator est(kind, cfg, std::max(std::abs(theta), cfg.lambda));
  return est.risk(theta, rule);
}

double bayes_risk(const SparsePrior& prior, const ModelConfig& cfg, const QuadratureRule& rule) {
  auto rho = [&](double theta) { return bayes_rho(prior, cfg, theta, rule, false).rho; };
  double total = prior.weight_at_zero * rho(0.0);
  for (const Atom& a : prior.atoms) {
    if (a.mass > 0.0) total += 2.0 * a.mass * rho(a.mu);
  }
  if (prior.slab) {
    const Slab& s = *prior.slab;
    std::vector<double> x, w;
    composite_legendre(0.0, s.half_width, 25, 8, x, w);
    double integral = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) integral += w[i] * rho(x[i]);
    total += s.total_mass / s.half_width * integral;
  }
  return total;
}

double predictive_density(const SparsePrior& prior, const ModelConfig& cfg, double x, double y) {
  if (!std::isfinite(x) || !std::isfinite(y)) throw std::domain_error("predictive_density: x, y must be finite");
  const double log_phi_y = log_std_normal_pdf(y / std::sqrt(cfg.r)) - 0.5 * std::log(cfg.r);
  const double log_num = log_mixture_sum(prior, x + y / cfg.r, 1.0 / cfg.v);
  const double log_den = log_mixture_sum(prior, x, 1.0);
  const double out = std::exp(log_phi_y + log_num - log_den);
  if (!std::isfinite(out)) {
    std::ostringstream msg;
    msg << "predictive_density is not finite at x=" << x << ", y=" << y;
    throw NumericalError(msg.str());
  }
  return out;
}

MonteCarloEstimate mc_oracle_e_log_N(const SparsePrior& prior, const ModelConfig& cfg, double theta,
                                     double variance, std::int64_t n_samples, std::uint64_t seed) {
  if (n_samples < 100000) throw std::domain_error("mc_oracle_e_log_N: n_samples must be >= 1e5");
  constexpr double kReach = 8.5;
  const LogNTerms f(prior, cfg, theta, variance, kReach);
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal;
  double mean = 0.0, m2 = 0.0;
  for (std::int64_t i = 0; i < n_samples; ++i) {
    const double z = normal(gen);
    const double x = std::abs(z) <= kReach ? f(z) : log_N(prior, cfg, theta, variance, z);
    const double delta = x - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (x - mean);
  }
  const double var = m2 / static_cast<double>(n_samples - 1);
  return {mean, std::sqrt(var / static_cast<double>(n_samples))};
}

}  // namespace sparsepde
