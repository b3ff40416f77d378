#include "sparsepde/selftest.hpp"

#include <cmath>
#include <functional>
#include <random>
#include <sstream>
#include <vector>

#include "sparsepde/asymptotics.hpp"
#include "sparsepde/numerics.hpp"
#include "sparsepde/quadrature.hpp"

namespace sparsepde {

namespace {

const std::vector<double> kEtas{0.1, 1e-3, 1e-10};
const std::vector<double> kRs{1.0, 0.5, 0.25, 0.1};

// Tracks the worst violation seen by a check.
struct Tally {
  int evaluated = 0;
  int failed = 0;
  double worst = 0.0;
  std::string worst_at;

  void record(bool ok, double excess, const std::string& where) {
    ++evaluated;
    if (!ok) ++failed;
    if (excess > worst || worst_at.empty()) {
      worst = excess;
      worst_at = where;
    }
  }

  CheckResult result(const std::string& name, const std::string& what) const {
    std::ostringstream d;
    d << evaluated << " cases, " << failed << " violations, worst " << what << " " << worst << " at "
      << worst_at;
    return {name, failed == 0 && evaluated > 0, d.str()};
  }
};

std::string where(const ModelConfig& cfg, const std::string& kind, double theta) {
  std::ostringstream s;
  s << kind << " eta=" << cfg.eta << " r=" << cfg.r << " theta=" << theta;
  return s.str();
}

std::vector<EstimatorKind> bayes_kinds(const ModelConfig& cfg) {
  return {EstimatorKind::grid(), EstimatorKind::bigrid(), EstimatorKind::spike_slab(5.0 * cfg.lambda),
          EstimatorKind::point()};
}

CheckResult check_mass() {
  Tally t;
  for (double eta : kEtas) {
    for (double r : kRs) {
      const ModelConfig cfg = make_config(eta, r);
      const double tm = 7.0 * cfg.lambda;
      const std::pair<std::string, SparsePrior> priors[] = {
          {"grid", grid_prior(cfg, tm)},
          {"bigrid", bigrid_prior(cfg, tm).prior},
          {"ss", spike_slab_prior(eta, 5.0 * cfg.lambda)},
      };
      for (const auto& [name, p] : priors) {
        const double err = std::abs(p.total_mass() - 1.0);
        t.record(err <= 1e-10, err, where(cfg, name, 0.0));
      }
    }
  }
  return t.result("prior_mass_normalization", "|mass - 1|");
}

CheckResult check_symmetry(const QuadratureRule& rule) {
  Tally t;
  for (const auto& [eta, r] : {std::pair{0.1, 1.0}, {1e-3, 0.25}, {1e-10, 0.1}}) {
    const ModelConfig cfg = make_config(eta, r);
    auto kinds = bayes_kinds(cfg);
    kinds.push_back(EstimatorKind::plugin());
    for (const EstimatorKind& k : kinds) {
      const Estimator est(k, cfg, 5.0 * cfg.lambda);
      for (double theta : {0.7, 2.3, 5.1}) {
        const double diff = std::abs(est.risk(theta, rule, false).rho - est.risk(-theta, rule, false).rho);
        t.record(diff <= 1e-10, diff, where(cfg, estimator_name(k), theta));
      }
    }
  }
  return t.result("risk_symmetry", "|rho(t) - rho(-t)|");
}

CheckResult check_sandwich(const QuadratureRule& rule) {
  Tally t;
  for (double eta : kEtas) {
    for (double r : {1.0, 0.1}) {
      const ModelConfig cfg = make_config(eta, r);
      for (const EstimatorKind& k : bayes_kinds(cfg)) {
        const Estimator est(k, cfg, 5.0 * cfg.lambda);
        for (int i = 0; i <= 10; ++i) {
          const double theta = 0.5 * i * cfg.lambda;
          const RiskBreakdown b = est.risk(theta, rule, false);
          const double excess = std::max({b.quad_term - b.e_log_N - b.rho, b.rho - b.quad_term - b.e_log_D,
                                          -b.e_log_N, -b.e_log_D, -b.rho});
          t.record(excess <= 1e-9, excess, where(cfg, estimator_name(k), theta));
        }
      }
    }
  }
  return t.result("sandwich_bounds", "excess");
}

CheckResult check_jensen(const QuadratureRule& rule) {
  Tally t;
  for (double eta : kEtas) {
    for (double r : {1.0, 0.1}) {
      const ModelConfig cfg = make_config(eta, r);
      const double tm = 5.0 * cfg.lambda;
      const std::pair<std::string, SparsePrior> priors[] = {
          {"grid", grid_prior(cfg, tm + 2.0 * cfg.lambda)},
          {"bigrid", bigrid_prior(cfg, tm + 2.0 * cfg.lambda).prior},
      };
      for (const auto& [name, p] : priors) {
        for (double var : {cfg.v, 1.0}) {
          for (int i = 0; i <= 10; ++i) {
            const double theta = 0.5 * i * cfg.lambda;
            const double excess = e_log_N(p, cfg, theta, var, rule).value - log_mean_N(p, cfg, theta, var);
            t.record(excess <= 1e-9, excess, where(cfg, name, theta));
          }
        }
      }
    }
  }
  return t.result("jensen_bound", "E log N - log E N");
}

CheckResult check_risk_at_zero(const QuadratureRule& rule) {
  Tally t;
  for (double eta : kEtas) {
    for (double r : kRs) {
      const ModelConfig cfg = make_config(eta, r);
      for (const EstimatorKind& k : bayes_kinds(cfg)) {
        const double rho0 = risk(k, cfg, 0.0, rule).rho;
        const double excess = rho0 + std::log1p(-eta);
        t.record(excess <= 1e-9, excess, where(cfg, estimator_name(k), 0.0));
      }
    }
  }
  return t.result("risk_at_zero", "rho(0) - log(1/(1-eta))");
}

CheckResult check_slab_log_N_bound(const QuadratureRule& rule) {
  Tally t;
  for (double eta : {0.5, 0.1, 1e-3}) {
    for (double r : {1.0, 0.25}) {
      const ModelConfig cfg = make_config(eta, r);
      for (double l : {1.0, 2.0, 5.0}) {
        const SparsePrior p = spike_slab_prior(eta, l);
        for (double theta : {0.25, 0.5, 1.0, 2.0, 3.0, 5.0}) {
          const double bound = theta * l / cfg.v;
          if (bound < 1.0) continue;
          const double excess = e_log_N(p, cfg, theta, cfg.v, rule).value - bound;
          t.record(excess <= 0.0, excess, where(cfg, "ss", theta));
        }
      }
    }
  }
  return t.result("slab_e_log_N_bound", "E log N - theta l / v");
}

CheckResult check_slab_phi_bound(const QuadratureRule& rule) {
  Tally t;
  const double floor = std::log(kInvSqrt2Pi) - 2.0 / 3.0;
  for (double v : {0.3, 0.5, 0.9}) {
    const double sd = std::sqrt(v);
    for (double l : {1.0, 2.0, 5.0}) {
      for (int i = 0; i <= 20; ++i) {
        const double theta = l * i / 20.0;
        const double lo = (-l - theta) / sd;
        const double hi = (l - theta) / sd;
        const double value = gauss_expect_value(rule, [&](double z) { return log_interval_prob(lo - z, hi - z); });
        const double excess = floor - value;
        std::ostringstream w;
        w << "v=" << v << " l=" << l << " theta=" << theta;
        t.record(excess <= 1e-9, excess, w.str());
      }
    }
  }
  return t.result("slab_phi_lower_bound", "floor - E log Phi");
}

CheckResult check_gap_argmin(std::uint64_t seed) {
  Tally t;
  std::mt19937_64 gen(seed);
  for (double b : {1.0, 0.4}) {
    const ModelConfig cfg = make_config(0.1, 0.25);
    const BiGridSpec spec = make_spec(cfg, b);
    std::uniform_real_distribution<double> unif(cfg.lambda, 8.0 * cfg.lambda);
    for (int i = 0; i < 200; ++i) {
      const double theta = unif(gen);
      const int l = theta_to_coords(theta, cfg, spec).l;
      const int j = gap_argmin(theta, cfg, spec, l + 30);
      std::ostringstream w;
      w << "b=" << b << " theta=" << theta << " l=" << l << " argmin=" << j;
      t.record(j == l, std::abs(j - l), w.str());
    }
  }
  return t.result("gap_argmin_matches_zone", "|argmin - l|");
}

CheckResult check_density(std::uint64_t seed) {
  Tally t;
  std::mt19937_64 gen(seed + 1);
  std::uniform_real_distribution<double> unif_x(-12.0, 12.0);
  const ModelConfig cfgs[] = {make_config(0.1, 1.0), make_config(1e-3, 0.25), make_config(1e-10, 0.1)};
  for (int i = 0; i < 20; ++i) {
    const ModelConfig& cfg = cfgs[i % 3];
    const double x = unif_x(gen);
    const double span = std::abs(x) + 10.0 * cfg.lambda + 14.0;
    const std::pair<std::string, SparsePrior> priors[] = {
        {"grid", grid_prior(cfg, span)},
        {"bigrid", bigrid_prior(cfg, span).prior},
        {"ss", spike_slab_prior(cfg.eta, 5.0 * cfg.lambda)},
        {"point", point_prior()},
    };
    std::vector<double> ys, ws;
    composite_legendre(-span, span, 400, 8, ys, ws);
    for (const auto& [name, p] : priors) {
      double integral = 0.0;
      for (std::size_t k = 0; k < ys.size(); ++k) integral += ws[k] * predictive_density(p, cfg, x, ys[k]);
      const double err = std::abs(integral - 1.0);
      std::ostringstream w;
      w << name << " eta=" << cfg.eta << " r=" << cfg.r << " x=" << x;
      t.record(err <= 1e-6, err, w.str());
    }
  }
  return t.result("density_normalization", "|integral - 1|");
}

CheckResult check_doubling(const QuadratureRule& rule) {
  Tally t;
  for (double eta : kEtas) {
    for (double r : kRs) {
      const ModelConfig cfg = make_config(eta, r);
      for (const EstimatorKind& k : bayes_kinds(cfg)) {
        const Estimator est(k, cfg, 5.0 * cfg.lambda);
        for (double frac : {0.0, 0.5, 1.0, 1.5, 2.5, 4.0, 5.0}) {
          const double theta = frac * cfg.lambda;
          for (double var : {cfg.v, 1.0}) {
            const Expectation e = e_log_N(*est.prior(), cfg, theta, var, rule);
            const double excess = e.err_estimate / (1.0 + std::abs(e.value));
            t.record(excess < 1e-8, excess, where(cfg, estimator_name(k), theta));
          }
        }
      }
    }
  }
  return t.result("quadrature_doubling", "err / (1 + |value|)");
}

CheckResult check_mc_log_N(const QuadratureRule& rule, const SelftestOptions& opts) {
  Tally t;
  struct Case {
    EstimatorKind kind;
    double eta, r, theta;
    bool unit_variance;
  };
  const Case cases[] = {
      {EstimatorKind::grid(), 0.1, 1.0, 2.0, false},
      {EstimatorKind::bigrid(), 1e-3, 0.25, 3.0, false},
      {EstimatorKind::bigrid(), 1e-10, 0.1, 4.0, true},
      {EstimatorKind::spike_slab(7.5), 0.1, 1.0, 2.5, true},
  };
  std::uint64_t seed = opts.seed;
  for (const Case& c : cases) {
    const ModelConfig cfg = make_config(c.eta, c.r);
    const Estimator est(c.kind, cfg, 5.0 * cfg.lambda);
    const double var = c.unit_variance ? 1.0 : cfg.v;
    const double q = e_log_N(*est.prior(), cfg, c.theta, var, rule).value;
    const MonteCarloEstimate mc = mc_oracle_e_log_N(*est.prior(), cfg, c.theta, var, opts.mc_samples, seed++);
    const double z = std::abs(q - mc.mean) / mc.std_error;
    t.record(z <= 3.0, z, where(cfg, estimator_name(c.kind), c.theta));
  }
  return t.result("monte_carlo_e_log_N", "|z-score|");
}

// Var of (theta - x 1{|x| > tau})^2 / (2r) for X ~ N(theta, 1), integrated
// separately on each side of the jumps at +-tau.
double plugin_loss_variance(double theta, double tau, double r) {
  const double lo = theta - 14.0, hi = theta + 14.0;
  std::vector<double> cuts{lo};
  for (double c : {-tau, tau})
    if (c > lo && c < hi) cuts.push_back(c);
  cuts.push_back(hi);
  double m1 = 0.0, m2 = 0.0;
  std::vector<double> x, w;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    composite_legendre(cuts[k], cuts[k + 1], 64, 16, x, w);
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double est = std::abs(x[i]) > tau ? x[i] : 0.0;
      const double loss = (theta - est) * (theta - est) / (2.0 * r);
      const double dens = w[i] * std_normal_pdf(x[i] - theta);
      m1 += loss * dens;
      m2 += loss * loss * dens;
    }
  }
  return m2 - m1 * m1;
}

CheckResult check_mc_plugin(const SelftestOptions& opts) {
  Tally t;
  std::mt19937_64 pick(opts.seed + 2);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    const double eta = kEtas[i % 3];
    const double r = kRs[(i / 3) % 4];
    const ModelConfig cfg = make_config(eta, r);
    const double theta = 5.0 * cfg.lambda * unif(pick);
    const double tau = cfg.lambda / std::sqrt(cfg.v);
    std::mt19937_64 gen(opts.seed + 100 + i);
    std::normal_distribution<double> normal;
    double mean = 0.0;
    for (std::int64_t k = 0; k < opts.mc_samples; ++k) {
      const double x = theta + normal(gen);
      const double est = std::abs(x) > tau ? x : 0.0;
      mean += ((theta - est) * (theta - est) / (2.0 * r) - mean) / static_cast<double>(k + 1);
    }
    // The sample variance is zero when no draw crosses tau, so the standard
    // error comes from the loss variance integrated piece by piece.
    const double se = std::sqrt(plugin_loss_variance(theta, tau, r) / static_cast<double>(opts.mc_samples));
    const double z = std::abs(rho_plugin(cfg, theta) - mean) / se;
    t.record(z <= 3.0, z, where(cfg, "plugin", theta));
  }
  return t.result("monte_carlo_plugin", "|z-score|");
}

}  // namespace

std::vector<CheckResult> run_selftest(const SelftestOptions& opts) {
  const QuadratureRule rule = make_quadrature(opts.quad_order);
  const std::vector<std::pair<std::string, std::function<CheckResult()>>> checks = {
      {"prior_mass_normalization", [] { return check_mass(); }},
      {"risk_symmetry", [&] { return check_symmetry(rule); }},
      {"sandwich_bounds", [&] { return check_sandwich(rule); }},
      {"jensen_bound", [&] { return check_jensen(rule); }},
      {"risk_at_zero", [&] { return check_risk_at_zero(rule); }},
      {"slab_e_log_N_bound", [&] { return check_slab_log_N_bound(rule); }},
      {"slab_phi_lower_bound", [&] { return check_slab_phi_bound(rule); }},
      {"gap_argmin_matches_zone", [&] { return check_gap_argmin(opts.seed); }},
      {"density_normalization", [&] { return check_density(opts.seed); }},
      {"quadrature_doubling", [&] { return check_doubling(rule); }},
      {"monte_carlo_e_log_N", [&] { return check_mc_log_N(rule, opts); }},
      {"monte_carlo_plugin", [&] { return check_mc_plugin(opts); }},
  };
  std::vector<CheckResult> out;
  for (const auto& [name, run] : checks) {
    try {
      out.push_back(run());
    } catch (const std::exception& e) {
      out.push_back({name, false, std::string("exception: ") + e.what()});
    }
  }
  return out;
}

}  // namespace sparsepde
