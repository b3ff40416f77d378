#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "sparsepde/priors.hpp"

using namespace sparsepde;

namespace {

const double kEtas[] = {0.1, 1e-3, 1e-10};
const double kRs[] = {1.0, 0.5, kCriticalRatio, 0.25, 0.1};

double total_atom_mass(const SparsePrior& p) {
  double s = 0.0;
  for (const Atom& a : p.atoms) s += 2.0 * a.mass;
  return s;
}

}  // namespace

TEST_CASE("model config") {
  const ModelConfig a = make_config(0.1, 1.0);
  CHECK(a.v == 0.5);
  CHECK(a.lambda == doctest::Approx(std::sqrt(std::log(10.0))).epsilon(1e-15));
  CHECK(a.lambda == doctest::Approx(1.5174).epsilon(1e-4));
  CHECK(a.lambda * a.lambda / (2.0 * a.r) == doctest::Approx(1.1513).epsilon(5e-5));
  const ModelConfig b = make_config(1e-10, 0.1);
  CHECK(b.v == doctest::Approx(1.0 / 11.0).epsilon(1e-15));
  CHECK(b.lambda * b.lambda / (2.0 * b.r) == doctest::Approx(20.9326).epsilon(5e-6));
  const ModelConfig c = make_config(std::exp(-1.0), 1.0);
  CHECK(c.lambda == doctest::Approx(1.0).epsilon(1e-15));
  for (double eta : kEtas) {
    for (double r : kRs) {
      const ModelConfig m = make_config(eta, r);
      CHECK(m.v > 0.0);
      CHECK(m.v < 1.0);
      CHECK(std::abs(m.zeta - std::exp(-m.lambda * m.lambda / 2.0)) < 1e-12 * m.zeta);
    }
  }
  CHECK_THROWS_AS(make_config(0.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(make_config(1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(make_config(0.1, 0.0), std::domain_error);
  CHECK_THROWS_AS(make_config(0.1, -1.0), std::domain_error);
}

TEST_CASE("spacing factor and inner-zone size") {
  CHECK(b_of_r(1.0) == 1.0);
  CHECK(b_of_r(kCriticalRatio) == 1.0);
  CHECK(b_of_r(0.1) == doctest::Approx(11.0 / 30.0).epsilon(1e-15));
  CHECK(b_of_r(0.3) < 1.0);
  CHECK_THROWS_AS(b_of_r(0.0), std::domain_error);
  CHECK(K_of_b(1.0) == 3);
  CHECK(K_of_b(11.0 / 30.0) == 11);
  CHECK(K_of_b(0.25) == 17);
  CHECK_THROWS_AS(K_of_b(0.0), std::domain_error);
  CHECK_THROWS_AS(K_of_b(1.5), std::domain_error);
  // The critical ratio is the root of 4r^2 + 2r - 1.
  CHECK(std::abs(4.0 * kCriticalRatio * kCriticalRatio + 2.0 * kCriticalRatio - 1.0) < 1e-15);
}

TEST_CASE("grid prior") {
  const ModelConfig cfg = make_config(0.1, 1.0);
  const SparsePrior p = grid_prior(cfg, 5.0 * cfg.lambda);
  CHECK(p.weight_at_zero == doctest::Approx(0.9).epsilon(1e-15));
  CHECK(p.atoms[0].mu == doctest::Approx(cfg.lambda).epsilon(1e-15));
  CHECK(2.0 * p.atoms[0].mass == doctest::Approx(0.1 * (1.0 - std::pow(10.0, -0.5))).epsilon(1e-14));
  CHECK(2.0 * p.atoms[0].mass == doctest::Approx(0.068377).epsilon(1e-5));
  for (std::size_t j = 0; j + 2 < p.atoms.size(); ++j) {
    CHECK(p.atoms[j + 1].mass / p.atoms[j].mass == doctest::Approx(cfg.zeta).epsilon(1e-13));
    CHECK(p.atoms[j + 1].mu == doctest::Approx(cfg.lambda * (j + 2)).epsilon(1e-14));
  }
  CHECK(std::abs(p.total_mass() - 1.0) < 1e-10);
  CHECK(p.atoms.back().mu >= 5.0 * cfg.lambda + 15.0);
  CHECK_FALSE(p.slab.has_value());
}

TEST_CASE("discrete prior preconditions") {
  CHECK_THROWS_AS(grid_prior(make_config(0.5, 1.0), 5.0), std::domain_error);
  CHECK_THROWS_AS(grid_prior(make_config(0.1, 1.0), 0.0), std::domain_error);
  CHECK_THROWS_AS(grid_prior(make_config(0.1, 1.0), 5.0, 1e-6), std::domain_error);
  CHECK_THROWS_AS(bigrid_prior(make_config(0.7, 1.0), 5.0), std::domain_error);
}

TEST_CASE("bi-grid prior layout") {
  const ModelConfig cfg = make_config(0.1, 0.1);
  const BiGridPrior bg = bigrid_prior(cfg, 5.0 * cfg.lambda);
  CHECK(bg.spec.b == doctest::Approx(11.0 / 30.0).epsilon(1e-15));
  CHECK(bg.spec.K == 11);
  for (int k = 1; k <= 11; ++k) {
    CHECK(bg.prior.atoms[k - 1].mu == doctest::Approx(cfg.lambda * (1.0 + (k - 1) * bg.spec.b)).epsilon(1e-14));
  }
  CHECK(bg.prior.atoms[11].mu - bg.prior.atoms[10].mu == doctest::Approx(cfg.lambda).epsilon(1e-13));
  const double b2 = bg.spec.b * bg.spec.b;
  for (int j = 1; j + 1 < static_cast<int>(bg.prior.atoms.size()); ++j) {
    const double ratio = bg.prior.atoms[j].mass / bg.prior.atoms[j - 1].mass;
    CAPTURE(j);
    if (j < bg.spec.K) {
      CHECK(ratio == doctest::Approx(std::pow(cfg.zeta, b2)).epsilon(1e-12));
    } else {
      CHECK(ratio == doctest::Approx(cfg.zeta).epsilon(1e-12));
    }
  }
  CHECK(std::abs(bg.prior.total_mass() - 1.0) < 1e-10);
}

TEST_CASE("bi-grid coincides with grid when b = 1") {
  for (double eta : kEtas) {
    for (double r : {1.0, 0.5, kCriticalRatio, 0.31, 2.0}) {
      CAPTURE(eta);
      CAPTURE(r);
      const ModelConfig cfg = make_config(eta, r);
      const SparsePrior g = grid_prior(cfg, 5.0 * cfg.lambda);
      const BiGridPrior bg = bigrid_prior(cfg, 5.0 * cfg.lambda);
      CHECK(bg.spec.b == 1.0);
      CHECK(bg.spec.c_eta == doctest::Approx((1.0 - cfg.zeta) / 2.0).epsilon(1e-14));
      REQUIRE(g.atoms.size() == bg.prior.atoms.size());
      for (std::size_t j = 0; j < g.atoms.size(); ++j) {
        CHECK(std::abs(g.atoms[j].mu - bg.prior.atoms[j].mu) <= 1e-14 * g.atoms[j].mu);
        CHECK(std::abs(g.atoms[j].mass - bg.prior.atoms[j].mass) <= 1e-14 * g.atoms[j].mass);
      }
    }
  }
}

TEST_CASE("spacing and decay laws") {
  for (double eta : kEtas) {
    for (double r : kRs) {
      const ModelConfig cfg = make_config(eta, r);
      const BiGridSpec s = bigrid_spec(cfg);
      CHECK(s.alpha(1) == 1.0);
      CHECK(s.beta(1) == 1.0);
      double prev = s.alpha(1) * s.alpha(1) - s.beta(1);
      for (int j = 1; j <= s.K + 20; ++j) {
        const double ad = s.alpha(j + 1) - s.alpha(j);
        const double bd = s.beta(j + 1) - s.beta(j);
        CHECK(ad == doctest::Approx(s.alpha_dot(j)).epsilon(1e-12));
        CHECK(bd == doctest::Approx(ad * ad).epsilon(1e-12));
        const double next = s.alpha(j + 1) * s.alpha(j + 1) - s.beta(j + 1);
        CHECK(next >= prev - 1e-12);
        prev = next;
      }
      // Normalization identity.
      const double lz = cfg.log_zeta, b2 = s.b * s.b;
      const double inv_2c = (1.0 - std::exp(b2 * s.K * lz)) / (1.0 - std::exp(b2 * lz)) +
                            std::exp((b2 * (s.K - 1) + 1.0) * lz) / (1.0 - std::exp(lz));
      CHECK(1.0 / (2.0 * s.c_eta) == doctest::Approx(inv_2c).epsilon(1e-12));
    }
  }
}

TEST_CASE("atom masses sum to eta") {
  for (double eta : kEtas) {
    for (double r : kRs) {
      const ModelConfig cfg = make_config(eta, r);
      for (double tm : {1.0, 5.0 * cfg.lambda, 40.0}) {
        CHECK(std::abs(total_atom_mass(grid_prior(cfg, tm)) - eta) < 1e-10 * std::max(eta, 1e-3));
        CHECK(std::abs(total_atom_mass(bigrid_prior(cfg, tm).prior) - eta) < 1e-10 * std::max(eta, 1e-3));
        CHECK(std::abs(bigrid_prior(cfg, tm).prior.total_mass() - 1.0) < 1e-10);
      }
    }
  }
}

TEST_CASE("spike-and-slab and point priors") {
  const SparsePrior ss = spike_slab_prior(0.1, 5.0);
  REQUIRE(ss.slab.has_value());
  CHECK(ss.slab->total_mass / (2.0 * ss.slab->half_width) == doctest::Approx(0.01).epsilon(1e-15));
  CHECK(ss.atoms.empty());
  const SparsePrior half = spike_slab_prior(0.5, 1.0);
  CHECK(half.weight_at_zero == 0.5);
  CHECK(half.slab->total_mass == 0.5);
  CHECK(spike_slab_prior(0.37, 2.0).total_mass() == 1.0);
  CHECK_THROWS_AS(spike_slab_prior(0.1, 0.0), std::domain_error);
  CHECK_THROWS_AS(spike_slab_prior(1.0, 1.0), std::domain_error);
  const SparsePrior pt = point_prior();
  CHECK(pt.weight_at_zero == 1.0);
  CHECK(pt.atoms.empty());
  CHECK_FALSE(pt.slab.has_value());
}

TEST_CASE("zone coordinates") {
  const ModelConfig cfg = make_config(0.1, 0.1);
  const BiGridSpec spec = bigrid_spec(cfg);
  Coords c = theta_to_coords(cfg.lambda, cfg, spec);
  CHECK(c.l == 1);
  CHECK(c.omega == 0.0);
  c = theta_to_coords(cfg.lambda * (1.0 + spec.b / 2.0), cfg, spec);
  CHECK(c.l == 1);
  CHECK(c.omega == doctest::Approx(spec.b / 2.0).epsilon(1e-12));
  c = theta_to_coords(cfg.lambda * (spec.alpha(spec.K) + 0.5), cfg, spec);
  CHECK(c.l == spec.K);
  CHECK(c.omega == doctest::Approx(0.5).epsilon(1e-12));
  CHECK_THROWS_AS(theta_to_coords(0.99 * cfg.lambda, cfg, spec), std::domain_error);

  for (double r : {1.0, 0.1}) {
    const ModelConfig m = make_config(1e-3, r);
    const BiGridSpec s = bigrid_spec(m);
    for (int i = 0; i <= 5000; ++i) {
      const double theta = m.lambda * (1.0 + 20.0 * i / 5000.0);
      const Coords k = theta_to_coords(theta, m, s);
      CHECK(k.l >= 1);
      CHECK(k.omega >= 0.0);
      CHECK(k.omega < s.alpha_dot(k.l));
      const double back = m.lambda * (s.alpha(k.l) + k.omega);
      CHECK(std::abs(back - theta) <= 1e-12 * theta);
    }
    // Every support point maps to omega = 0 in its own zone.
    for (int j = 1; j <= s.K + 5; ++j) {
      const Coords k = theta_to_coords(m.lambda * s.alpha(j), m, s);
      CHECK(k.l == j);
      CHECK(k.omega == doctest::Approx(0.0).epsilon(1e-12));
    }
  }
}
