#include "sparsepde/quadrature.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "sparsepde/numerics.hpp"

namespace sparsepde {

namespace {

constexpr double kHalfWidth = 14.0;
constexpr int kPanelPoints = 16;
constexpr int kMinCompositeOrder = 96;

// Physicists' Gauss-Hermite (weight e^{-x^2}) by Newton iteration on the
// orthonormal recurrence.
void gauss_hermite_phys(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  const double pim4 = 0.7511255444649425;  // pi^{-1/4}
  const int m = (n + 1) / 2;
  double z = 0.0;
  for (int i = 0; i < m; ++i) {
    if (i == 0) {
      z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -0.16667);
    } else if (i == 1) {
      z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
    } else if (i == 2) {
      z = 1.86 * z - 0.86 * x[0];
    } else if (i == 3) {
      z = 1.91 * z - 0.91 * x[1];
    } else {
      z = 2.0 * z - x[i - 2];
    }
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = pim4, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / (j + 1)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1)) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      const double dz = p1 / pp;
      z -= dz;
      if (std::abs(dz) <= 1e-15 * std::max(1.0, std::abs(z))) break;
    }
    x[i] = z;
    x[n - 1 - i] = -z;
    w[i] = 2.0 / (pp * pp);
    w[n - 1 - i] = w[i];
  }
}

void build(int order, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.clear();
  weights.clear();
  if (order < kMinCompositeOrder) {
    std::vector<double> x, w;
    gauss_hermite_phys(order, x, w);
    // x_i descend; emit ascending z = sqrt(2) x with weights / sqrt(pi).
    for (int i = order - 1; i >= 0; --i) {
      nodes.push_back(std::sqrt(2.0) * x[i]);
      weights.push_back(w[i] / std::sqrt(kPi));
    }
    return;
  }
  const int panels = (order + kPanelPoints - 1) / kPanelPoints;
  const int base = order / panels;
  const int extra = order % panels;
  const double h = 2.0 * kHalfWidth / panels;
  std::vector<double> x, w;
  for (int p = 0; p < panels; ++p) {
    const int m = base + (p < extra ? 1 : 0);
    gauss_legendre(m, x, w);
    const double lo = -kHalfWidth + p * h;
    for (int i = 0; i < m; ++i) {
      const double z = lo + 0.5 * h * (x[i] + 1.0);
      nodes.push_back(z);
      weights.push_back(0.5 * h * w[i] * std_normal_pdf(z));
    }
  }
}

template <class Nodes, class Weights, class F>
double weighted_sum(const Nodes& z, const Weights& w, const F& f) {
  double s = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double fi = f(z[i]);
    if (!std::isfinite(fi)) {
      std::ostringstream msg;
      msg << "gauss_expect: integrand is not finite at node z=" << z[i];
      throw NumericalError(msg.str());
    }
    s += w[i] * fi;
  }
  return s;
}

}  // namespace

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1);
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double dz = p1 / pp;
      z -= dz;
      if (std::abs(dz) <= 1e-16) break;
    }
    nodes[i] = -z;
    nodes[n - 1 - i] = z;
    weights[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    weights[n - 1 - i] = weights[i];
  }
}

void composite_legendre(double lo, double hi, int panels, int per_panel, std::vector<double>& nodes,
                        std::vector<double>& weights) {
  std::vector<double> x, w;
  gauss_legendre(per_panel, x, w);
  nodes.clear();
  weights.clear();
  const double h = (hi - lo) / panels;
  for (int p = 0; p < panels; ++p) {
    const double a = lo + p * h;
    for (int i = 0; i < per_panel; ++i) {
      nodes.push_back(a + 0.5 * h * (x[i] + 1.0));
      weights.push_back(0.5 * h * w[i]);
    }
  }
}

QuadratureRule make_quadrature(int order) {
  if (order < 8) throw std::domain_error("make_quadrature: order must be >= 8");
  QuadratureRule rule;
  build(order, rule.nodes_, rule.weights_);
  build(2 * order, rule.doubled_nodes_, rule.doubled_weights_);
  return rule;
}

Expectation gauss_expect(const QuadratureRule& rule, const std::function<double(double)>& f) {
  Expectation e;
  e.value = weighted_sum(rule.nodes(), rule.weights(), f);
  const double fine = weighted_sum(rule.doubled_nodes(), rule.doubled_weights(), f);
  e.err_estimate = std::abs(e.value - fine);
  return e;
}

double gauss_expect_value(const QuadratureRule& rule, const std::function<double(double)>& f) {
  return weighted_sum(rule.nodes(), rule.weights(), f);
}

}  // namespace sparsepde
