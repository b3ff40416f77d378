#pragma once

#include <functional>
#include <span>
#include <vector>

namespace sparsepde {

inline constexpr int kDefaultQuadOrder = 256;

/// Fixed rule for E[f(Z)], Z ~ N(0,1): sum_i w_i f(z_i).
///
/// Orders >= 96 use composite 16-point Gauss-Legendre panels on [-14, 14]
/// with the normal density folded into the weights; smaller orders use
/// probabilists' Gauss-Hermite nodes. Every rule also carries its
/// double-order companion so that gauss_expect can report a doubling error
/// estimate without rebuilding anything.
class QuadratureRule {
 public:
  int order() const { return static_cast<int>(nodes_.size()); }
  std::span<const double> nodes() const { return nodes_; }
  std::span<const double> weights() const { return weights_; }
  std::span<const double> doubled_nodes() const { return doubled_nodes_; }
  std::span<const double> doubled_weights() const { return doubled_weights_; }

 private:
  friend QuadratureRule make_quadrature(int order);
  std::vector<double> nodes_, weights_;
  std::vector<double> doubled_nodes_, doubled_weights_;
};

/// Throws std::domain_error for order < 8.
QuadratureRule make_quadrature(int order = kDefaultQuadOrder);

struct Expectation {
  double value = 0.0;
  double err_estimate = 0.0;  // |value - value at doubled order|
};

/// Throws NumericalError naming the node if f is non-finite there.
Expectation gauss_expect(const QuadratureRule& rule, const std::function<double(double)>& f);

/// Value only, on the base nodes.
double gauss_expect_value(const QuadratureRule& rule, const std::function<double(double)>& f);

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// Composite Gauss-Legendre on [lo, hi] with `panels` panels of `per_panel`
/// points each (plain Lebesgue weights, no density folded in).
void composite_legendre(double lo, double hi, int panels, int per_panel, std::vector<double>& nodes,
                        std::vector<double>& weights);

}  // namespace sparsepde
