#include "sparsepde/numerics.hpp"

#include <cmath>
#include <limits>

namespace sparsepde {

double std_normal_pdf(double z) { return kInvSqrt2Pi * std::exp(-0.5 * z * z); }

double log_std_normal_pdf(double z) { return kLogInvSqrt2Pi - 0.5 * z * z; }

double std_normal_cdf(double z) { return 0.5 * std::erfc(-z * kSqrt1_2); }

double std_normal_sf(double z) { return 0.5 * std::erfc(z * kSqrt1_2); }

double log_std_normal_cdf(double z) {
  if (z > -37.0) {
    if (z > 0.0) return std::log1p(-std_normal_sf(z));
    return std::log(std_normal_cdf(z));
  }
  if (std::isinf(z)) return -std::numeric_limits<double>::infinity();
  // Mills ratio expansion; the next omitted term is O(z^-12) ~ 1e-15 at z=-37.
  const double w = 1.0 / (z * z);
  const double series =
      1.0 - w * (1.0 - 3.0 * w * (1.0 - 5.0 * w * (1.0 - 7.0 * w * (1.0 - 9.0 * w))));
  return log_std_normal_pdf(z) - std::log(-z) + std::log(series);
}

namespace {

// log(1 - e^x) for x <= 0.
double log1mexp(double x) {
  if (x > -0.6931471805599453) return std::log(-std::expm1(x));
  return std::log1p(-std::exp(x));
}

}  // namespace

double log_interval_prob(double a, double b) {
  if (!(a < b)) throw std::domain_error("log_interval_prob: requires a < b");
  if (b <= 0.0) {
    const double lb = log_std_normal_cdf(b);
    const double la = log_std_normal_cdf(a);
    return lb + log1mexp(la - lb);
  }
  if (a >= 0.0) {
    // Upper tail: Q(a) - Q(b) with Q(z) = Phi(-z).
    const double la = log_std_normal_cdf(-a);
    const double lb = log_std_normal_cdf(-b);
    return la + log1mexp(lb - la);
  }
  // Interval straddles zero: two positive halves, each accurate near 0.
  return std::log(0.5 * (std::erf(b * kSqrt1_2) + std::erf(-a * kSqrt1_2)));
}

double truncated_second_moment(double a, double b) {
  if (!(a < b)) throw std::domain_error("truncated_second_moment: requires a < b");
  const double mass = std::exp(log_interval_prob(a, b));
  // a*phi(a) with a = +-1e308 sentinels: phi underflows first, so guard the
  // 0 * huge product explicitly.
  auto edge = [](double t) {
    const double p = std_normal_pdf(t);
    return p == 0.0 ? 0.0 : t * p;
  };
  return mass + edge(a) - edge(b);
}

double softplus(double x) {
  if (x > 35.0) return x + std::exp(-x);
  return std::log1p(std::exp(x));
}

}  // namespace sparsepde
