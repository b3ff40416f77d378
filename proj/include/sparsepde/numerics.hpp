#pragma once

#include <stdexcept>
#include <string>

namespace sparsepde {

/// Raised when a computation that should be finite is not (overflow, NaN from
/// a user integrand, ...). Distinct from std::domain_error, which flags bad
/// inputs.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kInvSqrt2Pi = 0.39894228040143267794;  // phi(0)
inline constexpr double kLogInvSqrt2Pi = -0.91893853320467274178;
inline constexpr double kSqrt1_2 = 0.70710678118654752440;

double std_normal_pdf(double z);
double log_std_normal_pdf(double z);

/// Phi(z), evaluated through erfc on the side that keeps full relative
/// precision. Underflows to 0 below about z = -38.4, where the true value is
/// below the smallest subnormal double.
double std_normal_cdf(double z);

/// 1 - Phi(z) without cancellation.
double std_normal_sf(double z);

/// log Phi(z), finite for every finite z (asymptotic expansion in the far
/// lower tail).
double log_std_normal_cdf(double z);

/// log(Phi(b) - Phi(a)) for a < b, accurate in both tails. Throws
/// std::domain_error if a >= b.
double log_interval_prob(double a, double b);

/// Integral of z^2 phi(z) over [a, b] = Phi(b) - Phi(a) + a phi(a) - b phi(b).
double truncated_second_moment(double a, double b);

/// log(1 + e^x) without overflow.
double softplus(double x);

}  // namespace sparsepde
