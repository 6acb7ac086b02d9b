#ifndef RESOLV_MATH_UTIL_HPP
#define RESOLV_MATH_UTIL_HPP

#include <cmath>
#include <limits>
#include <span>

namespace resolv {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kPosInf = std::numeric_limits<double>::infinity();

// log(exp(a) + exp(b)) without overflow; handles -inf identities.
inline double log_sum_exp(double a, double b) {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    const double m = a > b ? a : b;
    return m + std::log1p(std::exp((a > b ? b : a) - m));
}

// log(sum_i exp(v_i)); returns -inf for an empty or all -inf span.
double log_sum_exp(std::span<const double> vals);

inline double gaussian_log_density(double x, double mean, double variance) {
    const double d = x - mean;
    return -0.5 * std::log(2.0 * 3.14159265358979323846 * variance) -
           d * d / (2.0 * variance);
}

// Gaussian upper tail Q(a) = 1 - Phi(a).
double q_function(double a);

// Inverse of q_function on (0,1); Newton refined to ~1e-14 relative.
// Throws DomainError outside (0,1).
double q_inverse(double p);

// Standard normal CDF, needed for quantizer bins.
inline double gaussian_cdf(double a) { return 1.0 - q_function(a); }

// Quantile of N(0,1).
inline double gaussian_quantile(double p) { return -q_inverse(p); }

// Sample mean and standard error of the mean.
struct MeanStdErr {
    double mean = 0.0;
    double std_error = 0.0;
};
MeanStdErr mean_std_error(std::span<const double> vals);

} // namespace resolv

#endif
