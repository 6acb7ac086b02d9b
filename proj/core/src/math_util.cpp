#include "resolv/math_util.hpp"

#include <algorithm>
#include <cmath>

#include "resolv/errors.hpp"

namespace resolv {

double log_sum_exp(std::span<const double> vals) {
    double m = kNegInf;
    for (double v : vals) m = std::max(m, v);
    if (m == kNegInf) return kNegInf;
    if (std::isinf(m)) return kPosInf;
    double s = 0.0;
    for (double v : vals) s += std::exp(v - m);
    return m + std::log(s);
}

double q_function(double a) {
    return 0.5 * std::erfc(a * 0.70710678118654752440);
}

namespace {

// Acklam's rational approximation to the normal quantile, used only as the
// Newton starting point; the refinement below makes the result independent
// of its accuracy.
double normal_quantile_approx(double p) {
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p > 1.0 - plow) {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

} // namespace

double q_inverse(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw DomainError("q_inverse: argument must lie in (0,1)");
    // Q(a) = p  <=>  Phi(a) = 1 - p
    double x = normal_quantile_approx(1.0 - p);
    for (int it = 0; it < 4; ++it) {
        const double err = q_function(x) - p;
        const double pdf = 0.39894228040143267794 * std::exp(-0.5 * x * x);
        if (pdf == 0.0) break;
        x += err / pdf; // Q' = -pdf
    }
    return x;
}

MeanStdErr mean_std_error(std::span<const double> vals) {
    MeanStdErr r;
    const auto n = static_cast<double>(vals.size());
    if (vals.empty()) return r;
    double s = 0.0;
    for (double v : vals) s += v;
    r.mean = s / n;
    if (vals.size() < 2) return r;
    double ss = 0.0;
    for (double v : vals) {
        const double d = v - r.mean;
        ss += d * d;
    }
    r.std_error = std::sqrt(ss / (n - 1.0) / n);
    return r;
}

} // namespace resolv
