#include "resolv/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "resolv/errors.hpp"

namespace resolv {

GaussHermiteRule gauss_hermite(int order) {
    if (order < 1) throw DomainError("gauss_hermite: order must be >= 1");
    const int n = order;
    GaussHermiteRule rule;
    rule.nodes.assign(n, 0.0);
    rule.weights.assign(n, 0.0);

    const double pim4 = 0.7511255444649425; // pi^{-1/4}
    const int m = (n + 1) / 2;
    double z = 0.0;
    for (int i = 0; i < m; ++i) {
        // Initial guesses for the largest roots, then step down.
        if (i == 0) {
            z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
        } else if (i == 1) {
            z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
        } else if (i == 2) {
            z = 1.86 * z - 0.86 * rule.nodes[0];
        } else if (i == 3) {
            z = 1.91 * z - 0.91 * rule.nodes[1];
        } else {
            z = 2.0 * z - rule.nodes[i - 2];
        }
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p1 = pim4;
            double p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = z * std::sqrt(2.0 / (j + 1.0)) * p2 -
                     std::sqrt(static_cast<double>(j) / (j + 1.0)) * p3;
            }
            pp = std::sqrt(2.0 * n) * p2;
            const double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) <= 1e-15 * (1.0 + std::abs(z))) break;
        }
        rule.nodes[i] = z;             // stored descending in the first half
        rule.nodes[n - 1 - i] = -z;
        rule.weights[i] = 2.0 / (pp * pp);
        rule.weights[n - 1 - i] = rule.weights[i];
    }
    return rule;
}

double GaussHermiteRule::gaussian_expectation(
    double mean, double variance, const std::function<double(double)>& g) const {
    const double scale = std::sqrt(2.0 * variance);
    double acc = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i)
        acc += weights[i] * g(mean + scale * nodes[i]);
    return acc / std::sqrt(std::numbers::pi);
}

} // namespace resolv
