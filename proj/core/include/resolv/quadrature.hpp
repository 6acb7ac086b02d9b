#ifndef RESOLV_QUADRATURE_HPP
#define RESOLV_QUADRATURE_HPP

#include <functional>
#include <vector>

namespace resolv {

// Gauss-Hermite rule: integral over R of f(t) exp(-t^2) dt ~= sum w_i f(t_i).
struct GaussHermiteRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    // E[g(X)] for X ~ N(mean, variance)
    double gaussian_expectation(double mean, double variance,
                                const std::function<double(double)>& g) const;
};

// Nodes and weights by Newton iteration on the Hermite recurrence.
// Order up to ~180 before weights underflow; default used elsewhere is 64.
GaussHermiteRule gauss_hermite(int order);

} // namespace resolv

#endif
