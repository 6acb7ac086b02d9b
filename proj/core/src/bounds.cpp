#include "resolv/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "resolv/errors.hpp"

namespace resolv {

namespace {
constexpr double kSqrt3PiOver2 = 2.1708037636748028; // sqrt(3 pi / 2)
} // namespace

double atypical_mass_tail_bound(double mu, double delta, int n, double rate) {
    if (!(mu >= 0.0 && mu <= 1.0))
        throw DomainError("atypical_mass_tail_bound: mu must lie in [0,1]");
    if (!(delta >= 0.0 && delta <= 1.0))
        throw DomainError("atypical_mass_tail_bound: delta must lie in [0,1]");
    const double count = std::exp(n * rate);
    return std::exp(-delta * delta * mu * count / 3.0);
}

double typical_part_tail_bound_log(double delta, double lambda, int n,
                                   double rate, double mi, double epsilon) {
    if (!(delta > 0.0) || !(lambda > 0.0))
        throw DomainError("typical_part_tail_bound: delta and lambda must be positive");
    const double log_r = n * (rate - mi - epsilon);
    // r / (6 lambda) >= 1  <=>  log r - log lambda >= log 6
    if (log_r - std::log(lambda) < std::log(6.0))
        throw HypothesisViolationError(
            "typical_part_tail_bound: requires exp(n(R-I-eps)) / (6 lambda) >= 1");
    const double mid_log = std::log(kSqrt3PiOver2) +
                           0.75 * lambda * lambda * std::exp(-log_r) +
                           std::log(lambda) - 0.5 * log_r;
    const double prefactor_log =
        log_sum_exp(log_sum_exp(0.0, mid_log), -lambda);
    return prefactor_log - delta * lambda;
}

double typical_part_tail_bound(double delta, double lambda, int n, double rate,
                               double mi, double epsilon) {
    return std::exp(typical_part_tail_bound_log(delta, lambda, n, rate, mi, epsilon));
}

double atypical_chernoff_bound(double alpha, double mi, double epsilon,
                               double d_alpha, int n) {
    if (!(alpha > 1.0))
        throw DomainError("atypical_chernoff_bound: alpha must be > 1");
    return std::exp(-static_cast<double>(n) * (alpha - 1.0) *
                    (mi + epsilon - d_alpha));
}

FirstOrderParams select_first_order_params(
    double mi, std::span<const std::pair<double, double>> renyi_curve,
    double rate, const FirstOrderSearchGrid& grid) {
    if (!(rate > mi))
        throw InfeasibleParamsError(
            "select_first_order_params: rate must exceed the mutual information");
    if (renyi_curve.empty())
        throw InfeasibleParamsError("select_first_order_params: empty divergence curve");

    bool found = false;
    FirstOrderParams best;
    std::tuple<double, double, double> best_key{-1.0, -1.0, 0.0};
    for (int k = 1; k <= grid.epsilon_points; ++k) {
        const double eps =
            (rate - mi) * static_cast<double>(k) / (grid.epsilon_points + 1);
        const double half = (rate - mi - eps) / 2.0;
        if (!(half > 0.0)) continue;
        for (const auto& [alpha, d_alpha] : renyi_curve) {
            if (!(alpha > 1.0) || !std::isfinite(d_alpha)) continue;
            const double divergence_bound = (alpha - 1.0) * (mi + eps - d_alpha);
            if (!(divergence_bound > 0.0)) continue;
            const double beta1 = std::min(divergence_bound, grid.margin * half);
            const double beta2 = 0.5 * (beta1 + half);
            const double gamma1 = grid.margin * beta1;
            const double gamma2 =
                grid.margin * std::min(rate - beta1, beta2 - beta1);
            if (!(gamma1 > 0.0) || !(gamma2 > 0.0)) continue;
            const std::tuple<double, double, double> key{gamma1, gamma2, -alpha};
            if (!found || key > best_key) {
                found = true;
                best_key = key;
                best.epsilon = eps;
                best.alpha = alpha;
                best.beta1 = beta1;
                best.beta2 = beta2;
                best.gamma1 = gamma1;
                best.gamma2 = gamma2;
            }
        }
    }
    if (!found)
        throw InfeasibleParamsError(
            "select_first_order_params: no feasible grid point (divergence curve "
            "too large or rate too close to the mutual information)");
    const double denom = rate - mi - best.epsilon - best.beta2;
    best.n_min = denom > 0.0
                     ? std::max(1, static_cast<int>(std::ceil(std::log(6.0) / denom)))
                     : 1;
    return best;
}

bool validate_first_order_params(const FirstOrderParams& p, double mi,
                                 double rate, double d_alpha) {
    const double half = (rate - mi - p.epsilon) / 2.0;
    const bool eps_ok = p.epsilon > 0.0 && p.epsilon < rate - mi;
    const bool beta1_ok =
        p.beta1 > 0.0 &&
        p.beta1 <= (p.alpha - 1.0) * (mi + p.epsilon - d_alpha) + 1e-15 &&
        p.beta1 < half;
    const bool beta2_ok = p.beta1 < p.beta2 && p.beta2 < half;
    const bool gamma1_ok = p.gamma1 > 0.0 && p.gamma1 < p.beta1;
    const bool gamma2_ok = p.gamma2 > 0.0 &&
                           p.gamma2 < std::min(rate - p.beta1, p.beta2 - p.beta1);
    return eps_ok && beta1_ok && beta2_ok && gamma1_ok && gamma2_ok;
}

double first_order_threshold(double gamma1, int n) {
    if (!(gamma1 > 0.0)) throw DomainError("first_order_threshold: gamma1 must be > 0");
    return std::exp(-gamma1 * n);
}

double first_order_rhs(double gamma2, int n) {
    if (!(gamma2 > 0.0)) throw DomainError("first_order_rhs: gamma2 must be > 0");
    return std::exp(-std::exp(gamma2 * n));
}

double first_order_rhs_log_neg_log(double gamma2, int n) {
    if (!(gamma2 > 0.0)) throw DomainError("first_order_rhs: gamma2 must be > 0");
    return gamma2 * n;
}

SecondOrderParams second_order_schedule(double mi, double v, double rho,
                                        double xi, double c, double d, int n) {
    if (!(v > 0.0))
        throw DomainError("second_order_schedule: degenerate dispersion (V = 0)");
    if (!(rho >= 0.0)) throw DomainError("second_order_schedule: rho must be >= 0");
    if (!(xi > 0.0 && xi < 1.0))
        throw DomainError("second_order_schedule: xi must lie in (0,1)");
    if (!(c > 1.0))
        throw HypothesisViolationError("second_order_schedule: requires c > 1");
    if (!(d > 0.0 && d < c - 1.0))
        throw HypothesisViolationError("second_order_schedule: requires d in (0, c-1)");
    if (!(std::pow(static_cast<double>(n), (c - d) / 2.0) >= 6.0))
        throw HypothesisViolationError(
            "second_order_schedule: requires n^{(c-d)/2} >= 6");
    SecondOrderParams p;
    p.xi = xi;
    p.c = c;
    p.d = d;
    p.n = n;
    const double qinv = q_inverse(xi);
    const double log_n = std::log(static_cast<double>(n));
    p.rate = mi + std::sqrt(v / n) * qinv + c * log_n / n;
    p.epsilon = std::sqrt(v / n) * qinv + d * log_n / n;
    p.mu = q_function(qinv + d * log_n / std::sqrt(n * v)) +
           rho / (std::pow(v, 1.5) * std::sqrt(static_cast<double>(n)));
    return p;
}

double second_order_rhs(double mu, int n, double rate, double c, double d) {
    const double first = std::exp(-static_cast<double>(n) * mu * std::exp(n * rate) / 3.0);
    const double constant = 7.0 / 6.0 + kSqrt3PiOver2 * std::exp(0.75);
    const double second =
        constant * std::exp(-std::pow(static_cast<double>(n), 0.5 * (c - d - 1.0)));
    return first + second;
}

double berry_esseen_gap(double v, double rho, int n) {
    if (!(v > 0.0)) throw DomainError("berry_esseen_gap: degenerate dispersion (V = 0)");
    return rho / (std::pow(v, 1.5) * std::sqrt(static_cast<double>(n)));
}

} // namespace resolv
