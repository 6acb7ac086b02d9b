#ifndef RESOLV_BOUNDS_HPP
#define RESOLV_BOUNDS_HPP

#include <span>
#include <utility>

#include "resolv/math_util.hpp"

namespace resolv {

// ---------------------------------------------------------------------------
// Tail bounds for the codebook ensemble, all rates in nats.
// ---------------------------------------------------------------------------

// P( atypical mass > mu (1 + delta) ) <= exp(-delta^2 mu exp(nR) / 3),
// valid for mu bounding the expected atypical mass and delta in [0,1].
double atypical_mass_tail_bound(double mu, double delta, int n, double rate);

// Chernoff-Hoeffding bound on the typical part of the variational distance:
//   (1 + sqrt(3 pi / 2) exp(3 lambda^2 / (4 r)) lambda / sqrt(r)
//      + exp(-lambda)) exp(-delta lambda),
// with r = exp(n (R - I - epsilon)). Requires r / (6 lambda) >= 1; throws
// HypothesisViolationError otherwise.
double typical_part_tail_bound(double delta, double lambda, int n, double rate,
                               double mi, double epsilon);
// Same bound in log domain (safe for schedule values that underflow).
double typical_part_tail_bound_log(double delta, double lambda, int n,
                                   double rate, double mi, double epsilon);

// Markov/Chernoff tail through the order-alpha divergence:
// exp(-n (alpha - 1)(I + epsilon - D_alpha)); upper-bounds the exact
// atypical probability for every alpha > 1.
double atypical_chernoff_bound(double alpha, double mi, double epsilon,
                               double d_alpha, int n);

// ---------------------------------------------------------------------------
// First-order (doubly exponential) concentration schedule.
// ---------------------------------------------------------------------------

struct FirstOrderParams {
    double epsilon = 0.0;
    double alpha = 0.0;
    double beta1 = 0.0;
    double beta2 = 0.0;
    double gamma1 = 0.0;
    double gamma2 = 0.0;
    int n_min = 1; // smallest n with exp(n(R-I-eps))/6 >= exp(n beta2)
};

struct FirstOrderSearchGrid {
    int epsilon_points = 50;  // interior grid on (0, R - I)
    double margin = 0.95;     // strict-inequality headroom factor
};

// Grid search over (alpha from the divergence curve, epsilon) maximizing
// gamma1, then gamma2, tie-broken toward smaller alpha. The curve must be
// sampled at alpha > 1 ((alpha, D_alpha) pairs). Throws InfeasibleParamsError
// when no grid point satisfies every constraint (e.g. R <= I).
FirstOrderParams select_first_order_params(
    double mi, std::span<const std::pair<double, double>> renyi_curve,
    double rate, const FirstOrderSearchGrid& grid = {});

// Re-derivation of the defining inequalities, kept separate from the
// selector's arithmetic so tests can cross-examine its output.
bool validate_first_order_params(const FirstOrderParams& p, double mi,
                                 double rate, double d_alpha);

// TV threshold exp(-gamma1 n) and ensemble failure bound exp(-exp(gamma2 n)).
double first_order_threshold(double gamma1, int n);
double first_order_rhs(double gamma2, int n);
// log(-log rhs) = gamma2 n, for block lengths where the rhs underflows.
double first_order_rhs_log_neg_log(double gamma2, int n);

// ---------------------------------------------------------------------------
// Second-order rate schedule.
// ---------------------------------------------------------------------------

struct SecondOrderParams {
    double xi = 0.0;
    double c = 0.0;
    double d = 0.0;
    int n = 0;
    double rate = 0.0;    // I + sqrt(V/n) Qinv(xi) + c log(n)/n
    double epsilon = 0.0; // sqrt(V/n) Qinv(xi) + d log(n)/n
    double mu = 0.0;      // Q(Qinv(xi) + d log(n)/sqrt(nV)) + rho/(V^{3/2} sqrt(n))
};

// Populates the schedule at block length n. Throws DomainError when V = 0
// (degenerate dispersion) and HypothesisViolationError when the conditions
// c > 1, d in (0, c-1) or n^{(c-d)/2} >= 6 fail.
SecondOrderParams second_order_schedule(double mi, double v, double rho,
                                        double xi, double c, double d, int n);

// exp(-n mu exp(nR) / 3) + (7/6 + sqrt(3 pi / 2) e^{3/4}) exp(-n^{(c-d-1)/2})
double second_order_rhs(double mu, int n, double rate, double c, double d);

// Normal-approximation slack rho / (V^{3/2} sqrt(n)) with the unit constant.
double berry_esseen_gap(double v, double rho, int n);

} // namespace resolv

#endif
