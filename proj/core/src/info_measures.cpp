#include "resolv/info_measures.hpp"

#include <cmath>
#include <tuple>

namespace resolv {

namespace {

// Weighted per-pair visit over the joint pmf q(x) K(x,y), skipping zero mass.
template <typename F>
void for_each_joint(const FiniteChannel& ch, const DiscreteDistribution& qx, F&& f) {
    for (int x = 0; x < ch.num_inputs(); ++x) {
        const double wx = qx.prob(x);
        if (wx == 0.0) continue;
        const auto row = ch.row(x);
        for (int y = 0; y < ch.num_outputs(); ++y) {
            const double w = wx * row[y];
            if (w == 0.0) continue;
            f(x, y, w);
        }
    }
}

} // namespace

double mutual_information(const FiniteChannel& ch, const DiscreteDistribution& qx) {
    if (qx.size() != ch.num_inputs())
        throw DomainError("mutual_information: input distribution size mismatch");
    const DiscreteDistribution qy = output_distribution(ch, qx);
    double acc = 0.0;
    bool bad = false;
    for_each_joint(ch, qx, [&](int x, int y, double w) {
        const double v = ch.kernel_log_prob(x, y) - qy.log_prob(y);
        if (!std::isfinite(v)) bad = true;
        else acc += w * v;
    });
    if (bad)
        throw EstimationError("mutual_information: divergent information density");
    return acc;
}

double mutual_information(const AwgnChannel& ch, const GaussianDistribution& qx) {
    return 0.5 * std::log1p(qx.variance() / ch.noise_variance());
}

std::pair<double, double> dispersion_moments(const FiniteChannel& ch,
                                             const DiscreteDistribution& qx) {
    const double mi = mutual_information(ch, qx);
    const DiscreteDistribution qy = output_distribution(ch, qx);
    double v = 0.0, rho = 0.0;
    for_each_joint(ch, qx, [&](int x, int y, double w) {
        const double d = ch.kernel_log_prob(x, y) - qy.log_prob(y) - mi;
        v += w * d * d;
        rho += w * std::abs(d) * d * d;
    });
    return {v, rho};
}

double info_density_mgf(const FiniteChannel& ch, const DiscreteDistribution& qx,
                        double t) {
    const DiscreteDistribution qy = output_distribution(ch, qx);
    double acc = 0.0;
    bool infinite = false;
    for_each_joint(ch, qx, [&](int x, int y, double w) {
        const double i = ch.kernel_log_prob(x, y) - qy.log_prob(y);
        if (i == kPosInf) {
            // Singular pair: exp(t * inf) dominates for t > 0, vanishes for
            // t < 0, contributes w at t = 0.
            if (t > 0.0) infinite = true;
            else if (t == 0.0) acc += w;
            return;
        }
        acc += w * std::exp(t * i);
    });
    return infinite ? kPosInf : acc;
}

double renyi_divergence(const FiniteChannel& ch, const DiscreteDistribution& qx,
                        double alpha) {
    if (!(alpha > 1.0))
        throw DomainError("renyi_divergence: order must be > 1");
    const double mgf = info_density_mgf(ch, qx, alpha - 1.0);
    if (mgf == kPosInf) return kPosInf;
    return std::log(mgf) / (alpha - 1.0);
}

std::vector<double> default_alpha_grid() {
    std::vector<double> alphas;
    alphas.reserve(100);
    for (int k = 1; k <= 100; ++k) alphas.push_back(1.0 + 0.01 * k);
    return alphas;
}

InfoStats compute_info_stats(const FiniteChannel& ch, const DiscreteDistribution& qx,
                             std::span<const double> alphas,
                             std::span<const double> ts) {
    InfoStats s;
    s.mutual_information = mutual_information(ch, qx);
    std::tie(s.central_second_moment, s.abs_third_moment) =
        dispersion_moments(ch, qx);

    std::vector<double> default_alphas;
    if (alphas.empty()) {
        default_alphas = default_alpha_grid();
        alphas = default_alphas;
    }
    std::vector<double> default_ts;
    if (ts.empty()) {
        for (const double a : alphas) default_ts.push_back(a - 1.0);
        ts = default_ts;
    }
    for (const double t : ts)
        s.mgf_grid.emplace_back(t, info_density_mgf(ch, qx, t));
    for (const double a : alphas)
        s.renyi_grid.emplace_back(a, renyi_divergence(ch, qx, a));
    return s;
}

} // namespace resolv
