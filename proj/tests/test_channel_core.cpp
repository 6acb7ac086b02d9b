#include <doctest.h>

#include <cmath>
#include <vector>

#include "resolv/alphabet.hpp"
#include "resolv/channel.hpp"
#include "resolv/distribution.hpp"
#include "resolv/errors.hpp"

using namespace resolv;

TEST_CASE("alphabet invariants") {
    const Alphabet a = Alphabet::finite(3, {"a", "b", "c"});
    CHECK(a.size() == 3);
    CHECK(a.contains(2));
    CHECK(!a.contains(3));
    CHECK_THROWS_AS(Alphabet::finite(0), DomainError);
    CHECK_THROWS_AS(Alphabet::finite(2, {"only-one"}), DomainError);
    CHECK_THROWS_AS(Alphabet::real_line().size(), DomainError);
}

TEST_CASE("discrete distribution validation") {
    CHECK_THROWS_AS(DiscreteDistribution({0.5, 0.6}), DomainError);
    CHECK_THROWS_AS(DiscreteDistribution({1.1, -0.1}), DomainError);
    CHECK_THROWS_AS(DiscreteDistribution({}), DomainError);
    const auto u = DiscreteDistribution::uniform(4);
    CHECK(u.prob(0) == doctest::Approx(0.25));
    CHECK(u.log_prob(3) == doctest::Approx(std::log(0.25)));
    CHECK_THROWS_AS(u.prob(4), DomainError);
    const auto pm = DiscreteDistribution::point_mass(3, 1);
    CHECK(pm.prob(1) == 1.0);
    CHECK(pm.log_prob(0) == kNegInf);
    Rng rng(5);
    for (int i = 0; i < 100; ++i) CHECK(pm.sample(rng) == 1);
}

TEST_CASE("finite kernel pointwise evaluation") {
    const auto bsc = FiniteChannel::bsc(0.25);
    CHECK(bsc.kernel_log_prob(0, 0) ==
          doctest::Approx(-0.2876820724517809).epsilon(1e-13));
    CHECK(bsc.kernel_log_prob(0, 1) == doctest::Approx(std::log(0.25)));

    const auto ident = FiniteChannel::identity(2);
    CHECK(ident.kernel_log_prob(0, 0) == 0.0);
    CHECK(ident.kernel_log_prob(0, 1) == kNegInf);

    CHECK_THROWS_AS(bsc.kernel_log_prob(2, 0), DomainError);
    CHECK_THROWS_AS(bsc.kernel_log_prob(0, -1), DomainError);
    CHECK_THROWS_AS(FiniteChannel(2, 2, {0.5, 0.6, 0.5, 0.5}), DomainError);
    CHECK_THROWS_AS(FiniteChannel(1, 2, {1.2, -0.2}), DomainError);
}

TEST_CASE("awgn kernel log density") {
    const AwgnChannel ch(1.0);
    CHECK(ch.kernel_log_prob(0.0, 0.0) ==
          doctest::Approx(-0.9189385332046727).epsilon(1e-13));
    CHECK(ch.kernel_log_prob(1.0, 1.0) ==
          doctest::Approx(-0.9189385332046727).epsilon(1e-13));
    CHECK_THROWS_AS(AwgnChannel(0.0), DomainError);
}

TEST_CASE("kernel rows stay stochastic under exp(kernel_log_prob)") {
    const std::vector<FiniteChannel> channels{
        FiniteChannel::bsc(0.25),
        FiniteChannel::identity(3),
        FiniteChannel::from_rows({{1.0, 0.0}, {0.5, 0.5}}),
        FiniteChannel::from_rows({{0.2, 0.3, 0.5}, {0.6, 0.1, 0.3}}),
    };
    for (const auto& ch : channels) {
        for (int x = 0; x < ch.num_inputs(); ++x) {
            double sum = 0.0;
            for (int y = 0; y < ch.num_outputs(); ++y)
                sum += std::exp(ch.kernel_log_prob(x, y));
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-10));
        }
    }
}

TEST_CASE("induced output distributions") {
    const auto bsc = FiniteChannel::bsc(0.25);
    const auto qy = output_distribution(bsc, DiscreteDistribution::uniform(2));
    CHECK(qy.prob(0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(qy.prob(1) == doctest::Approx(0.5).epsilon(1e-15));

    const auto dmc = FiniteChannel::from_rows({{1.0, 0.0}, {0.5, 0.5}});
    const auto qy2 = output_distribution(dmc, DiscreteDistribution({0.5, 0.5}));
    CHECK(qy2.prob(0) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(qy2.prob(1) == doctest::Approx(0.25).epsilon(1e-15));

    // point mass input reproduces the kernel row exactly
    const auto row = output_distribution(dmc, DiscreteDistribution::point_mass(2, 1));
    CHECK(row.prob(0) == 0.5);
    CHECK(row.prob(1) == 0.5);

    const AwgnChannel awgn(1.0);
    const auto qy3 = output_distribution(awgn, GaussianDistribution(0.0, 1.0));
    CHECK(qy3.variance() == doctest::Approx(2.0));
    CHECK(qy3.mean() == 0.0);

    CHECK_THROWS_AS(output_distribution(bsc, DiscreteDistribution::uniform(3)),
                    DomainError);
}

TEST_CASE("quadrature output density matches the gaussian closed form") {
    const AwgnChannel ch(1.0);
    const GaussianDistribution qx(0.0, 1.0);
    const auto closed = output_distribution(ch, qx);
    const auto quad = quadrature_output_distribution(ch, qx, 64);
    for (double y = -3.0; y <= 3.0; y += 0.5)
        CHECK(quad.log_prob(y) == doctest::Approx(closed.log_prob(y)).epsilon(1e-6));
    Rng rng(11);
    double mean = 0.0, var = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double y = quad.sample(rng);
        mean += y;
        var += y * y;
    }
    CHECK(mean / n == doctest::Approx(0.0).epsilon(0.02));
    CHECK(var / n == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("sample_block determinism and degenerate kernels") {
    const auto ident = FiniteChannel::identity(2);
    const std::vector<int> x{0, 1, 0};
    CHECK(sample_block(ident, std::span<const int>(x), 7) == x);

    const auto frozen = FiniteChannel::bsc(0.0);
    const std::vector<int> x2{1, 0, 1, 1};
    CHECK(sample_block(frozen, std::span<const int>(x2), 3) == x2);

    const auto bsc = FiniteChannel::bsc(0.25);
    const std::vector<int> zeros(100000, 0);
    const auto y1 = sample_block(bsc, std::span<const int>(zeros), 123);
    const auto y2 = sample_block(bsc, std::span<const int>(zeros), 123);
    CHECK(y1 == y2); // bit-identical per seed
    long ones = 0;
    for (int v : y1) ones += v;
    const double frac = static_cast<double>(ones) / y1.size();
    CHECK(frac > 0.24);
    CHECK(frac < 0.26);
}

TEST_CASE("sampled histogram matches kernel rows within 4 sigma") {
    const auto ch = FiniteChannel::from_rows({{0.2, 0.3, 0.5}, {0.75, 0.25, 0.0}});
    Rng rng(99);
    const int n = 1000000;
    for (int x = 0; x < ch.num_inputs(); ++x) {
        std::vector<long> counts(static_cast<std::size_t>(ch.num_outputs()), 0);
        for (int i = 0; i < n; ++i) ++counts[static_cast<std::size_t>(ch.sample_output(x, rng))];
        for (int y = 0; y < ch.num_outputs(); ++y) {
            const double p = ch.kernel(x, y);
            const double tol = 4.0 * std::sqrt(p * (1.0 - p) / n) + 1e-12;
            CHECK(std::abs(static_cast<double>(counts[static_cast<std::size_t>(y)]) / n - p) <= tol);
        }
    }
}

TEST_CASE("product log probabilities over blocks") {
    const auto u = DiscreteDistribution::uniform(2);
    const std::vector<int> y3{0, 1, 0};
    CHECK(product_log_prob(u, std::span<const int>(y3)) ==
          doctest::Approx(-2.0794415416798357).epsilon(1e-13));

    const DiscreteDistribution q({0.75, 0.25});
    const std::vector<int> y2{0, 1};
    CHECK(product_log_prob(q, std::span<const int>(y2)) ==
          doctest::Approx(-1.6739764335716716).epsilon(1e-13));

    const GaussianDistribution g(0.0, 2.0);
    const std::vector<double> yz{0.0, 0.0};
    CHECK(product_log_prob(g, std::span<const double>(yz)) ==
          doctest::Approx(-2.5310242469692907).epsilon(1e-13));
}

TEST_CASE("rayleigh channel with receiver side fade") {
    const RayleighChannel ch(1.0, 1.0);
    const GaussianDistribution qx(0.0, 1.0);
    const auto qy = output_distribution(ch, qx);

    Rng rng(17);
    const FadedSample s = ch.sample_output(0.7, rng);
    CHECK(s.fade > 0.0);
    CHECK(std::isfinite(ch.kernel_log_prob(0.7, s)));
    CHECK(ch.kernel_log_prob(0.7, FadedSample{-1.0, 0.0}) == kNegInf);

    // the fade marginal cancels between kernel and output law
    const double i_direct = ch.kernel_log_prob(0.7, s) - qy.log_prob(s);
    const double cond_var = s.fade * s.fade * qx.variance() + ch.noise_variance();
    const double i_manual = gaussian_log_density(s.value, s.fade * 0.7, 1.0) -
                            gaussian_log_density(s.value, 0.0, cond_var);
    CHECK(i_direct == doctest::Approx(i_manual).epsilon(1e-12));

    CHECK_THROWS_AS(RayleighChannel(0.0, 1.0), DomainError);
    CHECK_THROWS_AS(
        output_distribution(RayleighChannel(1.0, 1.0), GaussianDistribution(0.5, 1.0)),
        UnsupportedCompositionError);
}

TEST_CASE("joint block draws have matched lengths") {
    const auto bsc = FiniteChannel::bsc(0.1);
    const auto qx = DiscreteDistribution::uniform(2);
    Rng rng(4);
    const auto b = draw_block_sample(bsc, qx, 12, rng);
    CHECK(b.block_length() == 12);
    CHECK(b.x.size() == b.y.size());
}
