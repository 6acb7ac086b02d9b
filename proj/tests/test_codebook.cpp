#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <vector>

#include "resolv/channel.hpp"
#include "resolv/codebook.hpp"
#include "resolv/errors.hpp"
#include "resolv/info_measures.hpp"

using namespace resolv;

namespace {

Codebook<int> manual_codebook(int n, double rate, std::vector<int> symbols) {
    Codebook<int> cb;
    cb.n = n;
    cb.rate = rate;
    cb.seed = 0;
    cb.symbols = std::move(symbols);
    return cb;
}

const auto kU2 = DiscreteDistribution::uniform(2);

} // namespace

TEST_CASE("codebook size follows the floor rule") {
    CHECK(codebook_size(4, std::log(2.0)) == 16);
    CHECK(codebook_size(3, 0.0) == 1);
    CHECK(codebook_size(10, 0.5) == 148); // floor(e^5) = floor(148.413...)
    CHECK_THROWS_AS(codebook_size(30, 1.0), SizeError);
    CHECK_THROWS_AS(codebook_size(0, 1.0), DomainError);
    CHECK_THROWS_AS(codebook_size(4, -0.1), DomainError);
    CHECK(codebook_size(4, std::log(2.0), 16) == 16);
    CHECK_THROWS_AS(codebook_size(4, std::log(2.0), 15), SizeError);
}

TEST_CASE("draw_codebook determinism and shape") {
    const auto a = draw_codebook(kU2, 4, std::log(2.0), 99);
    const auto b = draw_codebook(kU2, 4, std::log(2.0), 99);
    const auto c = draw_codebook(kU2, 4, std::log(2.0), 100);
    CHECK(a.num_codewords() == 16);
    CHECK(a.symbols.size() == 64);
    CHECK(a.symbols == b.symbols);
    CHECK(a.symbols != c.symbols);
    CHECK_THROWS_AS(draw_codebook(kU2, 0, 1.0, 1), DomainError);
    CHECK_THROWS_AS(draw_codebook(kU2, 2, -1.0, 1), DomainError);
}

TEST_CASE("induced output log probability") {
    const auto ident = FiniteChannel::identity(2);
    const auto cb1 = manual_codebook(3, 0.0, {0, 1, 0});
    const std::vector<int> y{0, 1, 0};
    CHECK(induced_output_log_prob(ident, cb1, std::span<const int>(y)) ==
          doctest::Approx(0.0).epsilon(1e-14));

    const auto bsc = FiniteChannel::bsc(0.25);
    const auto cb2 = manual_codebook(1, 0.0, {0});
    const std::vector<int> y0{0};
    CHECK(induced_output_log_prob(bsc, cb2, std::span<const int>(y0)) ==
          doctest::Approx(std::log(0.75)).epsilon(1e-13));

    const auto cb3 = manual_codebook(1, std::log(2.0), {0, 1});
    CHECK(induced_output_log_prob(bsc, cb3, std::span<const int>(y0)) ==
          doctest::Approx(std::log(0.5)).epsilon(1e-13));

    const std::vector<int> wrong{0, 0};
    CHECK_THROWS_AS(induced_output_log_prob(bsc, cb2, std::span<const int>(wrong)),
                    DomainError);
}

TEST_CASE("exact variational distance on worked instances") {
    const auto ident = FiniteChannel::identity(2);
    const auto full = manual_codebook(1, std::log(2.0), {0, 1});
    CHECK(tv_exact(ident, full, kU2).tv == doctest::Approx(0.0).epsilon(1e-15));

    const auto bsc = FiniteChannel::bsc(0.25);
    const auto single = manual_codebook(1, 0.0, {0});
    const auto r = tv_exact(bsc, single, kU2);
    CHECK(r.tv == doctest::Approx(0.25).epsilon(1e-13));
    CHECK(r.method == TvMethod::ExactEnumeration);
    CHECK(!r.std_error.has_value());
    CHECK(r.l1() == doctest::Approx(0.5).epsilon(1e-13));

    const auto both = manual_codebook(1, std::log(2.0), {0, 1});
    CHECK(tv_exact(bsc, both, kU2).tv == doctest::Approx(0.0).epsilon(1e-13));
}

TEST_CASE("one sided sum equals half the L1 distance") {
    const auto bsc = FiniteChannel::bsc(0.25);
    const auto qy = output_distribution(bsc, kU2);
    for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
        const auto cb = draw_codebook(kU2, 5, 0.6, seed);
        const auto a = tv_exact_analysis(bsc, cb, qy);
        CHECK(std::abs(a.tv - a.half_l1) <= 1e-12);
        CHECK(a.tv >= 0.0);
        CHECK(a.tv <= 1.0 + 1e-12);
    }
}

TEST_CASE("enumeration cap enforcement") {
    const auto bsc = FiniteChannel::bsc(0.25);
    const auto cb = draw_codebook(kU2, 25, 0.1, 1);
    CHECK_THROWS_AS(tv_exact(bsc, cb, kU2, std::int64_t{1} << 20),
                    EnumerationTooLargeError);
}

TEST_CASE("exact mode flags escape from the target support") {
    const auto ident = FiniteChannel::identity(2);
    const auto cb = manual_codebook(1, 0.0, {1});
    const auto point = DiscreteDistribution::point_mass(2, 0);
    CHECK_THROWS_AS(tv_exact(ident, cb, point), DataError);
}

TEST_CASE("monte carlo matches exact enumeration across seeds") {
    const auto bsc = FiniteChannel::bsc(0.25);
    const auto qy = output_distribution(bsc, kU2);
    int mismatches = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto cb = draw_codebook(kU2, 6, 0.5, 1000 + seed);
        const double exact = tv_exact(bsc, cb, qy).tv;
        const auto mc = tv_monte_carlo(bsc, cb, qy, 20000, 5000 + seed);
        REQUIRE(mc.std_error.has_value());
        if (std::abs(mc.tv - exact) > 4.0 * *mc.std_error) ++mismatches;
        CHECK(mc.tv >= 0.0);
    }
    CHECK(mismatches == 0);
}

TEST_CASE("monte carlo on identical measures stays near zero") {
    const auto ident = FiniteChannel::identity(2);
    const auto full = manual_codebook(1, std::log(2.0), {0, 1});
    const auto mc = tv_monte_carlo(ident, full, kU2, 20000, 9);
    CHECK(mc.tv >= 0.0);
    CHECK(mc.tv <= 3.0 * (*mc.std_error + 1e-12));
}

TEST_CASE("monte carlo recovers the single-codeword closed value") {
    const auto bsc = FiniteChannel::bsc(0.25);
    const auto single = manual_codebook(1, 0.0, {0});
    const auto mc = tv_monte_carlo(bsc, single, kU2, 100000, 10);
    CHECK(std::abs(mc.tv - 0.25) <= 3.0 * *mc.std_error);
}

TEST_CASE("typical split endpoints and the split inequality") {
    const auto bsc = FiniteChannel::bsc(0.25);
    const auto qy = output_distribution(bsc, kU2);
    const double mi = mutual_information(bsc, kU2);
    const auto cb = draw_codebook(kU2, 6, 0.5, 77);

    const auto everything_typical = typical_split_exact(bsc, cb, qy, mi, 1e3);
    const double tv = tv_exact(bsc, cb, qy).tv;
    CHECK(everything_typical.p2_mass == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(everything_typical.typical_tv_part == doctest::Approx(tv).epsilon(1e-13));

    const auto nothing_typical = typical_split_exact(bsc, cb, qy, mi, -1e3);
    CHECK(nothing_typical.p2_mass == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(nothing_typical.typical_tv_part == doctest::Approx(0.0).epsilon(1e-15));

    const auto split = typical_split_exact(bsc, cb, qy, mi, 0.1);
    CHECK(tv <= split.typical_tv_part + split.p2_mass + 1e-10);
}

TEST_CASE("measure decomposition reconstructs the induced law pointwise") {
    const auto bsc = FiniteChannel::bsc(0.25);
    const auto qy = output_distribution(bsc, kU2);
    const double mi = mutual_information(bsc, kU2);
    const auto cb = draw_codebook(kU2, 5, 0.4, 3);
    const auto pmf = induced_output_pmf(bsc, cb);
    const auto parts = split_pmfs(bsc, cb, qy, mi, 0.1);
    REQUIRE(pmf.size() == parts.p1.size());
    double total = 0.0;
    for (std::size_t i = 0; i < pmf.size(); ++i) {
        CHECK(std::abs(parts.p1[i] + parts.p2[i] - pmf[i]) <= 1e-12);
        total += pmf[i];
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));

    // p1 mass + p2 mass partition the whole space
    const auto split = typical_split_exact(bsc, cb, qy, mi, 0.1);
    double p2_total = 0.0;
    for (double v : parts.p2) p2_total += v;
    CHECK(p2_total == doctest::Approx(split.p2_mass).epsilon(1e-12));
}

TEST_CASE("atypical mass is nonincreasing in epsilon") {
    const auto bsc = FiniteChannel::bsc(0.25);
    const auto qy = output_distribution(bsc, kU2);
    const double mi = mutual_information(bsc, kU2);
    const auto cb = draw_codebook(kU2, 6, 0.5, 8);
    double prev = 2.0;
    for (double eps : {-0.5, -0.1, 0.0, 0.05, 0.1, 0.3, 1.0}) {
        const double p2 = typical_split_exact(bsc, cb, qy, mi, eps).p2_mass;
        CHECK(p2 <= prev + 1e-12);
        prev = p2;
    }
}

TEST_CASE("typical split monte carlo tracks the exact split") {
    const auto bsc = FiniteChannel::bsc(0.25);
    const auto qy = output_distribution(bsc, kU2);
    const double mi = mutual_information(bsc, kU2);
    const auto cb = draw_codebook(kU2, 6, 0.5, 12);
    const auto exact = typical_split_exact(bsc, cb, qy, mi, 0.1);
    const auto mc = typical_split_mc(bsc, cb, qy, mi, 0.1, 40000, 13);
    REQUIRE(mc.p2_std_error.has_value());
    REQUIRE(mc.typical_std_error.has_value());
    CHECK(std::abs(mc.p2_mass - exact.p2_mass) <= 4.0 * (*mc.p2_std_error + 1e-9));
    CHECK(std::abs(mc.typical_tv_part - exact.typical_tv_part) <=
          4.0 * (*mc.typical_std_error + 1e-9));
}

TEST_CASE("atypical mass expectation by exact convolution") {
    const auto bsc = FiniteChannel::bsc(0.25);
    const auto ident = FiniteChannel::identity(2);
    CHECK(atypical_mass_expectation(ident, kU2, 5, 0.01) == 0.0);
    CHECK(atypical_mass_expectation(bsc, kU2, 10, 1e6) == 0.0);
    // frozen against an independent binomial-tail evaluation
    CHECK(atypical_mass_expectation(bsc, kU2, 20, 0.05) ==
          doctest::Approx(0.4148415025301801).epsilon(1e-12));
    CHECK(atypical_mass_expectation(bsc, kU2, 10, 0.1) ==
          doctest::Approx(0.24402523040771473).epsilon(1e-12));
    CHECK_THROWS_AS(atypical_mass_expectation(bsc, kU2, 0, 0.1), DomainError);
}

TEST_CASE("per codeword convolution agrees with the enumeration split") {
    const auto u = DiscreteDistribution({0.6, 0.4});
    const auto asym = FiniteChannel::from_rows({{0.9, 0.1}, {0.3, 0.7}});
    const auto qy = output_distribution(asym, u);
    const double mi = mutual_information(asym, u);
    for (std::uint64_t seed : {5u, 6u, 7u}) {
        const auto cb = draw_codebook(u, 7, 0.45, seed);
        const auto split = typical_split_exact(asym, cb, qy, mi, 0.08);
        const double dp = p2_mass_exact(asym, cb, qy, mi, 0.08);
        CHECK(std::abs(dp - split.p2_mass) <= 1e-12);
    }
}

TEST_CASE("ensemble mean of the atypical mass matches its expectation") {
    // symmetric channel: the per-codebook mass is deterministic and equals
    // the ensemble expectation exactly
    const auto bsc = FiniteChannel::bsc(0.25);
    const auto qy = output_distribution(bsc, kU2);
    const double mi = mutual_information(bsc, kU2);
    const double expect = atypical_mass_expectation(bsc, kU2, 8, 0.1);
    const auto cb = draw_codebook(kU2, 8, 0.4, 2);
    CHECK(p2_mass_exact(bsc, cb, qy, mi, 0.1) ==
          doctest::Approx(expect).epsilon(1e-12));

    // asymmetric channel: genuine codebook randomness, compare at 4 sigma
    const auto u = DiscreteDistribution({0.6, 0.4});
    const auto asym = FiniteChannel::from_rows({{0.9, 0.1}, {0.3, 0.7}});
    const auto qya = output_distribution(asym, u);
    const double mia = mutual_information(asym, u);
    const double target = atypical_mass_expectation(asym, u, 8, 0.05);
    const int books = 300;
    std::vector<double> masses;
    masses.reserve(books);
    for (int b = 0; b < books; ++b) {
        const auto cba = draw_codebook(u, 8, 0.4, 10000 + b);
        masses.push_back(p2_mass_exact(asym, cba, qya, mia, 0.05));
    }
    const auto stat = mean_std_error(masses);
    CHECK(std::abs(stat.mean - target) <= 4.0 * (stat.std_error + 1e-12));
}

TEST_CASE("codebook serialization round trips") {
    const auto cb = draw_codebook(kU2, 5, 0.7, 42);
    const std::string path = "cb_roundtrip_test.csv";
    save_codebook(path, cb);
    const auto back = load_codebook_finite(path);
    CHECK(back.n == cb.n);
    CHECK(back.rate == cb.rate);
    CHECK(back.seed == cb.seed);
    CHECK(back.symbols == cb.symbols);
    std::remove(path.c_str());

    const GaussianDistribution g(0.0, 1.0);
    const auto cbr = draw_codebook(g, 3, 0.5, 43);
    save_codebook(path, cbr);
    const auto backr = load_codebook_real(path);
    CHECK(backr.symbols == cbr.symbols); // %.17g preserves doubles exactly
    std::remove(path.c_str());

    CHECK_THROWS_AS(load_codebook_finite("does_not_exist.csv"), Error);
}
