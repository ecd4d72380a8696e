#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "fpwalk/pipeline.hpp"
#include "fpwalk/tolerances.hpp"
#include "test_helpers.hpp"

using Catch::Approx;

TEST_CASE("three entropy routes agree on randomly generated products", "[entropy]") {
    // The central invariant: escape rate x mean letter length, escape rate x
    // exit-chain entropy rate, and the ratio of Green derivative sums are
    // three independent computations of one number.
    for (std::uint64_t seed = 100; seed < 120; ++seed) {
        const auto spec = testutil::random_spec(seed);
        const auto a = fpwalk::analyze_chain(spec);
        INFO("seed " << seed << " r=" << spec.num_factors()
                     << " v1=" << a.entropy.v1 << " v2=" << a.entropy.v2
                     << " v3=" << a.entropy.v3);
        CHECK(a.entropy.spread <= fpwalk::tol::three_way_spread);
        CHECK(a.entropy.v1 > 0.0);
        CHECK(a.escape_rate > 0.0);
        CHECK(a.escape_rate < 1.0);
        CHECK(a.sums.sum_entropy > 0.0);
        CHECK(a.sums.sum_time > 0.0);
        for (int i = 0; i < spec.num_factors(); ++i) {
            CHECK(a.weights.weights(i) > 0.0);
            CHECK(a.weights.weights(i) < 1.0);
        }
    }
}

TEST_CASE("symmetric cycle products have closed-form entropy", "[entropy]") {
    for (int r : {3, 4}) {
        const auto spec = testutil::symmetric_cycles(r);
        const auto a = fpwalk::analyze_chain(spec);
        const double expect = (r - 2.0) / r * std::log(r - 1.0);
        CHECK(a.entropy.v1 == Approx(expect).margin(1e-9));
        CHECK(a.entropy.v2 == Approx(expect).margin(1e-9));
        CHECK(a.entropy.v3 == Approx(expect).margin(1e-9));
        CHECK(a.entropy.exit_chain_rate == Approx(std::log(r - 1.0)).margin(1e-10));
    }
}

TEST_CASE("two-chain product reproduces its frozen digits", "[entropy]") {
    const auto a = fpwalk::analyze_chain(testutil::two_chain_product());
    CHECK(a.escape_rate == Approx(0.415632286491).margin(1e-9));
    CHECK(a.entropy.v1 == Approx(0.320052328107).margin(1e-9));
    CHECK(a.entropy.v2 == Approx(0.320052328107).margin(1e-9));
    CHECK(a.entropy.v3 == Approx(0.320052328107).margin(1e-9));
    CHECK(a.entropy.exit_chain_rate == Approx(0.770037214406).margin(1e-9));
    CHECK(a.entropy.spread <= 1e-12);
    CHECK(a.green_origin == Approx(1.20293712114).margin(1e-9));
    CHECK(std::abs(a.green_origin - a.green_origin_alt) <= 1e-10);
    CHECK(a.certified_z == Approx(1.001));
}

TEST_CASE("entropy odds and ends behave at the edges", "[entropy]") {
    fpwalk::GreenDerivativeSums zero;
    CHECK_THROWS_AS(fpwalk::entropy_v3(zero), fpwalk::DivisionNearZero);

    // The exit-chain entropy rate is bounded by the log number of letters a
    // source type can emit (uniform maximises row entropy).
    const auto spec = testutil::two_chain_product();
    const auto a = fpwalk::analyze_chain(spec);
    int max_letters = 0;
    for (int i = 0; i < spec.num_factors(); ++i)
        max_letters = std::max(max_letters, spec.total_letters() - spec.letters_of(i));
    CHECK(a.entropy.exit_chain_rate <= std::log(static_cast<double>(max_letters)) + 1e-12);
}
