#include <doctest.h>

#include <cmath>

#include "ffharm/fourier.hpp"
#include "ffharm/weights.hpp"

using namespace ffharm;

TEST_CASE("constant weights fill the line and stay bounded") {
    const PrimeContext ctx = make_prime_context(5);
    const WeightFunction w = realize_weight(WeightSpec::constant(1.0), ctx);
    CHECK(w.values.size() == 5);
    for (Int y = 0; y < 5; ++y) CHECK(w.values[y] == Complex{1.0, 0.0});

    CHECK_THROWS_AS(WeightSpec::constant(Complex{1.5, 0.0}), Error);
    try {
        WeightSpec::constant(Complex{0.9, 0.9});
        FAIL("expected a throw");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::InvalidWeight);
    }
}

TEST_CASE("polynomial phase runs through the character values") {
    const PrimeContext ctx = make_prime_context(5);
    const WeightFunction w = realize_weight(WeightSpec::poly_phase(IntPolynomial{0, 1}), ctx);
    for (Int y = 0; y < 5; ++y) CHECK(std::abs(w.values[y] - ctx.character(y)) < 1e-15);
    CHECK(std::abs(w.mean()) < 1e-15);
    CHECK(w.sup_norm() <= 1.0 + 1e-12);
}

TEST_CASE("reciprocal phase vanishes at the pole and inverts elsewhere") {
    const PrimeContext ctx = make_prime_context(5);
    const WeightFunction w =
        realize_weight(WeightSpec::rational_phase(RationalFunction{{1}, {0, 1}}), ctx);
    CHECK(w.values[0] == Complex{0.0, 0.0});
    CHECK(std::abs(w.values[2] - ctx.character(3)) < 1e-15);  // 1/2 = 3 mod 5
    CHECK(std::abs(w.values[1] - ctx.character(1)) < 1e-15);
    CHECK(std::abs(w.values[3] - ctx.character(2)) < 1e-15);
    CHECK(std::abs(w.values[4] - ctx.character(4)) < 1e-15);
    CHECK(w.sup_norm() <= 1.0 + 1e-12);
}

TEST_CASE("a rational phase with unit denominator is a polynomial phase") {
    const PrimeContext ctx = make_prime_context(11);
    const WeightFunction rational =
        realize_weight(WeightSpec::rational_phase(RationalFunction{{0, 1}, {1}}), ctx);
    const WeightFunction poly = realize_weight(WeightSpec::poly_phase(IntPolynomial{0, 1}), ctx);
    CHECK((rational.values - poly.values).abs().maxCoeff() < 1e-15);

    // linear content of degree at most s-1 keeps the centered correlation
    // within 1/p of saturation
    const auto profile = uniformity_profile(
        WeightSpec::rational_phase(RationalFunction{{0, 1}, {1}}), 2, {11, 13, 17}, kDefaultEnumerationCap);
    for (const auto& row : profile.rows)
        CHECK(row.value >= 1.0 - 1.0 / static_cast<double>(row.p) - 1e-9);
}

TEST_CASE("degenerate phase denominators are flagged") {
    const PrimeContext ctx = make_prime_context(5);
    const auto spec = WeightSpec::rational_phase(RationalFunction{{1}, {5}});
    try {
        realize_weight(spec, ctx);
        FAIL("expected a throw");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::DegenerateDenominator);
    }
}

TEST_CASE("balanced indicators have mean zero by construction") {
    const PrimeContext ctx = make_prime_context(7);
    const WeightFunction w = realize_weight(WeightSpec::balanced_indicator({0, 3, 5}), ctx);
    CHECK(std::abs(w.mean()) < 1e-15);
    CHECK(w.values[0].real() == doctest::Approx(1.0 - 3.0 / 7.0));
    CHECK(w.values[1].real() == doctest::Approx(-3.0 / 7.0));
    // indices are reduced mod p and duplicates collapse
    const WeightFunction same = realize_weight(WeightSpec::balanced_indicator({7, 10, 12, 3}), ctx);
    CHECK((same.values - w.values).abs().maxCoeff() < 1e-15);
}

TEST_CASE("random weights reproduce from the seed and vary across primes") {
    const PrimeContext ctx = make_prime_context(13);
    const WeightFunction a = realize_weight(WeightSpec::random(9), ctx);
    const WeightFunction b = realize_weight(WeightSpec::random(9), ctx);
    CHECK((a.values - b.values).abs().maxCoeff() == 0.0);
    const WeightFunction c = realize_weight(WeightSpec::random(10), ctx);
    CHECK((a.values - c.values).abs().maxCoeff() > 1e-3);
    for (Int y = 0; y < 13; ++y) CHECK(std::abs(a.values[y]) == doctest::Approx(1.0));
}

TEST_CASE("log-log fitting recovers exact power laws") {
    std::vector<std::pair<double, double>> pts;
    for (double p : {11.0, 13.0, 17.0, 19.0}) pts.emplace_back(std::log(p), std::log(3.0 * std::pow(p, -0.5)));
    const LogLogFit fit = fit_log_log(pts);
    REQUIRE(fit.defined);
    CHECK(fit.slope == doctest::Approx(-0.5).epsilon(1e-9));
    CHECK(std::exp(fit.intercept) == doctest::Approx(3.0).epsilon(1e-9));

    CHECK_FALSE(fit_log_log({}).defined);
    CHECK_FALSE(fit_log_log({{1.0, 2.0}}).defined);
    // identical abscissae leave the slope undetermined
    CHECK_FALSE(fit_log_log({{1.0, 2.0}, {1.0, 3.0}}).defined);
}

TEST_CASE("profile of a constant weight is exactly zero in every row") {
    const auto profile = uniformity_profile(WeightSpec::constant(0.8), 2, {11, 13, 17}, kDefaultEnumerationCap);
    CHECK(profile.s == 2);
    REQUIRE(profile.rows.size() == 3);
    for (const auto& row : profile.rows) {
        CHECK(row.value < 1e-12);
        CHECK(row.exact_zero);
    }
    CHECK_FALSE(profile.slope_defined);
}

TEST_CASE("matched linear phase stays saturated after mean subtraction") {
    const auto profile =
        uniformity_profile(WeightSpec::poly_phase(IntPolynomial{0, 1}), 2, {11, 13, 17, 19}, kDefaultEnumerationCap);
    for (const auto& row : profile.rows) {
        CHECK(row.value >= 1.0 - 1.0 / static_cast<double>(row.p) - 1e-9);
        CHECK_FALSE(row.exact_zero);
    }
    REQUIRE(profile.slope_defined);
    CHECK(std::abs(profile.fitted_slope) < 0.05);
}

TEST_CASE("reciprocal phase decays like the square root envelope") {
    const std::vector<Int> ladder = {11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61,
                                     67, 71, 73, 79, 83, 89, 97};
    const auto profile = uniformity_profile(
        WeightSpec::rational_phase(RationalFunction{{1}, {0, 1}}), 2, ladder, kDefaultEnumerationCap);
    REQUIRE(profile.rows.size() == ladder.size());
    for (const auto& row : profile.rows) {
        CHECK(row.value <= 2.5 / std::sqrt(static_cast<double>(row.p)));
        CHECK(row.value > 0.0);
    }
    REQUIRE(profile.slope_defined);
    CHECK(profile.fitted_slope <= -0.35);
}

TEST_CASE("profiles skip primes the phase cannot survive") {
    // pointwise zeros of the denominator are ordinary poles; only an
    // identically vanishing denominator drops a prime. 3 + 3y^2 collapses
    // mod 3, so the ladder must carry three other usable primes.
    const auto spec = WeightSpec::rational_phase(RationalFunction{{1}, {3, 0, 3}});
    const auto profile = uniformity_profile(spec, 2, {3, 11, 13, 17}, kDefaultEnumerationCap);
    CHECK(profile.rows.size() == 3);
    for (const auto& row : profile.rows) CHECK(row.p != 3);

    try {
        uniformity_profile(spec, 2, {3, 11, 13}, kDefaultEnumerationCap);
        FAIL("expected a throw");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::InsufficientLadder);
    }
}

TEST_CASE("profile validation") {
    const auto spec = WeightSpec::poly_phase(IntPolynomial{0, 1});
    const auto code_of = [](auto&& call) {
        try {
            call();
        } catch (const Error& e) {
            return e.code();
        }
        return Errc::NotPrime;
    };
    CHECK(code_of([&] { uniformity_profile(spec, 5, {11, 13, 17}, kDefaultEnumerationCap); }) ==
          Errc::BudgetExceeded);
    CHECK(code_of([&] { uniformity_profile(spec, 2, {11, 12, 13}, kDefaultEnumerationCap); }) ==
          Errc::NotPrime);
    CHECK(code_of([&] { uniformity_profile(spec, 2, {11, 13}, kDefaultEnumerationCap); }) ==
          Errc::InsufficientLadder);
    // the cap applies per prime
    CHECK(code_of([&] { uniformity_profile(spec, 4, {11, 13, 101}, 10000); }) ==
          Errc::BudgetExceeded);
}

TEST_CASE("profile rows arrive sorted regardless of ladder order") {
    const auto profile = uniformity_profile(WeightSpec::random(5), 2, {17, 11, 13}, kDefaultEnumerationCap);
    REQUIRE(profile.rows.size() == 3);
    CHECK(profile.rows[0].p == 11);
    CHECK(profile.rows[1].p == 13);
    CHECK(profile.rows[2].p == 17);
}
