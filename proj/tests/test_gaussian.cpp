#include <catch_amalgamated.hpp>

#include <cmath>

#include "qtherm/constants.hpp"
#include "qtherm/errors.hpp"
#include "qtherm/gaussian.hpp"
#include "support/generators.hpp"

using namespace qtherm;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("vacuum has identity-over-two covariance", "[gaussian]") {
    const auto s = make_gaussian_state({});
    CHECK(s.mean.isZero());
    CHECK(s.cov.isApprox(0.5 * Eigen::Matrix2d::Identity()));
    CHECK(mean_photon_number(s) == 0.0);
}

TEST_CASE("coherent state keeps vacuum covariance", "[gaussian]") {
    const auto s = make_gaussian_state({.xbar0 = std::sqrt(2.0)});
    CHECK_THAT(s.xbar(), WithinRel(std::sqrt(2.0), 1e-15));
    CHECK(s.pbar() == 0.0);
    CHECK(s.cov.isApprox(0.5 * Eigen::Matrix2d::Identity()));
    CHECK_THAT(mean_photon_number(s), WithinRel(1.0, 1e-14));
}

TEST_CASE("squeezed vacuum r = 1", "[gaussian]") {
    const auto s = make_gaussian_state({.r0 = 1.0});
    CHECK_THAT(s.cov(0, 0), WithinRel(0.5 * std::exp(2.0), 1e-15));
    CHECK_THAT(s.cov(1, 1), WithinRel(0.5 * std::exp(-2.0), 1e-15));
    CHECK_THAT(s.cov(0, 0), WithinRel(3.6945, 1e-4));
    CHECK_THAT(s.cov(1, 1), WithinRel(0.06767, 1e-3));
    CHECK(s.cov(0, 1) == 0.0);
    CHECK_THAT(mean_photon_number(s), WithinRel(std::pow(std::sinh(1.0), 2), 1e-14));
    CHECK_THAT(mean_photon_number(s), WithinRel(1.38110, 1e-5));
}

TEST_CASE("physicality report", "[gaussian]") {
    GaussianState s;
    CHECK(validate_physical(s).ok());

    s.cov = 0.4 * Eigen::Matrix2d::Identity();
    const auto bad = validate_physical(s);
    CHECK_FALSE(bad.ok());
    CHECK_THAT(bad.determinant, WithinRel(0.16, 1e-14));
    CHECK_FALSE(bad.message.empty());

    s.cov = Eigen::Vector2d(0.5 * std::exp(2.0), 0.5 * std::exp(-2.0)).asDiagonal();
    CHECK(validate_physical(s).ok());

    s.cov << 1.0, 0.2, 0.3, 1.0;
    CHECK_FALSE(validate_physical(s).symmetric);

    s.cov << 1.0, 2.0, 2.0, 1.0;
    CHECK_FALSE(validate_physical(s).positive_definite);
}

TEST_CASE("invalid inputs are rejected", "[gaussian]") {
    CHECK_THROWS_AS(make_gaussian_state({.n0 = -0.1}), Error);
    CHECK_THROWS_AS(make_gaussian_state({.xbar0 = NAN}), Error);
    try {
        validate({.n0 = -1.0});
        FAIL("expected an error");
    } catch (const Error &e) {
        CHECK(e.kind() == ErrorKind::InvalidParameter);
    }
    GaussianState s;
    s.cov = 0.1 * Eigen::Matrix2d::Identity();
    try {
        (void)mean_photon_number(s);
        FAIL("expected an error");
    } catch (const Error &e) {
        CHECK(e.kind() == ErrorKind::InvalidState);
    }
}

TEST_CASE("ansatz helpers hit the requested photon number", "[gaussian]") {
    for (const double nbar : {0.0, 0.5, 1.0, 5.0, 1e6, 1e14}) {
        CHECK_THAT(mean_photon_number(coherent_params(nbar)), WithinRel(nbar, 1e-12));
        CHECK_THAT(mean_photon_number(squeezed_vacuum_params(nbar)),
                   WithinRel(nbar, 1e-12) || WithinAbs(nbar, 1e-15));
    }
}

TEST_CASE("Stefan-Boltzmann constant is consistent with hbar, k_B, c", "[gaussian][constants]") {
    const double from_constants = kSI.stefan_boltzmann_from_first_principles();
    CHECK_THAT(kSI.sigma, WithinRel(from_constants, 1e-12));
}

TEST_CASE("property: det cov = (N0 + 1/2)^2, independent of r0", "[gaussian][property]") {
    testing::Gen gen(11);
    for (int i = 0; i < testing::kPropertyCases; ++i) {
        auto p = gen.input_state();
        const double expected = (p.n0 + 0.5) * (p.n0 + 0.5);
        const auto s = make_gaussian_state(p);
        INFO("n0=" << p.n0 << " r0=" << p.r0);
        CHECK_THAT(s.cov.determinant(), WithinRel(expected, 1e-12));
        CHECK(s.cov.determinant() >= 0.25 - kPhysicalityTolerance);
        CHECK(validate_physical(s).ok());
        p.r0 = gen.uniform(-2.0, 2.0);
        CHECK_THAT(make_gaussian_state(p).cov.determinant(), WithinRel(expected, 1e-12));
    }
    CHECK_THAT(make_gaussian_state({.r0 = 0.7}).cov.determinant(), WithinRel(0.25, 1e-14));
}

TEST_CASE("property: photon number from moments matches the closed form", "[gaussian][property]") {
    testing::Gen gen(12);
    for (int i = 0; i < testing::kPropertyCases; ++i) {
        const auto p = gen.input_state();
        // Independent route: (n0 + 1/2) cosh 2r + (x^2 + p^2 - 1)/2.
        const double closed =
            0.5 * ((p.n0 + 0.5) * 2.0 * std::cosh(2.0 * p.r0) + p.xbar0 * p.xbar0 +
                   p.pbar0 * p.pbar0 - 1.0);
        INFO("x=" << p.xbar0 << " p=" << p.pbar0 << " n0=" << p.n0 << " r0=" << p.r0);
        CHECK_THAT(mean_photon_number(make_gaussian_state(p)),
                   WithinRel(closed, 1e-12) || WithinAbs(closed, 1e-12));
        CHECK_THAT(mean_photon_number(p), WithinRel(closed, 1e-12) || WithinAbs(closed, 1e-12));
    }
}
