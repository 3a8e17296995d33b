#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "qtherm/channel.hpp"
#include "qtherm/constants.hpp"
#include "qtherm/errors.hpp"
#include "qtherm/pyrometer.hpp"

using namespace qtherm;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// Brute-force Fisher information of the photon-count distribution about T,
// with d p / dT from a Richardson-extrapolated central difference.
auto brute_force_fisher(double omega, double temperature) -> double {
    const auto pmf_at = [&](unsigned n, double t) {
        return thermal_pmf(n, thermal_occupation(omega, t));
    };
    const auto central = [&](unsigned n, double h) {
        return (pmf_at(n, temperature + h) - pmf_at(n, temperature - h)) / (2.0 * h);
    };
    const double h = 1e-3 * temperature;
    double sum = 0.0;
    for (unsigned n = 0; n <= 500; ++n) {
        const double p = pmf_at(n, temperature);
        if (p < 1e-300) {
            break;
        }
        const double d = (4.0 * central(n, h / 2.0) - central(n, h)) / 3.0;
        sum += d * d / p;
    }
    return sum;
}

} // namespace

TEST_CASE("Stefan-Boltzmann flux", "[pyrometer]") {
    CHECK(stefan_boltzmann_flux(0.0) == 0.0);
    CHECK_THAT(stefan_boltzmann_flux(600.0) / stefan_boltzmann_flux(300.0), WithinRel(16.0, 1e-14));
    CHECK_THAT(stefan_boltzmann_flux(298.0), WithinRel(447.17425584727, 1e-12));
    CHECK_THROWS_AS(stefan_boltzmann_flux(-1.0), Error);
}

TEST_CASE("flux noise", "[pyrometer]") {
    CHECK_THAT(flux_noise(298.0), WithinRel(2.71280242826536e-9, 1e-12));
    CHECK(flux_noise(0.0) == 0.0);
    CHECK(flux_noise_quadrature(0.0) == 0.0);
    CHECK(flux_noise(1e-6) < 1e-20);
    for (const double t : {100.0, 298.0, 1000.0}) {
        CHECK_THAT(flux_noise_quadrature(t), WithinRel(flux_noise(t), 1e-6));
    }
}

TEST_CASE("pyrometer precision", "[pyrometer]") {
    const PyrometerConfig lab{.area = 1e-4, .response_time = 1e-2, .temperature = 298.0};
    CHECK_THAT(pyrometer_precision(lab), WithinRel(4.52e-7, 1e-2));
    CHECK_THAT(pyrometer_precision(lab), WithinRel(4.519575495750288e-7, 1e-12));
    auto slow = lab;
    slow.response_time *= 4.0;
    CHECK_THAT(pyrometer_precision(slow), WithinRel(0.5 * pyrometer_precision(lab), 1e-14));
    auto hot = lab;
    hot.temperature *= 4.0;
    CHECK_THAT(pyrometer_precision(hot), WithinRel(0.5 * pyrometer_precision(lab), 1e-14));
    CHECK_THROWS_AS(pyrometer_precision({.area = 0.0, .response_time = 1.0, .temperature = 1.0}),
                    Error);
    CHECK_THROWS_AS(pyrometer_precision({.area = 1.0, .response_time = 1.0, .temperature = -1.0}),
                    Error);
}

TEST_CASE("precision scaling exponents", "[pyrometer]") {
    const PyrometerConfig base{.area = 1e-4, .response_time = 1e-2, .temperature = 298.0};
    const auto slope = [&](auto modify) {
        auto a = base;
        auto b = base;
        modify(a, 1.0);
        modify(b, 10.0);
        return std::log10(pyrometer_precision(b) / pyrometer_precision(a));
    };
    CHECK_THAT(slope([](PyrometerConfig &c, double f) { c.area *= f; }), WithinAbs(-0.5, 1e-10));
    CHECK_THAT(slope([](PyrometerConfig &c, double f) { c.response_time *= f; }),
               WithinAbs(-0.5, 1e-10));
    CHECK_THAT(slope([](PyrometerConfig &c, double f) { c.temperature *= f; }),
               WithinAbs(-0.5, 1e-10));
}

TEST_CASE("thermal photon statistics", "[pyrometer]") {
    CHECK(thermal_pmf(0, 0.0) == 1.0);
    CHECK(thermal_pmf(3, 0.0) == 0.0);
    CHECK_THAT(thermal_pmf(0, 1.0), WithinRel(0.5, 1e-15));
    CHECK_THAT(thermal_pmf(1, 1.0), WithinRel(0.25, 1e-15));
    for (const double mean : {0.01, 0.5, 1.0, 3.0, 10.0}) {
        double total = 0.0;
        double first = 0.0;
        double second = 0.0;
        for (unsigned n = 0; n < 2000; ++n) {
            const double p = thermal_pmf(n, mean);
            total += p;
            first += n * p;
            second += static_cast<double>(n) * n * p;
        }
        CHECK_THAT(total, WithinRel(1.0, 1e-12));
        CHECK_THAT(first, WithinRel(mean, 1e-9));
        const auto stats = ThermalPhotonStats::from_mean(mean);
        CHECK_THAT(second - first * first, WithinRel(stats.variance, 1e-9));
        CHECK_THAT(stats.variance, WithinRel(mean * (mean + 1.0), 1e-12));
    }
    CHECK_THROWS_AS(thermal_pmf(0, -0.1), Error);
}

TEST_CASE("single-frequency Fisher information equals the brute-force sum", "[pyrometer]") {
    const double temperature = 300.0;
    for (const double x : {0.5, 1.0, 5.0}) {
        const double omega = x * kSI.k_B * temperature / kSI.hbar;
        const double closed = single_frequency_fisher(omega, temperature);
        const double brute = brute_force_fisher(omega, temperature);
        INFO("x=" << x);
        CHECK_THAT(brute, WithinRel(closed, 1e-8));
    }
    const double far = 800.0 * kSI.k_B * 300.0 / kSI.hbar;
    CHECK(single_frequency_fisher(far, 300.0) == 0.0);
    const double w = 2.0 * kSI.k_B * 300.0 / kSI.hbar;
    CHECK(single_frequency_fisher(60.0 * w, 300.0) < 1e-40 * single_frequency_fisher(w, 300.0));
}

TEST_CASE("total Fisher information", "[pyrometer]") {
    for (const double t : {77.0, 298.0, 1000.0}) {
        const PyrometerConfig cfg{.area = 1e-4, .response_time = 1e-2, .temperature = t};
        CHECK_THAT(total_fisher_precision(cfg), WithinRel(pyrometer_precision(cfg), 1e-6));
    }
    CHECK_THAT(total_fisher(596.0) / total_fisher(298.0), WithinRel(2.0, 1e-6));
}

TEST_CASE("property: quadrature identities over a log temperature grid", "[pyrometer][property]") {
    const int points = 25;
    for (int i = 0; i < points; ++i) {
        const double t = 10.0 * std::pow(500.0, static_cast<double>(i) / (points - 1));
        INFO("T=" << t);
        CHECK_THAT(flux_noise_quadrature(t), WithinRel(flux_noise(t), 1e-6));
        // F_T = 4 sigma / k_B per unit area and time is the closed-form side.
        CHECK_THAT(total_fisher(t), WithinRel(4.0 * kSI.sigma * t / kSI.k_B, 1e-6));
    }
}
