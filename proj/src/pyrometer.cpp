#include "qtherm/pyrometer.hpp"

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <fmt/format.h>

#include "qtherm/channel.hpp"
#include "qtherm/errors.hpp"

namespace qtherm {

namespace {

constexpr double kUpperCutoff = 100.0; // in units of hbar omega / k_B T
constexpr double kRelativeTolerance = 1e-9;

void require_nonnegative_temperature(double temperature) {
    if (!(temperature >= 0.0) || !std::isfinite(temperature)) {
        fail(ErrorKind::InvalidParameter,
             fmt::format("temperature must be >= 0, got {}", temperature));
    }
}

// x^4 N(N+1) with N = 1/(e^x - 1), written to stay finite for large x.
auto planck_fluctuation_kernel(double x) -> double {
    if (x <= 0.0) {
        return 0.0;
    }
    const double em1 = -std::expm1(-x); // 1 - e^{-x}
    return x * x * x * x * std::exp(-x) / (em1 * em1);
}

// \int_0^100 x^4 N(N+1) dx, exact value 4 pi^4 / 15.
auto integrate_kernel() -> double {
    double error = 0.0;
    const double value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        planck_fluctuation_kernel, 0.0, kUpperCutoff, 15, kRelativeTolerance, &error);
    if (!std::isfinite(value) || error > 10.0 * kRelativeTolerance * std::abs(value)) {
        fail(ErrorKind::NumericFailure,
             fmt::format("mode-density quadrature did not converge (estimate {}, "
                         "error {})",
                         value, error));
    }
    return value;
}

auto kernel_integral() -> double {
    static const double value = integrate_kernel();
    return value;
}

} // namespace

void validate(const PyrometerConfig &config) {
    if (!(config.area > 0.0) || !(config.response_time > 0.0) ||
        !(config.temperature > 0.0) || !std::isfinite(config.area) ||
        !std::isfinite(config.response_time) || !std::isfinite(config.temperature)) {
        fail(ErrorKind::InvalidParameter,
             "pyrometer area, response time and temperature must be positive");
    }
}

auto stefan_boltzmann_flux(double temperature, const PhysicalConstants &k) -> double {
    require_nonnegative_temperature(temperature);
    const double t2 = temperature * temperature;
    return k.sigma * t2 * t2;
}

auto flux_noise(double temperature, const PhysicalConstants &k) -> double {
    require_nonnegative_temperature(temperature);
    return std::sqrt(4.0 * k.k_B * k.sigma * std::pow(temperature, 5));
}

auto flux_noise_quadrature(double temperature, const PhysicalConstants &k) -> double {
    require_nonnegative_temperature(temperature);
    if (temperature == 0.0) {
        return 0.0;
    }
    // omega = x k_B T / hbar turns (hbar omega)^2 N(N+1) omega^2/(4 pi^2 c^2) d omega
    // into (k_B T)^5 / (4 pi^2 c^2 hbar^3) x^4 N(N+1) dx.
    const double kt = k.k_B * temperature;
    const double prefactor = std::pow(kt, 5) /
                             (4.0 * std::numbers::pi * std::numbers::pi * k.c * k.c *
                              k.hbar * k.hbar * k.hbar);
    return std::sqrt(prefactor * kernel_integral());
}

auto pyrometer_precision(const PyrometerConfig &config, const PhysicalConstants &k)
    -> double {
    validate(config);
    return std::sqrt(k.k_B / (4.0 * k.sigma * config.area * config.response_time *
                              config.temperature));
}

auto thermal_pmf(unsigned n, double mean) -> double {
    if (!(mean >= 0.0)) {
        fail(ErrorKind::InvalidParameter, "thermal mean photon number must be >= 0");
    }
    if (mean == 0.0) {
        return n == 0 ? 1.0 : 0.0;
    }
    // log form keeps large n finite.
    return std::exp(n * std::log(mean) - (n + 1.0) * std::log1p(mean));
}

auto single_frequency_fisher(double omega, double temperature,
                             const PhysicalConstants &k) -> double {
    if (!(temperature > 0.0)) {
        fail(ErrorKind::InvalidParameter, "temperature must be positive");
    }
    const double occupation = thermal_occupation(omega, temperature, k);
    const double slope = k.hbar * omega / (k.k_B * temperature * temperature);
    return slope * slope * occupation * (occupation + 1.0);
}

auto total_fisher(double temperature, const PhysicalConstants &k) -> double {
    if (!(temperature > 0.0) || !std::isfinite(temperature)) {
        fail(ErrorKind::InvalidParameter, "temperature must be positive");
    }
    // Same substitution as flux_noise_quadrature with an extra 1/T^2 from the slope:
    // k_B^3 T / (4 pi^2 c^2 hbar^3) x^4 N(N+1) dx.
    const double prefactor = k.k_B * k.k_B * k.k_B * temperature /
                             (4.0 * std::numbers::pi * std::numbers::pi * k.c * k.c *
                              k.hbar * k.hbar * k.hbar);
    return prefactor * kernel_integral();
}

auto total_fisher_precision(const PyrometerConfig &config, const PhysicalConstants &k)
    -> double {
    validate(config);
    return 1.0 / std::sqrt(config.response_time * config.area *
                           total_fisher(config.temperature, k));
}

} // namespace qtherm
