#pragma once

#include "qtherm/constants.hpp"

namespace qtherm {

/// Idealized blackbody pyrometer: detector area matched to the sample.
struct PyrometerConfig {
    double area = 0.0;          // m^2
    double response_time = 0.0; // s
    double temperature = 0.0;   // K
};

void validate(const PyrometerConfig &config);

/// Bose-Einstein photon statistics of one mode.
struct ThermalPhotonStats {
    double mean = 0.0;
    double variance = 0.0;

    static auto from_mean(double mean) -> ThermalPhotonStats {
        return {mean, mean * (mean + 1.0)};
    }
};

/// sigma T^4, W/m^2.
[[nodiscard]] auto stefan_boltzmann_flux(double temperature,
                                         const PhysicalConstants &k = kSI) -> double;

/// sqrt(4 k_B sigma T^5): flux fluctuation per unit area and unit time.
[[nodiscard]] auto flux_noise(double temperature, const PhysicalConstants &k = kSI)
    -> double;

/// Same quantity from the mode-density integral of (hbar omega dN)^2.
[[nodiscard]] auto flux_noise_quadrature(double temperature,
                                         const PhysicalConstants &k = kSI) -> double;

/// sqrt(k_B / (4 sigma S dt T)).
[[nodiscard]] auto pyrometer_precision(const PyrometerConfig &config,
                                       const PhysicalConstants &k = kSI) -> double;

/// N^n / (1+N)^{n+1}.
[[nodiscard]] auto thermal_pmf(unsigned n, double mean) -> double;

/// (hbar omega / (k_B T^2))^2 N (N+1): photon-counting Fisher information of
/// one mode about T.
[[nodiscard]] auto single_frequency_fisher(double omega, double temperature,
                                           const PhysicalConstants &k = kSI) -> double;

/// Frequency integral of single_frequency_fisher against the mode density
/// omega^2 / (4 pi^2 c^2), per unit area and time.
[[nodiscard]] auto total_fisher(double temperature, const PhysicalConstants &k = kSI)
    -> double;

/// 1 / sqrt(dt S F_T) from the integrated Fisher information.
[[nodiscard]] auto total_fisher_precision(const PyrometerConfig &config,
                                          const PhysicalConstants &k = kSI) -> double;

} // namespace qtherm
