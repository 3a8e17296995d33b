#pragma once

#include <numbers>

namespace qtherm {

/**
 * @brief SI constants (CODATA 2018, all exact in the 2019 SI).
 *
 * Every SI quantity in the library enters through this struct. Quadratures
 * are dimensionless with vacuum variance 1/2.
 */
struct PhysicalConstants {
    double hbar;
    double k_B;
    double c;
    double sigma;

    /// sigma recomputed from hbar, k_B, c.
    [[nodiscard]] constexpr auto stefan_boltzmann_from_first_principles() const
        -> double {
        const double pi2 = std::numbers::pi * std::numbers::pi;
        return pi2 * k_B * k_B * k_B * k_B / (60.0 * hbar * hbar * hbar * c * c);
    }
};

inline constexpr double kPlanck = 6.62607015e-34;

inline constexpr PhysicalConstants kSI{
    .hbar = kPlanck / (2.0 * std::numbers::pi),
    .k_B = 1.380649e-23,
    .c = 299792458.0,
    .sigma = 5.670374419184429e-8,
};

} // namespace qtherm
