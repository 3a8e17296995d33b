#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "qtherm/constants.hpp"
#include "qtherm/gaussian.hpp"

namespace qtherm {

/**
 * @brief Phase SLD of a Gaussian state in the phi = 0 frame:
 * L = c_xp x~∘p~ + c_x x~ + c_p p~, with x~ = x - xbar, p~ = p - pbar.
 */
struct SldForm {
    double c_xp = 0.0;
    double c_x = 0.0;
    double c_p = 0.0;
};

enum class BoundKind { ExactQfi, AsymptoticSqueezed, AsymptoticCoherent, Pyrometer };

[[nodiscard]] auto to_string(BoundKind kind) -> std::string_view;

/// Temperature error split into a statistical and a heating part (kelvin).
struct PrecisionBound {
    double delta_t = 0.0;
    double statistical = 0.0;
    double heating = 0.0;
    BoundKind kind = BoundKind::ExactQfi;
    std::vector<std::string> warnings;
};

/**
 * @brief Everything about the probe/sample pair except the photon budget.
 */
struct ProbeSetup {
    double eta = 1.0;            // sample transmissivity
    double n_thermal = 0.0;      // reservoir photons at the probe frequency
    double alpha = 1.0;          // dphi/dT, rad/K
    double omega = 0.0;          // probe angular frequency, rad/s
    double mass = 1.0;           // kg
    double specific_heat = 1.0;  // J/(kg K)
};

/// Phase QFI of an output state. A nonzero cov(0,1) is rotated away first,
/// which leaves the phase QFI unchanged.
[[nodiscard]] auto qfi_phase(const GaussianState &output) -> double;

/// Requires cov(0,1) == 0 (phi = 0 frame); throws InvalidState otherwise.
[[nodiscard]] auto sld_phase(const GaussianState &output) -> SldForm;

/// Tr[rho L] and Tr[rho L^2] for a quadratic SLD evaluated with Gaussian
/// moment rules; <(x~∘p~)^2> = cov11 cov22 + 2 cov12^2 + 1/4.
[[nodiscard]] auto sld_mean(const SldForm &sld, const GaussianState &state) -> double;
[[nodiscard]] auto sld_second_moment(const SldForm &sld, const GaussianState &state)
    -> double;

/// alpha^2 Q_phi.
[[nodiscard]] auto qfi_temperature(double q_phi, double alpha) -> double;

/// 1 / sqrt(k q). Throws NoInformation for q <= 0.
[[nodiscard]] auto cramer_rao(double q, int repetitions = 1) -> double;

/// deltaA / |d<A>/dtheta|. Throws InsensitiveObservable for a zero slope.
[[nodiscard]] auto error_propagation(double slope, double delta_a) -> double;

/// (1/alpha) sqrt[(1-eta)(1+2N) / (4 eta nbar)]. Returns 0 at eta = 1 and
/// appends a lossless-limit warning to `warnings` when given.
[[nodiscard]] auto asymptotic_bound_squeezed(double eta, double n_thermal,
                                             double nbar, double alpha,
                                             std::vector<std::string> *warnings = nullptr)
    -> double;

/// (1/alpha) sqrt[(1 + 2(1-eta)N) / (4 eta nbar)].
[[nodiscard]] auto asymptotic_bound_coherent(double eta, double n_thermal,
                                             double nbar, double alpha) -> double;

/// Worst-case temperature rise (1-eta) hbar omega nbar / (M C_s).
[[nodiscard]] auto heating_disturbance(double nbar, double eta, double omega,
                                       double mass, double specific_heat,
                                       const PhysicalConstants &k = kSI) -> double;

/// Only the two asymptotic kinds are accepted.
[[nodiscard]] auto total_bound(BoundKind kind, const ProbeSetup &setup, double nbar)
    -> PrecisionBound;

/// Exact curve: Cramér-Rao with k = 1 on q_t plus the heating tail.
[[nodiscard]] auto exact_bound(double q_t, const ProbeSetup &setup, double nbar)
    -> PrecisionBound;

/// Statistical coefficient a and heating slope b of delta_t = a/sqrt(nbar) + b nbar.
struct AsymptoticCoefficients {
    double statistical = 0.0;
    double heating_slope = 0.0;

    /// (a / 2b)^{2/3}; infinite when b = 0.
    [[nodiscard]] auto optimal_nbar() const -> double;
};

[[nodiscard]] auto asymptotic_coefficients(BoundKind kind, const ProbeSetup &setup)
    -> AsymptoticCoefficients;

} // namespace qtherm
