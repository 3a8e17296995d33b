#pragma once

#include "qtherm/constants.hpp"
#include "qtherm/gaussian.hpp"

namespace qtherm {

/**
 * @brief Effective phase-shift + thermal-loss channel.
 *
 * Phase rotation by phi, then a beam splitter of transmissivity eta whose
 * second port carries a thermal state with n_thermal photons.
 */
struct ChannelParams {
    double phi = 0.0;
    double eta = 1.0;
    double n_thermal = 0.0;
};

/// 0 < eta <= 1, n_thermal >= 0, all finite. Throws InvalidParameter.
void validate(const ChannelParams &channel);

/**
 * @brief Continuous-time form: free evolution at frequency omega and decay
 * rate gamma for a duration, coupled to a reservoir with n_thermal photons.
 */
struct PhysicalChannelParams {
    double omega = 0.0;      // rad/s
    double decay_rate = 0.0; // 1/s
    double duration = 0.0;   // s
    double n_thermal = 0.0;

    /// Reservoir occupation taken from the Bose-Einstein law at temperature.
    static auto from_temperature(double omega, double decay_rate,
                                 double duration, double temperature,
                                 const PhysicalConstants &k = kSI)
        -> PhysicalChannelParams;

    /// phi = omega t, eta = exp(-decay_rate t).
    [[nodiscard]] auto effective() const -> ChannelParams;
};

void validate(const PhysicalChannelParams &channel);

/// [exp(hbar omega / k_B T) - 1]^{-1}; 0 at T = 0 and beyond the exp(700) guard.
[[nodiscard]] auto thermal_occupation(double omega, double temperature,
                                      const PhysicalConstants &k = kSI)
    -> double;

/// R(phi) = [[cos, sin], [-sin, cos]] acting on (x, p).
[[nodiscard]] auto rotation(double phi) -> Eigen::Matrix2d;

/// Closed-form output moments: mean -> sqrt(eta) R mean,
/// cov -> eta R cov R^T + (1 - eta)(N + 1/2) I.
[[nodiscard]] auto apply_channel(const GaussianState &state,
                                 const ChannelParams &channel) -> GaussianState;

/// Channel equivalent to applying `first` then `second`.
[[nodiscard]] auto compose(const ChannelParams &first,
                           const ChannelParams &second) -> ChannelParams;

/// 1000 steps per unit of max(omega t, decay_rate t), at least one.
[[nodiscard]] auto default_integrator_steps(const PhysicalChannelParams &channel)
    -> int;

/**
 * @brief Integrates the first/second moment equations of the thermal-loss
 * master equation with a fixed-step classical RK4 scheme.
 *
 * d mean/dt = A mean, d cov/dt = A cov + cov A^T + decay_rate (N + 1/2) I,
 * A = [[-decay_rate/2, omega], [-omega, -decay_rate/2]].
 */
[[nodiscard]] auto integrate_master_equation(const GaussianState &state,
                                             const PhysicalChannelParams &channel,
                                             int steps) -> GaussianState;

} // namespace qtherm
