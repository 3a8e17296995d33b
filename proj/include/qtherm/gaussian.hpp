#pragma once

#include <string>

#include <Eigen/Dense>

namespace qtherm {

/**
 * @brief Parameters of the most general single-mode Gaussian probe:
 * a thermal seed with n0 photons, squeezed by r0 and displaced to
 * (xbar0, pbar0).
 *
 * The squeezing parameter is real; positive r0 stretches the x quadrature.
 */
struct InputStateParams {
    double xbar0 = 0.0;
    double pbar0 = 0.0;
    double n0 = 0.0;
    double r0 = 0.0;
};

/// First moments and covariance matrix of a single bosonic mode.
struct GaussianState {
    Eigen::Vector2d mean = Eigen::Vector2d::Zero();
    Eigen::Matrix2d cov = 0.5 * Eigen::Matrix2d::Identity();

    [[nodiscard]] auto xbar() const -> double { return mean(0); }
    [[nodiscard]] auto pbar() const -> double { return mean(1); }
};

/// Absolute slack on det(cov) - 1/4.
inline constexpr double kPhysicalityTolerance = 1e-12;

struct PhysicalityReport {
    bool symmetric = false;
    bool positive_definite = false;
    double determinant = 0.0;
    std::string message;

    [[nodiscard]] auto ok() const -> bool {
        return symmetric && positive_definite &&
               determinant >= 0.25 - kPhysicalityTolerance;
    }
    explicit operator bool() const { return ok(); }
};

/// Throws Error(InvalidParameter) if n0 < 0 or any field is not finite.
void validate(const InputStateParams &params);

/// mean = (xbar0, pbar0), cov = (n0 + 1/2) diag(e^{2 r0}, e^{-2 r0}).
[[nodiscard]] auto make_gaussian_state(const InputStateParams &params)
    -> GaussianState;

[[nodiscard]] auto validate_physical(const GaussianState &state)
    -> PhysicalityReport;

/// (cov11 + cov22 + xbar^2 + pbar^2 - 1) / 2. Throws InvalidState if unphysical.
[[nodiscard]] auto mean_photon_number(const GaussianState &state) -> double;

/// Closed form in the input parameters.
[[nodiscard]] auto mean_photon_number(const InputStateParams &params) -> double;

/// Helpers for the states used throughout the tests and the CLI.
[[nodiscard]] auto coherent_params(double nbar) -> InputStateParams;
[[nodiscard]] auto squeezed_vacuum_params(double nbar) -> InputStateParams;

} // namespace qtherm
