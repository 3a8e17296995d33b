#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "qtherm/channel.hpp"
#include "qtherm/gaussian.hpp"
#include "qtherm/metrology.hpp"

namespace qtherm::fock {

using ComplexMatrix = Eigen::MatrixXcd;

/// Largest trace deficit a truncated state may carry.
inline constexpr double kTailTolerance = 1e-10;
/// Eigenvalue pairs with lambda_i + lambda_j below this are dropped from the SLD.
inline constexpr double kEigenvalueFloor = 1e-12;

/**
 * @brief Density matrix on the number basis {|0>, ..., |dim-1>}.
 *
 * trace_deficit records the probability lost to truncation when the state
 * was built; clipped_eigenvalues counts eigenvalues below -1e-10 that were
 * clipped to zero by spectral routines.
 */
struct FockDensityMatrix {
    ComplexMatrix data;
    double trace_deficit = 0.0;

    [[nodiscard]] auto dim() const -> int { return static_cast<int>(data.rows()); }
};

/// Truncated annihilation operator, a|n> = sqrt(n)|n-1>.
[[nodiscard]] auto annihilation(int dim) -> ComplexMatrix;

/// Starting truncation max(30, ceil(nbar + 8 sqrt(nbar + 1) + 20)).
[[nodiscard]] auto rule_dim(double nbar) -> int;

/// Smallest dim (>= rule_dim) whose number-basis tail is below tail_tol.
[[nodiscard]] auto required_dim(const InputStateParams &params,
                                double tail_tol = kTailTolerance) -> int;

/**
 * @brief rho = D S rho_thermal S^dag D^dag, with D and S obtained as matrix
 * exponentials of their truncated generators in an enlarged working space
 * and projected onto `dim` levels.
 *
 * Throws TruncationError (with a suggested dim) when more than tail_tol of
 * the probability falls outside the kept levels.
 */
[[nodiscard]] auto build_state(const InputStateParams &params, int dim,
                               double tail_tol = kTailTolerance) -> FockDensityMatrix;

/// 2000 RK4 steps per unit of max(omega t, decay_rate t), at least one.
[[nodiscard]] auto default_lindblad_steps(const PhysicalChannelParams &channel) -> int;

/**
 * @brief Integrates drho/dt = -i omega [n, rho]
 *   + (Gamma/2)(N L[a^dag] + (N+1) L[a]) rho,  L[o]rho = 2 o rho o^dag - o^dag o rho - rho o^dag o,
 * with fixed-step RK4 on truncated operators (trace-preserving by construction).
 * steps = 0 picks default_lindblad_steps. Throws NumericFailure when the trace
 * drifts by more than 1e-6.
 */
[[nodiscard]] auto evolve_lindblad(const FockDensityMatrix &rho,
                                   const PhysicalChannelParams &channel, int steps = 0)
    -> FockDensityMatrix;

/// exp(-i phi n) rho exp(i phi n).
[[nodiscard]] auto rotate_phase(const FockDensityMatrix &rho, double phi)
    -> FockDensityMatrix;

/// d rho / d phi = -i [n, rho].
[[nodiscard]] auto phase_derivative(const FockDensityMatrix &rho) -> ComplexMatrix;

/// sum_{ij} 2 |<i|drho|j>|^2 / (lambda_i + lambda_j) over the eigenbasis of rho.
/// Throws NoInformation when no eigenvalue pair clears the floor.
[[nodiscard]] auto qfi_from_spectrum(const FockDensityMatrix &rho,
                                     const ComplexMatrix &drho) -> double;

/// Symmetric logarithmic derivative solving drho = (L rho + rho L)/2 on the support.
[[nodiscard]] auto sld_matrix(const FockDensityMatrix &rho, const ComplexMatrix &drho)
    -> ComplexMatrix;

/// Re Tr[rho A].
[[nodiscard]] auto expectation(const FockDensityMatrix &rho, const ComplexMatrix &op)
    -> double;

/// Quadrature means and symmetrized covariance matrix of rho.
[[nodiscard]] auto moments(const FockDensityMatrix &rho) -> GaussianState;

struct QuadraticFit {
    SldForm form;
    double constant = 0.0;
    /// Tr[rho (L - fit)^2] / Tr[rho L^2].
    double relative_residual = 0.0;
};

/**
 * @brief Least-squares projection of an SLD onto {x~∘p~, x~, p~, 1} in the
 * rho-weighted inner product Re Tr[rho (A∘B)], centred on the moments of rho.
 */
[[nodiscard]] auto fit_quadratic_sld(const FockDensityMatrix &rho, const ComplexMatrix &sld)
    -> QuadraticFit;

// Oracle-equivalence grid.

enum class ProbeFamily { Coherent, SqueezedVacuum, DisplacedThermal };

[[nodiscard]] auto to_string(ProbeFamily family) -> const char *;

/// Input with nbar photons; displaced thermal splits nbar evenly between
/// an x displacement and the thermal seed.
[[nodiscard]] auto family_params(ProbeFamily family, double nbar) -> InputStateParams;

struct OracleCase {
    ProbeFamily family = ProbeFamily::Coherent;
    double nbar = 1.0;
    double eta = 1.0;
    double n_thermal = 0.0;
};

struct OracleOptions {
    double tolerance = 1e-3;
    std::optional<int> dim_override;
    /// Test hook: added to the Gaussian output cov(0,0) to simulate a faulty update.
    double covariance_perturbation = 0.0;
};

struct OracleOutcome {
    OracleCase input;
    int dim = 0;
    double q_gaussian = 0.0;
    double q_fock = 0.0;
    double relative_error = 0.0;
    bool passed = false;
};

/// Gaussian closed-form Q_phi vs spectral QFI of the Lindblad-evolved Fock state.
[[nodiscard]] auto run_oracle_case(const OracleCase &input, const OracleOptions &options = {})
    -> OracleOutcome;

struct OracleGrid {
    std::vector<double> nbars{0.5, 1.0, 2.0, 4.0};
    std::vector<ProbeFamily> families{ProbeFamily::Coherent, ProbeFamily::SqueezedVacuum,
                                      ProbeFamily::DisplacedThermal};
    std::vector<double> etas{1.0, 0.8};
    std::vector<double> n_thermals{0.0, 0.2};

    [[nodiscard]] auto cases() const -> std::vector<OracleCase>;
};

struct OracleReport {
    std::vector<OracleOutcome> outcomes;
    double worst_relative_error = 0.0;
    std::size_t worst_index = 0;

    [[nodiscard]] auto passed() const -> bool;
};

[[nodiscard]] auto run_oracle_grid(const OracleGrid &grid, const OracleOptions &options = {})
    -> OracleReport;

} // namespace qtherm::fock
