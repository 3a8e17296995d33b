#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "qtherm/channel.hpp"
#include "qtherm/gaussian.hpp"
#include "qtherm/metrology.hpp"

namespace qtherm {

struct OptimizationResult {
    InputStateParams params;
    double q_t = 0.0;
    double delta_t = 0.0; // kelvin
    double nbar = 0.0;
    int iterations = 0;
    bool converged = false;
};

struct StateSearchOptions {
    int restarts = 8;
    std::uint64_t seed = 2015;
    int max_evaluations = 10000; // per simplex run
    double tolerance = 1e-10;    // simplex diameter, normalized coordinates
};

/**
 * @brief Photon-budget-preserving coordinates of an input state.
 *
 * A fraction of nbar goes into displacement, a fraction of the remainder
 * into the thermal seed, the rest into squeezing (r0 >= 0). Any point maps
 * to a state with exactly nbar mean photons.
 */
struct BudgetSplit {
    double displacement_fraction = 0.0; // [0, 1]
    double thermal_fraction = 0.0;      // [0, 1]
    double displacement_angle = 0.0;    // 0 puts the displacement along x
};

[[nodiscard]] auto state_from_split(double nbar, const BudgetSplit &split)
    -> InputStateParams;

/// Fraction of the input photon number carried by the displacement.
[[nodiscard]] auto displacement_fraction(const InputStateParams &params) -> double;

/// Q_phi of the phi = 0 output for a given input.
[[nodiscard]] auto output_phase_qfi(const InputStateParams &params,
                                    const ChannelParams &channel) -> double;

/**
 * @brief Maximizes alpha^2 Q_phi over all Gaussian inputs with nbar photons.
 *
 * Golden-section over the displacement fraction of a pure displaced squeezed
 * state seeds a Nelder-Mead search over (displacement, thermal) fractions,
 * repeated from `restarts` random starts. The displacement direction is
 * picked analytically; on exact ties it goes along p. delta_t is the
 * Cramér-Rao value 1/sqrt(q_t) without heating.
 */
[[nodiscard]] auto optimize_state_at_nbar(double nbar, const ChannelParams &channel,
                                          double alpha,
                                          const StateSearchOptions &options = {})
    -> OptimizationResult;

struct NbarRange {
    double lo = 1e6;
    double hi = 1e18;
    int grid_points = 121;
};

/**
 * @brief Photon number minimizing statistical error + heating for one curve.
 *
 * Log-spaced scan, then golden-section refinement in log(nbar). Asymptotic
 * kinds bracket the analytic optimum (a/2b)^{2/3}. Throws RangeError when
 * the scanned minimum sits on the range boundary.
 *
 * For asymptotic kinds q_t is the exact alpha^2 Q_phi of the ansatz state
 * (squeezed vacuum or coherent) at the optimum.
 */
[[nodiscard]] auto optimize_nbar(BoundKind kind, const ProbeSetup &setup,
                                 const NbarRange &range,
                                 const StateSearchOptions &options = {})
    -> OptimizationResult;

/// Exact curve value at one photon number (optimized state + heating).
[[nodiscard]] auto exact_curve_point(const ProbeSetup &setup, double nbar,
                                     const StateSearchOptions &options = {})
    -> PrecisionBound;

struct LogGrid {
    double start = 1e8;
    double stop = 1e16;
    int points = 50;

    [[nodiscard]] auto values() const -> std::vector<double>;
};

struct SweepKinds {
    bool exact = true;
    bool squeezed = true;
    bool coherent = true;
    bool pyrometer = true;

    [[nodiscard]] auto any() const -> bool {
        return exact || squeezed || coherent || pyrometer;
    }
};

struct SweepRow {
    double nbar = 0.0;
    std::optional<double> exact;
    std::optional<double> squeezed;
    std::optional<double> coherent;
    std::optional<double> pyrometer;
};

struct SweepOptions {
    StateSearchOptions search;
    unsigned jobs = 1;
};

/**
 * @brief One row per grid point; rows are computed concurrently on `jobs`
 * workers and returned in grid order. Row i seeds its optimizer with
 * search.seed + i, so the table does not depend on the worker count.
 */
[[nodiscard]] auto sweep_nbar(const LogGrid &grid, const ProbeSetup &setup,
                              const SweepKinds &kinds, double pyrometer_delta_t,
                              const SweepOptions &options = {})
    -> std::vector<SweepRow>;

// Generic minimizers, exposed for testing.

struct MinimizeResult {
    std::vector<double> x;
    double value = 0.0;
    int evaluations = 0;
    bool converged = false;
};

[[nodiscard]] auto nelder_mead(const std::function<double(const std::vector<double> &)> &f,
                               std::vector<double> start, double initial_step,
                               double tolerance, int max_evaluations) -> MinimizeResult;

/// Minimizes a unimodal f on [lo, hi] to an interval width of `tolerance`.
[[nodiscard]] auto golden_section(const std::function<double(double)> &f, double lo,
                                  double hi, double tolerance, int max_evaluations = 500)
    -> MinimizeResult;

} // namespace qtherm
