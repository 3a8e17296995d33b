#include "qtherm/gaussian.hpp"

#include <cmath>

#include <fmt/format.h>

#include "qtherm/errors.hpp"

namespace qtherm {

void validate(const InputStateParams &params) {
    if (!std::isfinite(params.xbar0) || !std::isfinite(params.pbar0) ||
        !std::isfinite(params.n0) || !std::isfinite(params.r0)) {
        fail(ErrorKind::InvalidParameter, "input state parameters must be finite");
    }
    if (params.n0 < 0.0) {
        fail(ErrorKind::InvalidParameter,
             fmt::format("seed thermal photon number must be >= 0, got {}",
                         params.n0));
    }
}

auto make_gaussian_state(const InputStateParams &params) -> GaussianState {
    validate(params);
    GaussianState state;
    state.mean << params.xbar0, params.pbar0;
    const double scale = params.n0 + 0.5;
    state.cov << scale * std::exp(2.0 * params.r0), 0.0, 0.0,
        scale * std::exp(-2.0 * params.r0);
    return state;
}

auto validate_physical(const GaussianState &state) -> PhysicalityReport {
    PhysicalityReport report;
    const auto &cov = state.cov;
    if (!state.mean.allFinite() || !cov.allFinite()) {
        report.message = "non-finite moments";
        return report;
    }
    const double scale = std::max(1.0, cov.cwiseAbs().maxCoeff());
    report.symmetric = std::abs(cov(0, 1) - cov(1, 0)) <= 1e-14 * scale;
    report.determinant = cov(0, 0) * cov(1, 1) - cov(0, 1) * cov(1, 0);
    report.positive_definite = cov(0, 0) > 0.0 && report.determinant > 0.0;
    if (!report.symmetric) {
        report.message = "covariance matrix is not symmetric";
    } else if (!report.positive_definite) {
        report.message = "covariance matrix is not positive definite";
    } else if (report.determinant < 0.25 - kPhysicalityTolerance) {
        report.message = fmt::format(
            "det(cov) = {:.6g} violates the uncertainty bound 1/4",
            report.determinant);
    }
    return report;
}

auto mean_photon_number(const GaussianState &state) -> double {
    if (const auto report = validate_physical(state); !report) {
        fail(ErrorKind::InvalidState, report.message);
    }
    return 0.5 * (state.cov(0, 0) + state.cov(1, 1) +
                  state.mean.squaredNorm() - 1.0);
}

auto mean_photon_number(const InputStateParams &params) -> double {
    validate(params);
    return 0.5 * ((params.n0 + 0.5) * 2.0 * std::cosh(2.0 * params.r0) +
                  params.xbar0 * params.xbar0 + params.pbar0 * params.pbar0 -
                  1.0);
}

auto coherent_params(double nbar) -> InputStateParams {
    if (!(nbar >= 0.0)) {
        fail(ErrorKind::InvalidParameter, "mean photon number must be >= 0");
    }
    return {.xbar0 = std::sqrt(2.0 * nbar), .pbar0 = 0.0, .n0 = 0.0, .r0 = 0.0};
}

auto squeezed_vacuum_params(double nbar) -> InputStateParams {
    if (!(nbar >= 0.0)) {
        fail(ErrorKind::InvalidParameter, "mean photon number must be >= 0");
    }
    return {.xbar0 = 0.0, .pbar0 = 0.0, .n0 = 0.0, .r0 = std::asinh(std::sqrt(nbar))};
}

} // namespace qtherm
