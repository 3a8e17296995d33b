#include "qtherm/metrology.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "qtherm/channel.hpp"
#include "qtherm/errors.hpp"

namespace qtherm {

namespace {

void require_positive_variances(const GaussianState &state) {
    if (!(state.cov(0, 0) > 0.0) || !(state.cov(1, 1) > 0.0)) {
        fail(ErrorKind::InvalidState,
             fmt::format("quadrature variances must be positive, got ({}, {})",
                         state.cov(0, 0), state.cov(1, 1)));
    }
}

// Rotates the state so that its covariance matrix is diagonal.
auto principal_frame(const GaussianState &state) -> GaussianState {
    const double off = state.cov(0, 1);
    if (off == 0.0) {
        return state;
    }
    // R(t) cov R(t)^T has off-diagonal (cov22 - cov11)/2 sin 2t + cov12 cos 2t.
    const double theta = 0.5 * std::atan2(-2.0 * off, state.cov(1, 1) - state.cov(0, 0));
    const Eigen::Matrix2d r = rotation(theta);
    GaussianState out;
    out.mean = r * state.mean;
    out.cov = r * state.cov * r.transpose();
    out.cov(0, 1) = 0.0;
    out.cov(1, 0) = 0.0;
    return out;
}

void check_asymptotic_inputs(double eta, double n_thermal, double nbar, double alpha) {
    if (!(eta > 0.0 && eta <= 1.0)) {
        fail(ErrorKind::InvalidParameter,
             fmt::format("transmissivity must lie in (0, 1], got {}", eta));
    }
    if (!(n_thermal >= 0.0)) {
        fail(ErrorKind::InvalidParameter, "reservoir photon number must be >= 0");
    }
    if (!(nbar > 0.0)) {
        fail(ErrorKind::InvalidParameter,
             fmt::format("mean photon number must be positive, got {}", nbar));
    }
    if (!(alpha > 0.0)) {
        fail(ErrorKind::InvalidParameter,
             fmt::format("phase-temperature coupling must be positive, got {}", alpha));
    }
}

} // namespace

auto to_string(BoundKind kind) -> std::string_view {
    switch (kind) {
    case BoundKind::ExactQfi:
        return "exact-qfi";
    case BoundKind::AsymptoticSqueezed:
        return "asymptotic-squeezed";
    case BoundKind::AsymptoticCoherent:
        return "asymptotic-coherent";
    case BoundKind::Pyrometer:
        return "pyrometer";
    }
    return "unknown";
}

auto qfi_phase(const GaussianState &output) -> double {
    require_positive_variances(output);
    const GaussianState s = principal_frame(output);
    const double s11 = s.cov(0, 0);
    const double s22 = s.cov(1, 1);
    const double diff = s22 - s11;
    return 4.0 * diff * diff / (1.0 + 4.0 * s11 * s22) +
           s.xbar() * s.xbar() / s22 + s.pbar() * s.pbar() / s11;
}

auto sld_phase(const GaussianState &output) -> SldForm {
    require_positive_variances(output);
    const double s11 = output.cov(0, 0);
    const double s22 = output.cov(1, 1);
    if (std::abs(output.cov(0, 1)) > 1e-12 * std::max(1.0, std::max(s11, s22))) {
        fail(ErrorKind::InvalidState,
             "SLD closed form needs the phi = 0 frame (cov12 = 0)");
    }
    return {.c_xp = 4.0 * (s22 - s11) / (1.0 + 4.0 * s11 * s22),
            .c_x = output.pbar() / s11,
            .c_p = -output.xbar() / s22};
}

auto sld_mean(const SldForm &sld, const GaussianState &state) -> double {
    // x~ and p~ are centred; <x~∘p~> is the covariance.
    return sld.c_xp * state.cov(0, 1);
}

auto sld_second_moment(const SldForm &sld, const GaussianState &state) -> double {
    const double s11 = state.cov(0, 0);
    const double s22 = state.cov(1, 1);
    const double s12 = state.cov(0, 1);
    const double xp_sq = s11 * s22 + 2.0 * s12 * s12 + 0.25;
    return sld.c_xp * sld.c_xp * xp_sq + sld.c_x * sld.c_x * s11 +
           sld.c_p * sld.c_p * s22 + 2.0 * sld.c_x * sld.c_p * s12;
}

auto qfi_temperature(double q_phi, double alpha) -> double {
    if (!(q_phi >= 0.0)) {
        fail(ErrorKind::InvalidParameter,
             fmt::format("phase QFI must be >= 0, got {}", q_phi));
    }
    return alpha * alpha * q_phi;
}

auto cramer_rao(double q, int repetitions) -> double {
    if (repetitions < 1) {
        fail(ErrorKind::InvalidParameter, "repetitions must be >= 1");
    }
    if (!(q > 0.0)) {
        fail(ErrorKind::NoInformation,
             fmt::format("Fisher information must be positive, got {}", q));
    }
    return 1.0 / std::sqrt(static_cast<double>(repetitions) * q);
}

auto error_propagation(double slope, double delta_a) -> double {
    if (slope == 0.0) {
        fail(ErrorKind::InsensitiveObservable,
             "observable mean does not depend on the parameter");
    }
    return delta_a / std::abs(slope);
}

auto asymptotic_bound_squeezed(double eta, double n_thermal, double nbar,
                               double alpha, std::vector<std::string> *warnings)
    -> double {
    check_asymptotic_inputs(eta, n_thermal, nbar, alpha);
    if (eta == 1.0) {
        if (warnings != nullptr) {
            warnings->emplace_back(
                "lossless limit: leading squeezed-vacuum term vanishes, the "
                "O(1/nbar) remainder is not modelled");
        }
        return 0.0;
    }
    return std::sqrt((1.0 - eta) * (1.0 + 2.0 * n_thermal) / (4.0 * eta * nbar)) /
           alpha;
}

auto asymptotic_bound_coherent(double eta, double n_thermal, double nbar, double alpha)
    -> double {
    check_asymptotic_inputs(eta, n_thermal, nbar, alpha);
    return std::sqrt((1.0 + 2.0 * (1.0 - eta) * n_thermal) / (4.0 * eta * nbar)) /
           alpha;
}

auto heating_disturbance(double nbar, double eta, double omega, double mass,
                         double specific_heat, const PhysicalConstants &k) -> double {
    if (!(mass > 0.0) || !(specific_heat > 0.0)) {
        fail(ErrorKind::InvalidParameter, "mass and specific heat must be positive");
    }
    if (!(nbar >= 0.0) || !(eta > 0.0 && eta <= 1.0) || !(omega >= 0.0)) {
        fail(ErrorKind::InvalidParameter,
             "heating needs nbar >= 0, eta in (0, 1] and omega >= 0");
    }
    return (1.0 - eta) * k.hbar * omega * nbar / (mass * specific_heat);
}

auto total_bound(BoundKind kind, const ProbeSetup &setup, double nbar)
    -> PrecisionBound {
    PrecisionBound bound;
    bound.kind = kind;
    switch (kind) {
    case BoundKind::AsymptoticSqueezed:
        bound.statistical = asymptotic_bound_squeezed(
            setup.eta, setup.n_thermal, nbar, setup.alpha, &bound.warnings);
        break;
    case BoundKind::AsymptoticCoherent:
        bound.statistical = asymptotic_bound_coherent(setup.eta, setup.n_thermal,
                                                      nbar, setup.alpha);
        break;
    default:
        fail(ErrorKind::InvalidParameter,
             fmt::format("total_bound handles asymptotic kinds only, got {}",
                         to_string(kind)));
    }
    bound.heating = heating_disturbance(nbar, setup.eta, setup.omega, setup.mass,
                                        setup.specific_heat);
    bound.delta_t = bound.statistical + bound.heating;
    return bound;
}

auto exact_bound(double q_t, const ProbeSetup &setup, double nbar) -> PrecisionBound {
    PrecisionBound bound;
    bound.kind = BoundKind::ExactQfi;
    bound.statistical = cramer_rao(q_t, 1);
    bound.heating = heating_disturbance(nbar, setup.eta, setup.omega, setup.mass,
                                        setup.specific_heat);
    bound.delta_t = bound.statistical + bound.heating;
    return bound;
}

auto AsymptoticCoefficients::optimal_nbar() const -> double {
    if (heating_slope <= 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return std::cbrt(std::pow(statistical / (2.0 * heating_slope), 2.0));
}

auto asymptotic_coefficients(BoundKind kind, const ProbeSetup &setup)
    -> AsymptoticCoefficients {
    AsymptoticCoefficients coeffs;
    switch (kind) {
    case BoundKind::AsymptoticSqueezed:
        coeffs.statistical =
            asymptotic_bound_squeezed(setup.eta, setup.n_thermal, 1.0, setup.alpha);
        break;
    case BoundKind::AsymptoticCoherent:
        coeffs.statistical =
            asymptotic_bound_coherent(setup.eta, setup.n_thermal, 1.0, setup.alpha);
        break;
    default:
        fail(ErrorKind::InvalidParameter, "asymptotic coefficients need an asymptotic kind");
    }
    coeffs.heating_slope = heating_disturbance(1.0, setup.eta, setup.omega, setup.mass,
                                               setup.specific_heat);
    return coeffs;
}

} // namespace qtherm
