#include "qtherm/channel.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "qtherm/errors.hpp"

namespace qtherm {

void validate(const ChannelParams &channel) {
    if (!std::isfinite(channel.phi) || !std::isfinite(channel.eta) ||
        !std::isfinite(channel.n_thermal)) {
        fail(ErrorKind::InvalidParameter, "channel parameters must be finite");
    }
    if (!(channel.eta > 0.0 && channel.eta <= 1.0)) {
        fail(ErrorKind::InvalidParameter,
             fmt::format("transmissivity must lie in (0, 1], got {}", channel.eta));
    }
    if (channel.n_thermal < 0.0) {
        fail(ErrorKind::InvalidParameter,
             fmt::format("reservoir photon number must be >= 0, got {}",
                         channel.n_thermal));
    }
}

void validate(const PhysicalChannelParams &channel) {
    const bool finite = std::isfinite(channel.omega) &&
                        std::isfinite(channel.decay_rate) &&
                        std::isfinite(channel.duration) &&
                        std::isfinite(channel.n_thermal);
    if (!finite || channel.omega < 0.0 || channel.decay_rate < 0.0 ||
        channel.duration < 0.0 || channel.n_thermal < 0.0) {
        fail(ErrorKind::InvalidParameter,
             "physical channel parameters must be finite and non-negative");
    }
}

auto PhysicalChannelParams::from_temperature(double omega, double decay_rate,
                                             double duration, double temperature,
                                             const PhysicalConstants &k)
    -> PhysicalChannelParams {
    return {.omega = omega,
            .decay_rate = decay_rate,
            .duration = duration,
            .n_thermal = thermal_occupation(omega, temperature, k)};
}

auto PhysicalChannelParams::effective() const -> ChannelParams {
    return {.phi = omega * duration,
            .eta = std::exp(-decay_rate * duration),
            .n_thermal = n_thermal};
}

auto thermal_occupation(double omega, double temperature,
                        const PhysicalConstants &k) -> double {
    if (!(omega > 0.0) || !std::isfinite(omega)) {
        fail(ErrorKind::InvalidParameter,
             fmt::format("mode frequency must be positive, got {}", omega));
    }
    if (!(temperature >= 0.0)) {
        fail(ErrorKind::InvalidParameter,
             fmt::format("temperature must be >= 0, got {}", temperature));
    }
    if (temperature == 0.0) {
        return 0.0;
    }
    const double ratio = k.hbar * omega / (k.k_B * temperature);
    if (ratio > 700.0) {
        return 0.0;
    }
    return 1.0 / std::expm1(ratio);
}

auto rotation(double phi) -> Eigen::Matrix2d {
    const double c = std::cos(phi);
    const double s = std::sin(phi);
    Eigen::Matrix2d r;
    r << c, s, -s, c;
    return r;
}

auto apply_channel(const GaussianState &state, const ChannelParams &channel)
    -> GaussianState {
    validate(channel);
    if (const auto report = validate_physical(state); !report) {
        fail(ErrorKind::InvalidState, report.message);
    }
    const Eigen::Matrix2d r = rotation(channel.phi);
    const double eta = channel.eta;
    GaussianState out;
    out.mean = std::sqrt(eta) * (r * state.mean);
    out.cov = eta * (r * state.cov * r.transpose()) +
              (1.0 - eta) * (channel.n_thermal + 0.5) * Eigen::Matrix2d::Identity();
    // Exact symmetry; the rotated product can pick up a rounding asymmetry.
    out.cov(1, 0) = out.cov(0, 1);
    return out;
}

auto compose(const ChannelParams &first, const ChannelParams &second)
    -> ChannelParams {
    validate(first);
    validate(second);
    const double eta = first.eta * second.eta;
    ChannelParams out{.phi = first.phi + second.phi, .eta = eta, .n_thermal = 0.0};
    if (eta < 1.0) {
        const double noise = second.eta * (1.0 - first.eta) * (first.n_thermal + 0.5) +
                             (1.0 - second.eta) * (second.n_thermal + 0.5);
        out.n_thermal = std::max(0.0, noise / (1.0 - eta) - 0.5);
    }
    return out;
}

auto default_integrator_steps(const PhysicalChannelParams &channel) -> int {
    const double span = std::max(channel.omega * channel.duration,
                                 channel.decay_rate * channel.duration);
    return std::max(1, static_cast<int>(std::ceil(1000.0 * span)));
}

namespace {

struct Moments {
    Eigen::Vector2d mean;
    Eigen::Matrix2d cov;
};

} // namespace

auto integrate_master_equation(const GaussianState &state,
                               const PhysicalChannelParams &channel, int steps)
    -> GaussianState {
    if (steps < 1) {
        fail(ErrorKind::InvalidParameter,
             fmt::format("integrator needs at least one step, got {}", steps));
    }
    validate(channel);
    if (const auto report = validate_physical(state); !report) {
        fail(ErrorKind::InvalidState, report.message);
    }

    Eigen::Matrix2d drift;
    drift << -0.5 * channel.decay_rate, channel.omega, -channel.omega,
        -0.5 * channel.decay_rate;
    const Eigen::Matrix2d diffusion =
        channel.decay_rate * (channel.n_thermal + 0.5) * Eigen::Matrix2d::Identity();

    const auto rhs = [&](const Moments &m) -> Moments {
        return {drift * m.mean,
                drift * m.cov + m.cov * drift.transpose() + diffusion};
    };
    const auto axpy = [](const Moments &m, double h, const Moments &k) -> Moments {
        return {m.mean + h * k.mean, m.cov + h * k.cov};
    };

    Moments y{state.mean, state.cov};
    const double h = channel.duration / steps;
    for (int i = 0; i < steps; ++i) {
        const Moments k1 = rhs(y);
        const Moments k2 = rhs(axpy(y, 0.5 * h, k1));
        const Moments k3 = rhs(axpy(y, 0.5 * h, k2));
        const Moments k4 = rhs(axpy(y, h, k3));
        y.mean += (h / 6.0) * (k1.mean + 2.0 * k2.mean + 2.0 * k3.mean + k4.mean);
        y.cov += (h / 6.0) * (k1.cov + 2.0 * k2.cov + 2.0 * k3.cov + k4.cov);
    }
    return {y.mean, y.cov};
}

} // namespace qtherm
