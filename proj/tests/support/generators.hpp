#pragma once

// Seeded random generators for property tests.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "qtherm/channel.hpp"
#include "qtherm/gaussian.hpp"

namespace qtherm::testing {

inline constexpr int kPropertyCases = 200;

class Gen {
  public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    auto uniform(double lo, double hi) -> double {
        return std::uniform_real_distribution<double>(lo, hi)(rng_);
    }

    auto log_uniform(double lo, double hi) -> double {
        return std::exp(uniform(std::log(lo), std::log(hi)));
    }

    auto integer(int lo, int hi) -> int {
        return std::uniform_int_distribution<int>(lo, hi)(rng_);
    }

    auto input_state(double max_disp = 5.0, double max_n0 = 5.0, double max_r = 2.0)
        -> InputStateParams {
        return {.xbar0 = uniform(-max_disp, max_disp),
                .pbar0 = uniform(-max_disp, max_disp),
                .n0 = uniform(0.0, max_n0),
                .r0 = uniform(-max_r, max_r)};
    }

    auto channel() -> ChannelParams {
        return {.phi = uniform(-std::numbers::pi, std::numbers::pi), .eta = uniform(1e-3, 1.0),
                .n_thermal = uniform(0.0, 3.0)};
    }

    /// Physical state with a random rotation of its covariance.
    auto state() -> GaussianState {
        const GaussianState s = make_gaussian_state(input_state(3.0, 2.0, 1.2));
        const auto r = rotation(uniform(-std::numbers::pi, std::numbers::pi));
        GaussianState out;
        out.mean = s.mean;
        out.cov = r * s.cov * r.transpose();
        out.cov = 0.5 * (out.cov + out.cov.transpose()).eval();
        return out;
    }

  private:
    std::mt19937_64 rng_;
};

inline auto relative_error(double got, double want) -> double {
    return want == 0.0 ? std::abs(got) : std::abs(got - want) / std::abs(want);
}

} // namespace qtherm::testing
