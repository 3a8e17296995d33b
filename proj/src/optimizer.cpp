#include "qtherm/optimizer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <thread>

#include <fmt/format.h>

#include "qtherm/errors.hpp"

namespace qtherm {

namespace {

// Triangle wave of period 2 mapping the real line onto [0, 1]; lets an
// unconstrained simplex reach both ends of a fraction exactly.
auto fold(double u) -> double {
    return std::abs(u - 2.0 * std::floor(0.5 * (u + 1.0)));
}

auto zero_phase(ChannelParams channel) -> ChannelParams {
    channel.phi = 0.0;
    return channel;
}

struct StateSearch {
    double nbar;
    ChannelParams channel;
    int evaluations = 0;

    auto qfi(double displacement, double thermal) -> double {
        ++evaluations;
        return qfi_phase(apply_channel(make_gaussian_state(params(displacement, thermal)),
                                       channel));
    }

    // Undisplaced output covariance decides the displacement direction.
    auto params(double displacement, double thermal) const -> InputStateParams {
        InputStateParams centred = state_from_split(nbar, {displacement, thermal, 0.0});
        centred.xbar0 = 0.0;
        centred.pbar0 = 0.0;
        const GaussianState out = apply_channel(make_gaussian_state(centred), channel);
        const double amplitude = std::sqrt(2.0 * displacement * nbar);
        if (out.cov(1, 1) < out.cov(0, 0)) {
            centred.xbar0 = amplitude;
        } else {
            centred.pbar0 = amplitude;
        }
        return centred;
    }
};

} // namespace

auto state_from_split(double nbar, const BudgetSplit &split) -> InputStateParams {
    if (!(nbar >= 0.0) || !std::isfinite(nbar)) {
        fail(ErrorKind::InvalidParameter,
             fmt::format("mean photon number must be finite and >= 0, got {}", nbar));
    }
    const double fd = std::clamp(split.displacement_fraction, 0.0, 1.0);
    const double fn = std::clamp(split.thermal_fraction, 0.0, 1.0);
    const double displaced = fd * nbar;
    const double rest = nbar - displaced;
    const double seed = fn * rest;
    const double ratio = (rest + 0.5) / (seed + 0.5);
    const double amplitude = std::sqrt(2.0 * displaced);
    return {.xbar0 = amplitude * std::cos(split.displacement_angle),
            .pbar0 = amplitude * std::sin(split.displacement_angle),
            .n0 = seed,
            .r0 = 0.5 * std::acosh(std::max(1.0, ratio))};
}

auto displacement_fraction(const InputStateParams &params) -> double {
    const double nbar = mean_photon_number(params);
    if (nbar <= 0.0) {
        return 0.0;
    }
    return 0.5 * (params.xbar0 * params.xbar0 + params.pbar0 * params.pbar0) / nbar;
}

auto output_phase_qfi(const InputStateParams &params, const ChannelParams &channel)
    -> double {
    return qfi_phase(apply_channel(make_gaussian_state(params), zero_phase(channel)));
}

auto nelder_mead(const std::function<double(const std::vector<double> &)> &f,
                 std::vector<double> start, double initial_step, double tolerance,
                 int max_evaluations) -> MinimizeResult {
    const std::size_t n = start.size();
    std::vector<std::vector<double>> simplex(n + 1, start);
    for (std::size_t i = 0; i < n; ++i) {
        simplex[i + 1][i] += initial_step;
    }
    std::vector<double> values(n + 1);
    int evaluations = 0;
    const auto eval = [&](const std::vector<double> &x) {
        ++evaluations;
        return f(x);
    };
    for (std::size_t i = 0; i <= n; ++i) {
        values[i] = eval(simplex[i]);
    }

    std::vector<std::size_t> order(n + 1);
    bool converged = false;
    while (true) {
        for (std::size_t i = 0; i <= n; ++i) {
            order[i] = i;
        }
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
        const std::size_t best = order.front();
        const std::size_t worst = order.back();
        const std::size_t second_worst = order[n - 1];

        double diameter = 0.0;
        for (std::size_t i = 0; i <= n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                diameter = std::max(diameter, std::abs(simplex[i][j] - simplex[best][j]));
            }
        }
        if (diameter < tolerance) {
            converged = true;
            break;
        }
        if (evaluations >= max_evaluations) {
            break;
        }

        std::vector<double> centroid(n, 0.0);
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == worst) {
                continue;
            }
            for (std::size_t j = 0; j < n; ++j) {
                centroid[j] += simplex[i][j] / static_cast<double>(n);
            }
        }
        const auto along = [&](double t) {
            std::vector<double> x(n);
            for (std::size_t j = 0; j < n; ++j) {
                x[j] = centroid[j] + t * (simplex[worst][j] - centroid[j]);
            }
            return x;
        };

        auto reflected = along(-1.0);
        const double f_reflected = eval(reflected);
        if (f_reflected < values[best]) {
            auto expanded = along(-2.0);
            const double f_expanded = eval(expanded);
            if (f_expanded < f_reflected) {
                simplex[worst] = std::move(expanded);
                values[worst] = f_expanded;
            } else {
                simplex[worst] = std::move(reflected);
                values[worst] = f_reflected;
            }
            continue;
        }
        if (f_reflected < values[second_worst]) {
            simplex[worst] = std::move(reflected);
            values[worst] = f_reflected;
            continue;
        }
        const bool outside = f_reflected < values[worst];
        auto contracted = along(outside ? -0.5 : 0.5);
        const double f_contracted = eval(contracted);
        if (f_contracted < std::min(f_reflected, values[worst])) {
            simplex[worst] = std::move(contracted);
            values[worst] = f_contracted;
            continue;
        }
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == best) {
                continue;
            }
            for (std::size_t j = 0; j < n; ++j) {
                simplex[i][j] = simplex[best][j] + 0.5 * (simplex[i][j] - simplex[best][j]);
            }
            values[i] = eval(simplex[i]);
        }
    }

    const auto best_it = std::min_element(values.begin(), values.end());
    const auto best_index = static_cast<std::size_t>(best_it - values.begin());
    return {simplex[best_index], *best_it, evaluations, converged};
}

auto golden_section(const std::function<double(double)> &f, double lo, double hi,
                    double tolerance, int max_evaluations) -> MinimizeResult {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo;
    double b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    int evaluations = 2;
    while (b - a > tolerance && evaluations < max_evaluations) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
        ++evaluations;
    }
    // Endpoints are candidates too: the minimum of a monotone slice sits there.
    double best_x = fc <= fd ? c : d;
    double best_f = std::min(fc, fd);
    for (const double edge : {lo, hi}) {
        const double fe = f(edge);
        ++evaluations;
        if (fe < best_f) {
            best_f = fe;
            best_x = edge;
        }
    }
    return {{best_x}, best_f, evaluations, b - a <= tolerance};
}

auto optimize_state_at_nbar(double nbar, const ChannelParams &channel, double alpha,
                            const StateSearchOptions &options) -> OptimizationResult {
    if (!(nbar > 0.0) || !std::isfinite(nbar)) {
        fail(ErrorKind::InvalidParameter,
             fmt::format("mean photon number must be positive, got {}", nbar));
    }
    if (!std::isfinite(alpha)) {
        fail(ErrorKind::InvalidParameter, "phase-temperature coupling must be finite");
    }
    validate(channel);

    StateSearch search{nbar, zero_phase(channel)};
    const auto objective = [&](const std::vector<double> &u) {
        return -search.qfi(fold(u[0]), fold(u[1]));
    };

    // Pure states first: displaced squeezed vacuum, one fraction.
    const MinimizeResult slice = golden_section(
        [&](double fd) { return -search.qfi(fd, 0.0); }, 0.0, 1.0, options.tolerance);

    std::vector<std::vector<double>> starts{{slice.x[0], 0.0}};
    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < options.restarts; ++i) {
        starts.push_back({unit(rng), unit(rng)});
    }

    MinimizeResult best{{slice.x[0], 0.0}, slice.value, 0, slice.converged};
    for (const auto &start : starts) {
        MinimizeResult run =
            nelder_mead(objective, start, 0.1, options.tolerance, options.max_evaluations);
        if (run.value < best.value ||
            (run.value == best.value && run.converged && !best.converged)) {
            best = std::move(run);
        }
    }

    const double fd = fold(best.x[0]);
    const double fn = fold(best.x[1]);
    OptimizationResult result;
    result.params = search.params(fd, fn);
    result.nbar = nbar;
    result.q_t = qfi_temperature(std::max(0.0, -best.value), alpha);
    result.delta_t =
        result.q_t > 0.0 ? 1.0 / std::sqrt(result.q_t) : std::numeric_limits<double>::infinity();
    result.iterations = search.evaluations;
    result.converged = best.converged;
    return result;
}

auto exact_curve_point(const ProbeSetup &setup, double nbar,
                       const StateSearchOptions &options) -> PrecisionBound {
    const ChannelParams channel{.phi = 0.0, .eta = setup.eta, .n_thermal = setup.n_thermal};
    const OptimizationResult best = optimize_state_at_nbar(nbar, channel, setup.alpha, options);
    return exact_bound(best.q_t, setup, nbar);
}

auto optimize_nbar(BoundKind kind, const ProbeSetup &setup, const NbarRange &range,
                   const StateSearchOptions &options) -> OptimizationResult {
    if (!(range.lo > 0.0) || !(range.hi > range.lo) || !std::isfinite(range.hi) ||
        range.grid_points < 3) {
        fail(ErrorKind::InvalidParameter,
             "photon-number range must satisfy 0 < lo < hi < inf with >= 3 grid points");
    }
    if (kind == BoundKind::Pyrometer) {
        fail(ErrorKind::InvalidParameter, "the pyrometer bound has no photon number");
    }
    const ChannelParams channel{.phi = 0.0, .eta = setup.eta, .n_thermal = setup.n_thermal};

    int evaluations = 0;
    const auto total = [&](double log_nbar) {
        ++evaluations;
        const double nbar = std::exp(log_nbar);
        if (kind == BoundKind::ExactQfi) {
            return exact_curve_point(setup, nbar, options).delta_t;
        }
        return total_bound(kind, setup, nbar).delta_t;
    };

    const double log_lo = std::log(range.lo);
    const double log_hi = std::log(range.hi);
    const double step = (log_hi - log_lo) / (range.grid_points - 1);
    std::vector<double> values(range.grid_points);
    for (int i = 0; i < range.grid_points; ++i) {
        values[i] = total(log_lo + step * i);
    }
    const auto argmin = static_cast<int>(
        std::min_element(values.begin(), values.end()) - values.begin());
    if (argmin == 0 || argmin == range.grid_points - 1) {
        const double edge = argmin == 0 ? range.lo : range.hi;
        throw RangeError(
            fmt::format("{} error is minimal at the range boundary nbar = {:.6g}; "
                        "widen the range",
                        to_string(kind), edge),
            edge);
    }

    double bracket_lo = log_lo + step * (argmin - 1);
    double bracket_hi = log_lo + step * (argmin + 1);
    if (kind != BoundKind::ExactQfi) {
        const double analytic = asymptotic_coefficients(kind, setup).optimal_nbar();
        if (std::isfinite(analytic) && analytic > range.lo && analytic < range.hi) {
            bracket_lo = std::max(log_lo, std::log(analytic) - step);
            bracket_hi = std::min(log_hi, std::log(analytic) + step);
        }
    }
    const MinimizeResult refined = golden_section(total, bracket_lo, bracket_hi, 1e-12);

    OptimizationResult result;
    result.nbar = std::exp(refined.x[0]);
    result.delta_t = refined.value;
    result.converged = refined.converged;
    switch (kind) {
    case BoundKind::ExactQfi: {
        const OptimizationResult state =
            optimize_state_at_nbar(result.nbar, channel, setup.alpha, options);
        result.params = state.params;
        result.q_t = state.q_t;
        result.converged = result.converged && state.converged;
        break;
    }
    case BoundKind::AsymptoticSqueezed:
        result.params = squeezed_vacuum_params(result.nbar);
        result.q_t = qfi_temperature(output_phase_qfi(result.params, channel), setup.alpha);
        break;
    default:
        result.params = coherent_params(result.nbar);
        result.q_t = qfi_temperature(output_phase_qfi(result.params, channel), setup.alpha);
        break;
    }
    result.iterations = evaluations;
    return result;
}

auto LogGrid::values() const -> std::vector<double> {
    if (points < 1 || !(start > 0.0) || !(stop >= start) || !std::isfinite(stop)) {
        fail(ErrorKind::InvalidParameter,
             "grid needs points >= 1 and 0 < start <= stop < inf");
    }
    std::vector<double> out(points);
    const double log_start = std::log10(start);
    const double log_stop = std::log10(stop);
    for (int i = 0; i < points; ++i) {
        out[i] = points == 1 ? start
                             : std::pow(10.0, log_start + (log_stop - log_start) * i /
                                                              (points - 1));
    }
    return out;
}

auto sweep_nbar(const LogGrid &grid, const ProbeSetup &setup, const SweepKinds &kinds,
                double pyrometer_delta_t, const SweepOptions &options)
    -> std::vector<SweepRow> {
    if (!kinds.any()) {
        fail(ErrorKind::Validation, "sweep needs at least one curve kind");
    }
    const std::vector<double> nbars = grid.values();
    std::vector<SweepRow> rows(nbars.size());

    const auto compute_row = [&](std::size_t i) {
        SweepRow row;
        row.nbar = nbars[i];
        if (kinds.exact) {
            StateSearchOptions search = options.search;
            search.seed = options.search.seed + i;
            row.exact = exact_curve_point(setup, row.nbar, search).delta_t;
        }
        if (kinds.squeezed) {
            row.squeezed = total_bound(BoundKind::AsymptoticSqueezed, setup, row.nbar).delta_t;
        }
        if (kinds.coherent) {
            row.coherent = total_bound(BoundKind::AsymptoticCoherent, setup, row.nbar).delta_t;
        }
        if (kinds.pyrometer) {
            row.pyrometer = pyrometer_delta_t;
        }
        rows[i] = row;
    };

    const unsigned workers =
        std::max(1u, std::min<unsigned>(options.jobs, static_cast<unsigned>(rows.size())));
    if (workers == 1) {
        for (std::size_t i = 0; i < rows.size(); ++i) {
            compute_row(i);
        }
        return rows;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < rows.size() && !failed; i = next++) {
                try {
                    compute_row(i);
                } catch (...) {
                    if (!failed.exchange(true)) {
                        failure = std::current_exception();
                    }
                }
            }
        });
    }
    for (auto &t : pool) {
        t.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    return rows;
}

} // namespace qtherm
