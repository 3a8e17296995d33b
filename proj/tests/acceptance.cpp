// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "qtherm/channel.hpp"
#include "qtherm/cli.hpp"
#include "qtherm/constants.hpp"
#include "qtherm/fock.hpp"
#include "qtherm/materials.hpp"
#include "qtherm/metrology.hpp"
#include "qtherm/optimizer.hpp"
#include "qtherm/pyrometer.hpp"

using namespace qtherm;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    std::string id;
    std::string title;
    double budget_s;
    std::function<Outcome()> check;
};

auto rel(double got, double want) -> double { return std::abs(got - want) / std::abs(want); }

auto ppktp_setup() -> ProbeSetup {
    const Material m = ppktp();
    const double omega = wavelength_to_omega(1064e-9);
    return cli::probe_setup(m, omega, 298.0);
}

auto run_cli(const std::vector<std::string> &args, std::string &out) -> int {
    std::ostringstream o;
    std::ostringstream e;
    const int code = cli::run(args, o, e);
    out = o.str() + e.str();
    return code;
}

// Value following `label` in the CLI report.
auto report_value(const std::string &text, const std::string &label) -> double {
    const auto pos = text.find(label);
    if (pos == std::string::npos) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    return std::stod(text.substr(pos + label.size()));
}

auto criterion_1() -> Outcome {
    std::string out;
    const int code = run_cli({"pyrometer", "--T", "298", "--area-cm2", "1", "--dt-ms", "10"}, out);
    const double dt = report_value(out, "delta_T ");
    const double err = rel(dt, 4.52e-7);
    return {code == 0 && err <= 0.01,
            fmt::format("delta_T = {:.6g} K, target 4.52e-07 K, rel. dev {:.2e} (tol 1e-2)", dt, err)};
}

auto criterion_2() -> Outcome {
    double worst = 0.0;
    for (const double t : {77.0, 298.0, 1000.0}) {
        const PyrometerConfig cfg{.area = 1e-4, .response_time = 1e-2, .temperature = t};
        worst = std::max(worst, rel(total_fisher_precision(cfg), pyrometer_precision(cfg)));
    }
    return {worst <= 1e-6,
            fmt::format("max rel. dev over T = 77, 298, 1000 K: {:.2e} (tol 1e-6)", worst)};
}

auto optimum_check(BoundKind kind, double target, double lo, double hi) -> Outcome {
    const auto r = optimize_nbar(kind, ppktp_setup(), {});
    const double err = rel(r.delta_t, target);
    return {err <= 0.15 && r.nbar >= lo && r.nbar <= hi && r.converged,
            fmt::format("delta_T_min = {:.6g} K (target {:.2g}, dev {:.3f}, tol 0.15), "
                        "nbar* = {:.4g} in [{:.0e}, {:.0e}]",
                        r.delta_t, target, err, r.nbar, lo, hi)};
}

auto criterion_5() -> Outcome {
    double worst = 0.0;
    for (const double nbar : {0.5, 1.0, 5.0}) {
        worst = std::max(worst, rel(qfi_phase(make_gaussian_state(coherent_params(nbar))),
                                    4.0 * nbar));
        worst = std::max(worst, rel(qfi_phase(make_gaussian_state(squeezed_vacuum_params(nbar))),
                                    8.0 * nbar * (nbar + 1.0)));
    }
    return {worst <= 1e-12, fmt::format("max rel. dev {:.2e} (tol 1e-12)", worst)};
}

auto criterion_6() -> Outcome {
    const fock::OracleGrid grid;
    const auto report = fock::run_oracle_grid(grid, fock::OracleOptions{});
    const auto &w = report.outcomes.at(report.worst_index);
    return {report.passed(),
            fmt::format("{} cases, worst rel. dev {:.2e} at {} nbar={} eta={} N={} dim={} "
                        "(tol 1e-3)",
                        report.outcomes.size(), report.worst_relative_error,
                        fock::to_string(w.input.family), w.input.nbar, w.input.eta,
                        w.input.n_thermal, w.dim)};
}

auto criterion_7() -> Outcome {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const InputStateParams p{.xbar0 = 6.0 * u(rng) - 3.0, .pbar0 = 6.0 * u(rng) - 3.0,
                                 .n0 = 2.0 * u(rng), .r0 = 2.0 * u(rng) - 1.0};
        const PhysicalChannelParams pc{.omega = 3.0 * u(rng), .decay_rate = 2.0 * u(rng),
                                       .duration = 2.0 * u(rng), .n_thermal = 2.0 * u(rng)};
        const GaussianState s = make_gaussian_state(p);
        const auto numeric = integrate_master_equation(s, pc, default_integrator_steps(pc));
        const auto closed = apply_channel(s, pc.effective());
        worst = std::max({worst, (numeric.mean - closed.mean).cwiseAbs().maxCoeff(),
                          (numeric.cov - closed.cov).cwiseAbs().maxCoeff()});
    }
    return {worst <= 1e-8, fmt::format("20 random sets, max abs dev {:.2e} (tol 1e-8)", worst)};
}

auto criterion_8() -> Outcome {
    const InputStateParams inputs[] = {
        {.xbar0 = 1.0, .pbar0 = 0.5, .n0 = 0.2, .r0 = 0.4},
        {.xbar0 = 0.0, .pbar0 = 0.0, .n0 = 0.0, .r0 = 0.8},
        {.xbar0 = 0.0, .pbar0 = 1.5, .n0 = 0.3, .r0 = -0.3},
        {.xbar0 = 1.4, .pbar0 = 0.0, .n0 = 0.5, .r0 = 0.0},
    };
    const ChannelParams channel{.eta = 0.8, .n_thermal = 0.2};
    double trace_l = 0.0;
    double trace_l2 = 0.0;
    double coeff = 0.0;
    for (const auto &p : inputs) {
        const auto rho = fock::evolve_lindblad(
            fock::build_state(p, fock::required_dim(p)),
            {.omega = 0.0, .decay_rate = -std::log(channel.eta), .duration = 1.0,
             .n_thermal = channel.n_thermal});
        const auto drho = fock::phase_derivative(rho);
        const auto sld = fock::sld_matrix(rho, drho);
        const double q = fock::qfi_from_spectrum(rho, drho);
        trace_l = std::max(trace_l, std::abs(fock::expectation(rho, sld)));
        trace_l2 = std::max(trace_l2, rel(fock::expectation(rho, sld * sld), q));
        const auto fit = fock::fit_quadratic_sld(rho, sld);
        const auto closed = sld_phase(apply_channel(make_gaussian_state(p), channel));
        coeff = std::max({coeff, std::abs(fit.form.c_xp - closed.c_xp),
                          std::abs(fit.form.c_x - closed.c_x),
                          std::abs(fit.form.c_p - closed.c_p)});
    }
    return {trace_l <= 1e-8 && trace_l2 <= 1e-8 && coeff <= 1e-3,
            fmt::format("|Tr rho L| {:.2e}, Tr rho L^2 vs Q rel {:.2e} (tol 1e-8); "
                        "coefficient dev {:.2e} (tol 1e-3)",
                        trace_l, trace_l2, coeff)};
}

auto criterion_9() -> Outcome {
    const auto setup = ppktp_setup();
    const ChannelParams channel{.eta = setup.eta, .n_thermal = setup.n_thermal};
    double worst_fd = 0.0;
    double worst_n0 = 0.0;
    for (const double nbar : {1e3, 1e6}) {
        const auto r = optimize_state_at_nbar(nbar, channel, setup.alpha);
        worst_fd = std::max(worst_fd, displacement_fraction(r.params));
        worst_n0 = std::max(worst_n0, r.params.n0);
    }
    return {worst_fd < 1e-3 && worst_n0 < 1e-3,
            fmt::format("max displacement fraction {:.2e}, max N0 {:.2e} (both < 1e-3)", worst_fd,
                        worst_n0)};
}

auto criterion_10() -> Outcome {
    const double temperature = 300.0;
    double worst = 0.0;
    for (const double x : {0.5, 1.0, 5.0}) {
        const double omega = x * kSI.k_B * temperature / kSI.hbar;
        const auto p = [&](unsigned n, double t) {
            return thermal_pmf(n, thermal_occupation(omega, t));
        };
        const auto central = [&](unsigned n, double h) {
            return (p(n, temperature + h) - p(n, temperature - h)) / (2.0 * h);
        };
        const double h = 1e-3 * temperature;
        double sum = 0.0;
        for (unsigned n = 0; n <= 500; ++n) {
            const double pn = p(n, temperature);
            if (pn < 1e-300) {
                break;
            }
            const double d = (4.0 * central(n, h / 2.0) - central(n, h)) / 3.0;
            sum += d * d / pn;
        }
        worst = std::max(worst, rel(sum, single_frequency_fisher(omega, temperature)));
    }
    return {worst <= 1e-8,
            fmt::format("max rel. dev at hbar omega / k_B T = 0.5, 1, 5: {:.2e} (tol 1e-8)", worst)};
}

struct Curves {
    std::vector<double> nbar, exact, squeezed, coherent, pyro;
    std::string error;
};

auto load_sweep() -> Curves {
    static Curves cached = [] {
        Curves c;
        const auto path = std::filesystem::temp_directory_path() / "qtherm_acceptance_sweep.csv";
        std::string out;
        if (run_cli({"sweep", "--start", "1e8", "--stop", "1e16", "--points", "50", "--output",
                     path.string()},
                    out) != 0) {
            c.error = out;
            return c;
        }
        std::ifstream in(path);
        std::string line;
        std::getline(in, line);
        while (std::getline(in, line)) {
            std::replace(line.begin(), line.end(), ',', ' ');
            std::istringstream fields(line);
            double v[5];
            for (double &x : v) {
                fields >> x;
            }
            c.nbar.push_back(v[0]);
            c.exact.push_back(v[1]);
            c.squeezed.push_back(v[2]);
            c.coherent.push_back(v[3]);
            c.pyro.push_back(v[4]);
        }
        return c;
    }();
    return cached;
}

auto criterion_11a() -> Outcome {
    const Curves c = load_sweep();
    if (!c.error.empty() || c.nbar.empty()) {
        return {false, "sweep failed: " + c.error};
    }
    int violations = 0;
    double worst = 0.0;
    double worst_nbar = 0.0;
    for (std::size_t i = 0; i < c.nbar.size(); ++i) {
        const double excess = c.exact[i] / c.squeezed[i] - 1.0;
        if (excess > 0.0) {
            ++violations;
        }
        if (excess > worst) {
            worst = excess;
            worst_nbar = c.nbar[i];
        }
    }
    return {violations == 0,
            fmt::format("exact <= squeezed-asymptotic violated at {}/{} points, max excess "
                        "{:.2e} relative at nbar={:.3g}",
                        violations, c.nbar.size(), worst, worst_nbar)};
}

auto criterion_11b() -> Outcome {
    const Curves c = load_sweep();
    if (!c.error.empty() || c.nbar.empty()) {
        return {false, "sweep failed: " + c.error};
    }
    const auto first_below = [&](const std::vector<double> &curve) {
        for (std::size_t i = 0; i < curve.size(); ++i) {
            if (curve[i] < c.pyro[i]) {
                return c.nbar[i];
            }
        }
        return std::numeric_limits<double>::quiet_NaN();
    };
    const double exact = first_below(c.exact);
    const double sq = first_below(c.squeezed);
    const double coh = first_below(c.coherent);
    return {std::isfinite(exact) && std::isfinite(sq) && std::isfinite(coh),
            fmt::format("first nbar below pyrometer line ({:.4g} K): exact {:.3g}, squeezed "
                        "{:.3g}, coherent {:.3g}",
                        c.pyro.front(), exact, sq, coh)};
}

auto criterion_11c() -> Outcome {
    const Curves c = load_sweep();
    if (!c.error.empty() || c.nbar.empty()) {
        return {false, "sweep failed: " + c.error};
    }
    const auto interior = [&](const std::vector<double> &curve) {
        const auto it = std::min_element(curve.begin(), curve.end());
        const auto i = static_cast<std::size_t>(it - curve.begin());
        return (i > 0 && i + 1 < curve.size()) ? c.nbar[i] : std::numeric_limits<double>::quiet_NaN();
    };
    const double exact = interior(c.exact);
    const double sq = interior(c.squeezed);
    const double coh = interior(c.coherent);
    return {std::isfinite(exact) && std::isfinite(sq) && std::isfinite(coh),
            fmt::format("grid minima at nbar: exact {:.3g}, squeezed {:.3g}, coherent {:.3g}",
                        exact, sq, coh)};
}

} // namespace

int main() {
    const std::vector<Criterion> criteria{
        {"1", "pyrometer bound", 1.0, criterion_1},
        {"2", "quadrature identity", 1.0, criterion_2},
        {"3", "squeezed-vacuum optimum", 1.0,
         [] { return optimum_check(BoundKind::AsymptoticSqueezed, 1.4e-9, 1e13, 1e14); }},
        {"4", "coherent optimum", 1.0,
         [] { return optimum_check(BoundKind::AsymptoticCoherent, 2.4e-8, 1e14, 1e15); }},
        {"5", "closed-form QFI anchors", 1.0, criterion_5},
        {"6", "oracle equivalence", 120.0, criterion_6},
        {"7", "channel cross-check", 10.0, criterion_7},
        {"8", "SLD identities in the oracle", 30.0, criterion_8},
        {"9", "optimizer structure", 5.0, criterion_9},
        {"10", "Fisher brute force", 1.0, criterion_10},
        {"11a", "sweep: exact <= squeezed asymptotic", 60.0, criterion_11a},
        {"11b", "sweep: curves cross below pyrometer", 60.0, criterion_11b},
        {"11c", "sweep: interior minima", 60.0, criterion_11c},
    };

    int failures = 0;
    for (const auto &c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = c.check();
        } catch (const std::exception &e) {
            outcome = {false, std::string("exception: ") + e.what()};
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = elapsed <= c.budget_s;
        const bool pass = outcome.pass && in_time;
        failures += pass ? 0 : 1;
        std::printf("%s %-4s %s: %s [%.2f s%s]\n", pass ? "PASS" : "FAIL", c.id.c_str(),
                    c.title.c_str(), outcome.detail.c_str(), elapsed,
                    in_time ? "" : fmt::format(", over {:.0f} s budget", c.budget_s).c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
                criteria.size());
    return failures == 0 ? 0 : 1;
}
