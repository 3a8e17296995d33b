#include "qtherm/fock.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>
#include <unsupported/Eigen/MatrixFunctions>

#include "qtherm/errors.hpp"
#include "qtherm/pyrometer.hpp"

namespace qtherm::fock {

namespace {

using Complex = std::complex<double>;
constexpr Complex kI{0.0, 1.0};

auto working_dim(int dim) -> int { return dim + std::max(40, dim); }

// U = D(alpha) S(r) on `dim` levels, from truncated generators.
auto preparation_unitary(const InputStateParams &params, int dim) -> ComplexMatrix {
    ComplexMatrix unitary = ComplexMatrix::Identity(dim, dim);
    if (params.r0 != 0.0) {
        // (r/2)(a^dag^2 - a^2) is real antisymmetric.
        Eigen::MatrixXd generator = Eigen::MatrixXd::Zero(dim, dim);
        for (int n = 0; n + 2 < dim; ++n) {
            const double element = 0.5 * params.r0 * std::sqrt((n + 1.0) * (n + 2.0));
            generator(n + 2, n) = element;
            generator(n, n + 2) = -element;
        }
        unitary = generator.exp().cast<Complex>();
    }
    if (params.xbar0 != 0.0 || params.pbar0 != 0.0) {
        const Complex alpha = Complex(params.xbar0, params.pbar0) / std::sqrt(2.0);
        ComplexMatrix displacement;
        if (params.pbar0 == 0.0) {
            Eigen::MatrixXd generator = Eigen::MatrixXd::Zero(dim, dim);
            for (int n = 0; n + 1 < dim; ++n) {
                const double element = alpha.real() * std::sqrt(n + 1.0);
                generator(n + 1, n) = element;
                generator(n, n + 1) = -element;
            }
            displacement = generator.exp().cast<Complex>();
        } else {
            ComplexMatrix generator = ComplexMatrix::Zero(dim, dim);
            for (int n = 0; n + 1 < dim; ++n) {
                const double s = std::sqrt(n + 1.0);
                generator(n + 1, n) = alpha * s;
                generator(n, n + 1) = -std::conj(alpha) * s;
            }
            displacement = generator.exp();
        }
        unitary = displacement * unitary;
    }
    return unitary;
}

auto prepare(const InputStateParams &params, int dim) -> ComplexMatrix {
    Eigen::VectorXd populations(dim);
    for (int n = 0; n < dim; ++n) {
        populations(n) = thermal_pmf(static_cast<unsigned>(n), params.n0);
    }
    const ComplexMatrix unitary = preparation_unitary(params, dim);
    return unitary * populations.cast<Complex>().asDiagonal() * unitary.adjoint();
}

auto hermitian_part(const ComplexMatrix &m) -> ComplexMatrix {
    return 0.5 * (m + m.adjoint());
}

struct Spectrum {
    Eigen::VectorXd values;
    ComplexMatrix vectors;
};

auto spectrum(const FockDensityMatrix &rho) -> Spectrum {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(rho.data));
    if (solver.info() != Eigen::Success) {
        fail(ErrorKind::NumericFailure, "density-matrix eigendecomposition failed");
    }
    Eigen::VectorXd values = solver.eigenvalues();
    for (auto &v : values) {
        v = std::max(v, 0.0); // also clips the -1e-10 numerical noise floor
    }
    return {values, solver.eigenvectors()};
}

void check_shapes(const FockDensityMatrix &rho, const ComplexMatrix &drho) {
    if (drho.rows() != rho.dim() || drho.cols() != rho.dim()) {
        fail(ErrorKind::InvalidParameter, "derivative and state dimensions differ");
    }
}

auto quadrature_x(int dim) -> ComplexMatrix {
    const ComplexMatrix a = annihilation(dim);
    return (a + a.adjoint()) / std::sqrt(2.0);
}

auto quadrature_p(int dim) -> ComplexMatrix {
    const ComplexMatrix a = annihilation(dim);
    return (a - a.adjoint()) / (kI * std::sqrt(2.0));
}

} // namespace

auto annihilation(int dim) -> ComplexMatrix {
    ComplexMatrix a = ComplexMatrix::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) {
        a(n - 1, n) = std::sqrt(static_cast<double>(n));
    }
    return a;
}

auto rule_dim(double nbar) -> int {
    return std::max(30, static_cast<int>(std::ceil(nbar + 8.0 * std::sqrt(nbar + 1.0) + 20.0)));
}

auto required_dim(const InputStateParams &params, double tail_tol) -> int {
    validate(params);
    const int start = rule_dim(mean_photon_number(params));
    int probe = 2 * start;
    for (int attempt = 0; attempt < 8; ++attempt, probe *= 2) {
        const ComplexMatrix rho = prepare(params, probe);
        const Eigen::VectorXd populations = rho.diagonal().real();
        // The upper quarter of the probe space must be empty for the
        // cumulative count below to be trusted.
        const double upper = populations.tail(probe / 4).sum();
        if (upper > 1e-3 * tail_tol) {
            continue;
        }
        double kept = 0.0;
        int needed = probe;
        for (int n = 0; n < probe; ++n) {
            kept += populations(n);
            if (1.0 - kept <= 0.5 * tail_tol) {
                needed = n + 1;
                break;
            }
        }
        return std::max(start, needed + 2);
    }
    fail(ErrorKind::NumericFailure,
         fmt::format("no truncation up to {} levels reaches tail {}", probe, tail_tol));
}

auto build_state(const InputStateParams &params, int dim, double tail_tol)
    -> FockDensityMatrix {
    validate(params);
    if (dim < 2) {
        fail(ErrorKind::InvalidParameter, "Fock truncation needs at least two levels");
    }
    const ComplexMatrix full = prepare(params, working_dim(dim));
    FockDensityMatrix rho;
    rho.data = hermitian_part(full.topLeftCorner(dim, dim));
    rho.trace_deficit = 1.0 - rho.data.trace().real();
    if (rho.trace_deficit > tail_tol) {
        const int suggestion = required_dim(params, tail_tol);
        throw TruncationError(
            fmt::format("truncation at {} levels loses {:.3g} of the probability "
                        "(tolerance {:.3g}); use dim >= {}",
                        dim, rho.trace_deficit, tail_tol, suggestion),
            suggestion);
    }
    return rho;
}

auto default_lindblad_steps(const PhysicalChannelParams &channel) -> int {
    const double span = std::max(channel.omega * channel.duration,
                                 channel.decay_rate * channel.duration);
    return std::max(1, static_cast<int>(std::ceil(2000.0 * span)));
}

auto evolve_lindblad(const FockDensityMatrix &rho, const PhysicalChannelParams &channel,
                     int steps) -> FockDensityMatrix {
    validate(channel);
    if (steps < 0) {
        fail(ErrorKind::InvalidParameter, "step count must be >= 0");
    }
    if (steps == 0) {
        steps = default_lindblad_steps(channel);
    }
    const int dim = rho.dim();
    const double omega = channel.omega;
    const double loss = 0.5 * channel.decay_rate * (channel.n_thermal + 1.0);
    const double gain = 0.5 * channel.decay_rate * channel.n_thermal;

    Eigen::VectorXd number(dim);       // a^dag a
    Eigen::VectorXd anti_number(dim);  // a a^dag, truncated: last level is 0
    Eigen::VectorXd root(dim);         // sqrt(n)
    for (int n = 0; n < dim; ++n) {
        number(n) = n;
        anti_number(n) = n + 1 < dim ? n + 1.0 : 0.0;
        root(n) = std::sqrt(static_cast<double>(n));
    }

    const auto rhs = [&](const ComplexMatrix &r) {
        ComplexMatrix out(dim, dim);
        for (int k = 0; k < dim; ++k) {
            for (int m = 0; m < dim; ++m) {
                Complex value = -kI * omega * (number(m) - number(k)) * r(m, k);
                Complex jump_down = 0.0;
                if (m + 1 < dim && k + 1 < dim) {
                    jump_down = root(m + 1) * root(k + 1) * r(m + 1, k + 1);
                }
                value += loss * (2.0 * jump_down - (number(m) + number(k)) * r(m, k));
                Complex jump_up = 0.0;
                if (m > 0 && k > 0) {
                    jump_up = root(m) * root(k) * r(m - 1, k - 1);
                }
                value += gain * (2.0 * jump_up - (anti_number(m) + anti_number(k)) * r(m, k));
                out(m, k) = value;
            }
        }
        return out;
    };

    ComplexMatrix state = rho.data;
    const Complex initial_trace = state.trace();
    const double h = channel.duration / steps;
    for (int i = 0; i < steps && h > 0.0; ++i) {
        const ComplexMatrix k1 = rhs(state);
        const ComplexMatrix k2 = rhs(state + 0.5 * h * k1);
        const ComplexMatrix k3 = rhs(state + 0.5 * h * k2);
        const ComplexMatrix k4 = rhs(state + h * k3);
        state += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    const double drift = std::abs(state.trace() - initial_trace);
    if (drift > 1e-6 || !state.allFinite()) {
        fail(ErrorKind::NumericFailure,
             fmt::format("Lindblad integration drifted in trace by {:.3g}", drift));
    }
    FockDensityMatrix out;
    out.data = hermitian_part(state);
    out.trace_deficit = rho.trace_deficit;
    return out;
}

auto rotate_phase(const FockDensityMatrix &rho, double phi) -> FockDensityMatrix {
    FockDensityMatrix out = rho;
    for (int k = 0; k < rho.dim(); ++k) {
        for (int m = 0; m < rho.dim(); ++m) {
            out.data(m, k) *= std::exp(-kI * phi * static_cast<double>(m - k));
        }
    }
    return out;
}

auto phase_derivative(const FockDensityMatrix &rho) -> ComplexMatrix {
    ComplexMatrix out(rho.dim(), rho.dim());
    for (int k = 0; k < rho.dim(); ++k) {
        for (int m = 0; m < rho.dim(); ++m) {
            out(m, k) = -kI * static_cast<double>(m - k) * rho.data(m, k);
        }
    }
    return out;
}

auto qfi_from_spectrum(const FockDensityMatrix &rho, const ComplexMatrix &drho) -> double {
    check_shapes(rho, drho);
    const Spectrum s = spectrum(rho);
    const ComplexMatrix rotated = s.vectors.adjoint() * drho * s.vectors;
    double q = 0.0;
    bool any = false;
    for (int j = 0; j < rho.dim(); ++j) {
        for (int i = 0; i < rho.dim(); ++i) {
            const double denominator = s.values(i) + s.values(j);
            if (denominator > kEigenvalueFloor) {
                any = true;
                q += 2.0 * std::norm(rotated(i, j)) / denominator;
            }
        }
    }
    if (!any) {
        fail(ErrorKind::NoInformation, "every eigenvalue pair is below the floor");
    }
    return q;
}

auto sld_matrix(const FockDensityMatrix &rho, const ComplexMatrix &drho) -> ComplexMatrix {
    check_shapes(rho, drho);
    const Spectrum s = spectrum(rho);
    ComplexMatrix rotated = s.vectors.adjoint() * drho * s.vectors;
    for (int j = 0; j < rho.dim(); ++j) {
        for (int i = 0; i < rho.dim(); ++i) {
            const double denominator = s.values(i) + s.values(j);
            rotated(i, j) = denominator > kEigenvalueFloor
                                ? 2.0 * rotated(i, j) / denominator
                                : Complex(0.0);
        }
    }
    return hermitian_part(s.vectors * rotated * s.vectors.adjoint());
}

auto expectation(const FockDensityMatrix &rho, const ComplexMatrix &op) -> double {
    return (rho.data * op).trace().real();
}

auto moments(const FockDensityMatrix &rho) -> GaussianState {
    const int dim = rho.dim();
    Complex a1 = 0.0;
    Complex a2 = 0.0;
    double n_mean = 0.0;
    for (int m = 0; m < dim; ++m) {
        n_mean += m * rho.data(m, m).real();
        if (m + 1 < dim) {
            a1 += std::sqrt(m + 1.0) * rho.data(m + 1, m);
        }
        if (m + 2 < dim) {
            a2 += std::sqrt((m + 1.0) * (m + 2.0)) * rho.data(m + 2, m);
        }
    }
    GaussianState out;
    const double x = std::sqrt(2.0) * a1.real();
    const double p = std::sqrt(2.0) * a1.imag();
    out.mean << x, p;
    out.cov(0, 0) = a2.real() + n_mean + 0.5 - x * x;
    out.cov(1, 1) = -a2.real() + n_mean + 0.5 - p * p;
    out.cov(0, 1) = a2.imag() - x * p;
    out.cov(1, 0) = out.cov(0, 1);
    return out;
}

auto fit_quadratic_sld(const FockDensityMatrix &rho, const ComplexMatrix &sld)
    -> QuadraticFit {
    const int dim = rho.dim();
    const GaussianState m = moments(rho);
    const ComplexMatrix id = ComplexMatrix::Identity(dim, dim);
    const ComplexMatrix xt = quadrature_x(dim) - m.xbar() * id;
    const ComplexMatrix pt = quadrature_p(dim) - m.pbar() * id;
    const std::array<ComplexMatrix, 4> basis{0.5 * (xt * pt + pt * xt), xt, pt, id};

    const auto inner = [&](const ComplexMatrix &a, const ComplexMatrix &b) {
        return expectation(rho, 0.5 * (a * b + b * a));
    };
    Eigen::Matrix4d gram;
    Eigen::Vector4d rhs;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            gram(i, j) = inner(basis[i], basis[j]);
        }
        rhs(i) = inner(sld, basis[i]);
    }
    const Eigen::Vector4d c = gram.ldlt().solve(rhs);

    ComplexMatrix residual = sld;
    for (int i = 0; i < 4; ++i) {
        residual -= c(i) * basis[i];
    }
    QuadraticFit fit;
    fit.form = {.c_xp = c(0), .c_x = c(1), .c_p = c(2)};
    fit.constant = c(3);
    const double norm = inner(sld, sld);
    fit.relative_residual = norm > 0.0 ? inner(residual, residual) / norm : 0.0;
    return fit;
}

auto to_string(ProbeFamily family) -> const char * {
    switch (family) {
    case ProbeFamily::Coherent:
        return "coherent";
    case ProbeFamily::SqueezedVacuum:
        return "squeezed-vacuum";
    case ProbeFamily::DisplacedThermal:
        return "displaced-thermal";
    }
    return "unknown";
}

auto family_params(ProbeFamily family, double nbar) -> InputStateParams {
    switch (family) {
    case ProbeFamily::Coherent:
        return coherent_params(nbar);
    case ProbeFamily::SqueezedVacuum:
        return squeezed_vacuum_params(nbar);
    case ProbeFamily::DisplacedThermal:
        return {.xbar0 = std::sqrt(nbar), .pbar0 = 0.0, .n0 = 0.5 * nbar, .r0 = 0.0};
    }
    fail(ErrorKind::InvalidParameter, "unknown probe family");
}

auto run_oracle_case(const OracleCase &input, const OracleOptions &options) -> OracleOutcome {
    const InputStateParams params = family_params(input.family, input.nbar);
    const ChannelParams channel{.phi = 0.0, .eta = input.eta, .n_thermal = input.n_thermal};

    GaussianState gaussian = apply_channel(make_gaussian_state(params), channel);
    gaussian.cov(0, 0) += options.covariance_perturbation;

    OracleOutcome outcome;
    outcome.input = input;
    outcome.dim = options.dim_override.value_or(required_dim(params));
    const FockDensityMatrix prepared = build_state(params, outcome.dim);
    const PhysicalChannelParams physical{.omega = 0.0,
                                         .decay_rate = -std::log(input.eta),
                                         .duration = 1.0,
                                         .n_thermal = input.n_thermal};
    const FockDensityMatrix evolved = evolve_lindblad(prepared, physical);

    outcome.q_gaussian = qfi_phase(gaussian);
    outcome.q_fock = qfi_from_spectrum(evolved, phase_derivative(evolved));
    outcome.relative_error =
        std::abs(outcome.q_fock - outcome.q_gaussian) / std::abs(outcome.q_gaussian);
    outcome.passed = outcome.relative_error < options.tolerance;
    return outcome;
}

auto OracleGrid::cases() const -> std::vector<OracleCase> {
    std::vector<OracleCase> out;
    for (const double nbar : nbars) {
        for (const auto family : families) {
            for (const double eta : etas) {
                for (const double n : n_thermals) {
                    out.push_back({family, nbar, eta, n});
                }
            }
        }
    }
    return out;
}

auto OracleReport::passed() const -> bool {
    return std::all_of(outcomes.begin(), outcomes.end(),
                       [](const OracleOutcome &o) { return o.passed; });
}

auto run_oracle_grid(const OracleGrid &grid, const OracleOptions &options) -> OracleReport {
    OracleReport report;
    for (const auto &c : grid.cases()) {
        report.outcomes.push_back(run_oracle_case(c, options));
        const auto &last = report.outcomes.back();
        if (report.outcomes.size() == 1 ||
            last.relative_error > report.worst_relative_error) {
            report.worst_relative_error = last.relative_error;
            report.worst_index = report.outcomes.size() - 1;
        }
    }
    return report;
}

} // namespace qtherm::fock
