#include "qtherm/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <thread>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "qtherm/channel.hpp"
#include "qtherm/fock.hpp"
#include "qtherm/pyrometer.hpp"

namespace qtherm::cli {

namespace {

constexpr double kDefaultWavelengthNm = 1064.0;

auto sig6(double value) -> std::string { return fmt::format("{:.6g}", value); }

auto csv_field(const std::optional<double> &value) -> std::string {
    return value ? fmt::format("{:.17g}", *value) : std::string{};
}

auto default_jobs() -> unsigned { return std::max(1u, std::thread::hardware_concurrency()); }

void explain_units(std::ostream &out) {
    out << "flag              unit      SI conversion\n"
           "--T, --temperature K        as given\n"
           "--area-cm2        cm^2      x 1e-4  -> m^2\n"
           "--dt-ms           ms        x 1e-3  -> s\n"
           "--wavelength-nm   nm        omega = 2 pi c / (x 1e-9 m)\n"
           "--omega           rad/s     as given\n"
           "--nbar*           photons   dimensionless\n"
           "material files    length m|cm, mass kg|g, alpha_abs 1/m|1/cm, "
           "n_prime and alpha_T 1/K, specific_heat J/(kg K)\n"
           "output            kelvin, seconds, metres, rad/s (6 significant digits; "
           "CSV 17)\n";
}

struct Context {
    std::ostream &out;
    std::ostream &err;
};

// Flags shared by sweep and optimize.
struct ProbeFlags {
    std::string material = "ppktp";
    std::optional<double> wavelength_nm;
    std::optional<double> omega;
    double temperature = 298.0;

    void attach(CLI::App &app) {
        app.add_option("--material", material,
                       "Material preset name or path to a .material file")
            ->capture_default_str();
        auto *wl = app.add_option("--wavelength-nm", wavelength_nm,
                                  "Probe wavelength in nm (default 1064)");
        auto *om = app.add_option("--omega", omega, "Probe angular frequency in rad/s");
        wl->excludes(om);
        app.add_option("--temperature", temperature, "Sample and reservoir temperature, K")
            ->capture_default_str();
    }

    void fill(RunConfig &config) const {
        config.material = material;
        config.temperature = temperature;
        if (wavelength_nm) {
            config.wavelength = *wavelength_nm * 1e-9;
        }
        config.omega = omega;
    }
};

auto setup_for(const RunConfig &config) -> ProbeSetup {
    const Material material = resolve_material(config.material);
    return probe_setup(material, probe_omega(config), config.temperature);
}

void print_params(std::ostream &out, const InputStateParams &p) {
    out << "xbar0                 " << sig6(p.xbar0) << '\n'
        << "pbar0                 " << sig6(p.pbar0) << '\n'
        << "N0                    " << sig6(p.n0) << '\n'
        << "r0                    " << sig6(p.r0) << '\n';
}

auto cmd_pyrometer(Context ctx, double temperature, double area_cm2, double dt_ms) -> int {
    const PyrometerConfig config{
        .area = area_cm2 * 1e-4, .response_time = dt_ms * 1e-3, .temperature = temperature};
    validate(config);
    const double closed = pyrometer_precision(config);
    const double integrated = total_fisher_precision(config);
    ctx.out << "delta_T               " << sig6(closed) << " K\n"
            << "delta_T (quadrature)  " << sig6(integrated) << " K\n"
            << "relative difference   " << sig6(std::abs(integrated - closed) / closed)
            << '\n';
    return kExitOk;
}

auto cmd_sweep(Context ctx, const RunConfig &config) -> int {
    validate(config);
    const ProbeSetup setup = setup_for(config);
    const double pyro = pyrometer_precision({.area = config.area,
                                             .response_time = config.response_time,
                                             .temperature = config.temperature});
    SweepOptions options;
    options.search.seed = config.seed;
    options.jobs = config.jobs;

    // Open the destination before the (possibly long) computation.
    std::ofstream file;
    if (!config.output.empty()) {
        file.open(config.output, std::ios::binary | std::ios::trunc);
        if (!file) {
            fail(ErrorKind::Io, fmt::format("cannot open {} for writing", config.output));
        }
    }
    const auto rows = sweep_nbar(config.grid, setup, config.kinds, pyro, options);
    if (config.output.empty()) {
        write_csv(ctx.out, rows);
        return kExitOk;
    }
    write_csv(file, rows);
    file.close();
    if (!file) {
        fail(ErrorKind::Io, fmt::format("writing {} failed", config.output));
    }
    ctx.out << "wrote " << rows.size() << " rows to " << config.output << '\n';
    return kExitOk;
}

auto parse_bound_kind(const std::string &name) -> BoundKind {
    if (name == "squeezed") {
        return BoundKind::AsymptoticSqueezed;
    }
    if (name == "coherent") {
        return BoundKind::AsymptoticCoherent;
    }
    if (name == "exact") {
        return BoundKind::ExactQfi;
    }
    fail(ErrorKind::Validation, fmt::format("unknown kind '{}'", name));
}

auto cmd_optimize(Context ctx, const RunConfig &config, const std::string &kind_name,
                  std::optional<double> fixed_nbar, const NbarRange &range) -> int {
    const BoundKind kind = parse_bound_kind(kind_name);
    const ProbeSetup setup = setup_for(config);
    StateSearchOptions search;
    search.seed = config.seed;

    OptimizationResult result;
    std::vector<std::string> warnings;
    if (fixed_nbar) {
        const double nbar = *fixed_nbar;
        if (!(nbar > 0.0) || !std::isfinite(nbar)) {
            fail(ErrorKind::Validation, "--nbar must be positive");
        }
        const ChannelParams channel{.phi = 0.0, .eta = setup.eta, .n_thermal = setup.n_thermal};
        if (kind == BoundKind::ExactQfi) {
            result = optimize_state_at_nbar(nbar, channel, setup.alpha, search);
            const PrecisionBound bound = exact_bound(result.q_t, setup, nbar);
            result.delta_t = bound.delta_t;
            warnings = bound.warnings;
        } else {
            const PrecisionBound bound = total_bound(kind, setup, nbar);
            result.params = kind == BoundKind::AsymptoticSqueezed ? squeezed_vacuum_params(nbar)
                                                                  : coherent_params(nbar);
            result.q_t = qfi_temperature(output_phase_qfi(result.params, channel), setup.alpha);
            result.delta_t = bound.delta_t;
            result.nbar = nbar;
            result.converged = true;
            warnings = bound.warnings;
        }
    } else {
        result = optimize_nbar(kind, setup, range, search);
    }

    ctx.out << "kind                  " << to_string(kind) << '\n'
            << "delta_T_min           " << sig6(result.delta_t) << " K\n"
            << "nbar*                 " << sig6(result.nbar) << '\n'
            << "Q_T                   " << sig6(result.q_t) << " 1/K^2\n";
    print_params(ctx.out, result.params);
    ctx.out << "displacement fraction " << sig6(displacement_fraction(result.params)) << '\n'
            << "converged             " << (result.converged ? "yes" : "no") << '\n';
    for (const auto &w : warnings) {
        ctx.err << "warning: " << w << '\n';
    }
    return kExitOk;
}

auto cmd_oracle_check(Context ctx, std::optional<int> dim, double tolerance,
                      double perturbation) -> int {
    fock::OracleOptions options;
    options.tolerance = tolerance;
    options.dim_override = dim;
    options.covariance_perturbation = perturbation;
    const fock::OracleGrid grid;
    const fock::OracleReport report = fock::run_oracle_grid(grid, options);

    for (const auto &o : report.outcomes) {
        if (!o.passed) {
            ctx.err << fmt::format(
                "FAIL {} nbar={} eta={} N={} dim={}: gaussian {} fock {} relative error {}\n",
                fock::to_string(o.input.family), sig6(o.input.nbar), sig6(o.input.eta),
                sig6(o.input.n_thermal), o.dim, sig6(o.q_gaussian), sig6(o.q_fock),
                sig6(o.relative_error));
        }
    }
    const auto &worst = report.outcomes.at(report.worst_index);
    ctx.out << fmt::format("cases                 {}\n", report.outcomes.size())
            << fmt::format("worst relative error  {} ({} nbar={} eta={} N={})\n",
                           sig6(report.worst_relative_error), fock::to_string(worst.input.family),
                           sig6(worst.input.nbar), sig6(worst.input.eta),
                           sig6(worst.input.n_thermal))
            << "tolerance             " << sig6(tolerance) << '\n'
            << "result                " << (report.passed() ? "pass" : "fail") << '\n';
    return report.passed() ? kExitOk : kExitRuntime;
}

auto cmd_qfi(Context ctx, const InputStateParams &input, const ChannelParams &channel,
             std::optional<double> alpha) -> int {
    const GaussianState output = apply_channel(make_gaussian_state(input), channel);
    const double q_phi = qfi_phase(output);
    ctx.out << "nbar (input)          " << sig6(mean_photon_number(input)) << '\n'
            << "nbar (output)         " << sig6(mean_photon_number(output)) << '\n'
            << "Q_phi                 " << sig6(q_phi) << " 1/rad^2\n";
    if (alpha) {
        const double q_t = qfi_temperature(q_phi, *alpha);
        ctx.out << "Q_T                   " << sig6(q_t) << " 1/K^2\n"
                << "delta_T (k=1)         " << sig6(cramer_rao(q_t)) << " K\n";
    }
    return kExitOk;
}

} // namespace

void validate(const RunConfig &config) {
    const auto &g = config.grid;
    if (!(g.start > 0.0) || !(g.stop > g.start) || !std::isfinite(g.stop) || g.points < 2) {
        fail(ErrorKind::Validation,
             "grid must satisfy 0 < start < stop < inf with at least 2 points");
    }
    if (!config.kinds.any()) {
        fail(ErrorKind::Validation, "at least one curve kind is required");
    }
    if (!(config.temperature > 0.0) || !std::isfinite(config.temperature)) {
        fail(ErrorKind::Validation, "temperature must be positive");
    }
    if (!(config.area > 0.0) || !(config.response_time > 0.0)) {
        fail(ErrorKind::Validation, "pyrometer area and response time must be positive");
    }
    if (config.jobs < 1) {
        fail(ErrorKind::Validation, "jobs must be at least 1");
    }
}

auto parse_kinds(std::string_view list) -> SweepKinds {
    SweepKinds kinds{false, false, false, false};
    std::size_t pos = 0;
    while (pos <= list.size()) {
        const std::size_t comma = std::min(list.find(',', pos), list.size());
        std::string_view item = list.substr(pos, comma - pos);
        while (!item.empty() && item.front() == ' ') {
            item.remove_prefix(1);
        }
        while (!item.empty() && item.back() == ' ') {
            item.remove_suffix(1);
        }
        if (item == "exact") {
            kinds.exact = true;
        } else if (item == "squeezed") {
            kinds.squeezed = true;
        } else if (item == "coherent") {
            kinds.coherent = true;
        } else if (item == "pyrometer") {
            kinds.pyrometer = true;
        } else if (!item.empty()) {
            fail(ErrorKind::Validation, fmt::format("unknown curve kind '{}'", item));
        }
        pos = comma + 1;
    }
    return kinds;
}

auto probe_omega(const RunConfig &config) -> double {
    if (config.omega) {
        if (!(*config.omega > 0.0) || !std::isfinite(*config.omega)) {
            fail(ErrorKind::Validation, "omega must be positive");
        }
        return *config.omega;
    }
    const double wavelength = config.wavelength.value_or(kDefaultWavelengthNm * 1e-9);
    if (!(wavelength > 0.0) || !std::isfinite(wavelength)) {
        fail(ErrorKind::Validation, "wavelength must be positive");
    }
    return wavelength_to_omega(wavelength);
}

auto probe_setup(const Material &material, double omega, double temperature) -> ProbeSetup {
    validate(material);
    return {.eta = transmissivity(material),
            .n_thermal = thermal_occupation(omega, temperature),
            .alpha = phase_coupling(material, omega),
            .omega = omega,
            .mass = material.mass,
            .specific_heat = material.specific_heat};
}

void write_csv(std::ostream &out, const std::vector<SweepRow> &rows) {
    out << kCsvHeader << '\n';
    for (const auto &row : rows) {
        out << fmt::format("{:.17g},{},{},{},{}\n", row.nbar, csv_field(row.exact),
                           csv_field(row.squeezed), csv_field(row.coherent),
                           csv_field(row.pyrometer));
    }
}

auto exit_code(ErrorKind kind) -> int {
    switch (kind) {
    case ErrorKind::InvalidParameter:
    case ErrorKind::Parse:
    case ErrorKind::Validation:
        return kExitUsage;
    default:
        return kExitRuntime;
    }
}

auto run(int argc, const char *const *argv, std::ostream &out, std::ostream &err) -> int {
    CLI::App app{"Precision bounds for interferometric and radiometric thermometry"};
    app.name("qtherm");
    app.require_subcommand(0, 1);
    bool units = false;
    app.add_flag("--explain-units", units, "Print the unit conversion table and exit");

    // pyrometer
    double pyro_t = 0.0;
    double pyro_area = 0.0;
    double pyro_dt = 0.0;
    auto *pyro = app.add_subcommand("pyrometer", "Idealized blackbody pyrometer bound");
    pyro->add_option("--T", pyro_t, "Temperature, K")->required();
    pyro->add_option("--area-cm2", pyro_area, "Detector area, cm^2")->required();
    pyro->add_option("--dt-ms", pyro_dt, "Response time, ms")->required();

    // sweep
    RunConfig sweep_config;
    sweep_config.jobs = default_jobs();
    ProbeFlags sweep_probe;
    std::string kinds_list = "exact,squeezed,coherent,pyrometer";
    double sweep_area_cm2 = 1.0;
    double sweep_dt_ms = 10.0;
    auto *sweep = app.add_subcommand("sweep", "Precision curves over a log grid of nbar (CSV)");
    sweep_probe.attach(*sweep);
    sweep->add_option("--start", sweep_config.grid.start, "First nbar")->capture_default_str();
    sweep->add_option("--stop", sweep_config.grid.stop, "Last nbar")->capture_default_str();
    sweep->add_option("--points", sweep_config.grid.points, "Grid points")
        ->capture_default_str();
    sweep->add_option("--kinds", kinds_list,
                      "Comma list of exact, squeezed, coherent, pyrometer")
        ->capture_default_str();
    sweep->add_option("--output,-o", sweep_config.output, "CSV path (default stdout)");
    sweep->add_option("--seed", sweep_config.seed, "Optimizer seed")->capture_default_str();
    sweep->add_option("--jobs,-j", sweep_config.jobs, "Worker threads");
    sweep->add_option("--area-cm2", sweep_area_cm2, "Pyrometer area, cm^2")
        ->capture_default_str();
    sweep->add_option("--dt-ms", sweep_dt_ms, "Pyrometer response time, ms")
        ->capture_default_str();

    // optimize
    RunConfig opt_config;
    ProbeFlags opt_probe;
    std::string opt_kind;
    std::optional<double> opt_nbar;
    NbarRange opt_range;
    auto *optimize = app.add_subcommand("optimize", "Photon number minimizing the total error");
    opt_probe.attach(*optimize);
    optimize->add_option("--kind", opt_kind, "squeezed, coherent or exact")->required();
    auto *fixed = optimize->add_option("--nbar", opt_nbar, "Evaluate at one photon number");
    optimize->add_option("--nbar-min", opt_range.lo, "Search range start")
        ->capture_default_str()
        ->excludes(fixed);
    optimize->add_option("--nbar-max", opt_range.hi, "Search range end")
        ->capture_default_str()
        ->excludes(fixed);
    optimize->add_option("--grid-points", opt_range.grid_points, "Scan points")
        ->capture_default_str()
        ->excludes(fixed);
    optimize->add_option("--seed", opt_config.seed, "Optimizer seed")->capture_default_str();

    // oracle-check
    std::optional<int> oracle_dim;
    double oracle_tol = fock::OracleOptions{}.tolerance;
    double oracle_perturb = 0.0;
    auto *oracle =
        app.add_subcommand("oracle-check", "Gaussian vs Fock-space QFI over the check grid");
    oracle->add_option("--dim", oracle_dim, "Fixed Fock truncation for every case");
    oracle->add_option("--tolerance", oracle_tol, "Relative tolerance")->capture_default_str();
    // Test hook: shifts the Gaussian output covariance to prove the check bites.
    oracle->add_option("--inject-covariance-error", oracle_perturb)->group("");

    // qfi
    InputStateParams qfi_input;
    ChannelParams qfi_channel;
    std::optional<double> qfi_alpha;
    auto *qfi = app.add_subcommand("qfi", "Phase and temperature QFI of one Gaussian probe");
    qfi->add_option("--xbar", qfi_input.xbar0, "Input mean x")->capture_default_str();
    qfi->add_option("--pbar", qfi_input.pbar0, "Input mean p")->capture_default_str();
    qfi->add_option("--n0", qfi_input.n0, "Input thermal photons")->capture_default_str();
    qfi->add_option("--r", qfi_input.r0, "Squeezing parameter")->capture_default_str();
    qfi->add_option("--eta", qfi_channel.eta, "Transmissivity")->capture_default_str();
    qfi->add_option("--n-thermal", qfi_channel.n_thermal, "Reservoir photons")
        ->capture_default_str();
    qfi->add_option("--phi", qfi_channel.phi, "Phase, rad")->capture_default_str();
    qfi->add_option("--alpha", qfi_alpha, "Phase-temperature coupling, rad/K");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    const Context ctx{out, err};
    try {
        if (units) {
            explain_units(out);
            return kExitOk;
        }
        if (*pyro) {
            return cmd_pyrometer(ctx, pyro_t, pyro_area, pyro_dt);
        }
        if (*sweep) {
            sweep_probe.fill(sweep_config);
            sweep_config.kinds = parse_kinds(kinds_list);
            sweep_config.area = sweep_area_cm2 * 1e-4;
            sweep_config.response_time = sweep_dt_ms * 1e-3;
            return cmd_sweep(ctx, sweep_config);
        }
        if (*optimize) {
            opt_probe.fill(opt_config);
            return cmd_optimize(ctx, opt_config, opt_kind, opt_nbar, opt_range);
        }
        if (*oracle) {
            return cmd_oracle_check(ctx, oracle_dim, oracle_tol, oracle_perturb);
        }
        if (*qfi) {
            return cmd_qfi(ctx, qfi_input, qfi_channel, qfi_alpha);
        }
        err << app.help();
        return kExitUsage;
    } catch (const Error &e) {
        err << "error: " << e.what() << '\n';
        return exit_code(e.kind());
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
}

auto run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) -> int {
    std::vector<const char *> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("qtherm");
    for (const auto &a : args) {
        argv.push_back(a.c_str());
    }
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

} // namespace qtherm::cli
