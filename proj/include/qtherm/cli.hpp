#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qtherm/errors.hpp"
#include "qtherm/materials.hpp"
#include "qtherm/metrology.hpp"
#include "qtherm/optimizer.hpp"

namespace qtherm::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/// Everything a sweep needs, in SI once parsed.
struct RunConfig {
    std::string material = "ppktp";
    std::optional<double> wavelength; // m
    std::optional<double> omega;      // rad/s, wins over wavelength
    double temperature = 298.0;       // K, reservoir and pyrometer
    LogGrid grid;
    SweepKinds kinds;
    std::string output; // empty: standard output
    std::uint64_t seed = 2015;
    unsigned jobs = 1;
    double area = 1e-4;         // m^2
    double response_time = 1e-2; // s
};

/// Throws Error(Validation) on a non-monotone grid or empty kinds.
void validate(const RunConfig &config);

/// Comma-separated subset of exact, squeezed, coherent, pyrometer.
[[nodiscard]] auto parse_kinds(std::string_view list) -> SweepKinds;

/// Probe angular frequency: omega if given, else from the wavelength (1064 nm default).
[[nodiscard]] auto probe_omega(const RunConfig &config) -> double;

[[nodiscard]] auto probe_setup(const Material &material, double omega, double temperature)
    -> ProbeSetup;

inline constexpr std::string_view kCsvHeader = "nbar,dt_exact,dt_sq_asym,dt_coh_asym,dt_pyro";

void write_csv(std::ostream &out, const std::vector<SweepRow> &rows);

/// Exit code for a library error: 2 for bad input, 1 otherwise.
[[nodiscard]] auto exit_code(ErrorKind kind) -> int;

/// Full command line entry point; argv[0] is the program name.
[[nodiscard]] auto run(int argc, const char *const *argv, std::ostream &out,
                       std::ostream &err) -> int;

[[nodiscard]] auto run(const std::vector<std::string> &args, std::ostream &out,
                       std::ostream &err) -> int;

} // namespace qtherm::cli
