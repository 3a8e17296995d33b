#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "qtherm/constants.hpp"

namespace qtherm {

/**
 * @brief Optical and thermal constants of a probed sample, all SI.
 *
 * Temperatures entering through this type are deviations delta_T from the
 * calibration point; phase_coupling gives dphi/d(delta_T) to first order.
 */
struct Material {
    std::string name;
    double n = 1.0;             // refractive index
    double n_prime = 0.0;       // dn/dT, 1/K
    double alpha_T = 0.0;       // thermal expansion, 1/K
    double length = 0.0;        // m
    double mass = 0.0;          // kg
    double specific_heat = 0.0; // J/(kg K)
    double alpha_abs = 0.0;     // absorption coefficient, 1/m

    friend auto operator==(const Material &, const Material &) -> bool = default;
};

/// Throws Error(Validation) naming the offending field.
void validate(const Material &material);

/// exp(-length alpha_abs).
[[nodiscard]] auto transmissivity(const Material &material) -> double;

/// (omega L / c)(n alpha_T + n'), rad/K.
[[nodiscard]] auto phase_coupling(const Material &material, double omega,
                                  const PhysicalConstants &k = kSI) -> double;

/// 2 pi c / lambda.
[[nodiscard]] auto wavelength_to_omega(double wavelength,
                                       const PhysicalConstants &k = kSI) -> double;

/// 1 cm PPKTP crystal: M = 3 g, C_s = 688 J/(kg K), n = 1.74,
/// alpha_T = 1.1e-5 /K, n' = 0.6e-5 /K, alpha_abs = 0.0002 /cm.
[[nodiscard]] auto ppktp() -> Material;

[[nodiscard]] auto builtin_material(std::string_view name) -> std::optional<Material>;

/**
 * @brief Parses the key = value material format.
 *
 * Lines are `key = value [unit]`, `#` starts a comment. Required keys:
 * n, n_prime, alpha_T, length, mass, specific_heat, alpha_abs; optional: name.
 * Accepted units per key (SI when omitted):
 *   length     m | cm
 *   mass       kg | g
 *   alpha_abs  1/m | m^-1 | cm^-1 | 1/cm
 *   n_prime, alpha_T   1/K
 *   specific_heat      J/(kg*K) | J/(kg K)
 *
 * Throws ParseError (missing, duplicate, unknown or malformed field) or
 * Error(Validation) when a value violates the material invariants.
 */
[[nodiscard]] auto parse_material(std::string_view text) -> Material;

/// SI-only rendering that parse_material reads back bit-exactly.
[[nodiscard]] auto format_material(const Material &material) -> std::string;

[[nodiscard]] auto load_material(const std::filesystem::path &path) -> Material;
void save_material(const Material &material, const std::filesystem::path &path);

/**
 * @brief Resolves a material reference: an existing file path, then
 * `$QTHERM_DATA_DIR/<name>.material`, then the built-in presets.
 */
[[nodiscard]] auto resolve_material(std::string_view reference) -> Material;

} // namespace qtherm
