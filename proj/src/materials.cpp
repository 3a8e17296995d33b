#include "qtherm/materials.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include <fmt/format.h>

#include "qtherm/errors.hpp"

namespace qtherm {

namespace {

struct UnitFactor {
    std::string_view unit;
    double factor;
};

struct FieldSpec {
    std::string_view key;
    double Material::*member;
    std::array<UnitFactor, 4> units; // empty unit string terminates
};

// The empty unit (bare number) is always accepted as SI.
const std::array<FieldSpec, 7> kFields{{
    {"n", &Material::n, {{{"", 1.0}}}},
    {"n_prime", &Material::n_prime, {{{"1/K", 1.0}}}},
    {"alpha_T", &Material::alpha_T, {{{"1/K", 1.0}}}},
    {"length", &Material::length, {{{"m", 1.0}, {"cm", 1e-2}}}},
    {"mass", &Material::mass, {{{"kg", 1.0}, {"g", 1e-3}}}},
    {"specific_heat",
     &Material::specific_heat,
     {{{"J/(kg*K)", 1.0}, {"J/(kg K)", 1.0}, {"J/(kgK)", 1.0}}}},
    {"alpha_abs",
     &Material::alpha_abs,
     {{{"1/m", 1.0}, {"m^-1", 1.0}, {"cm^-1", 1e2}, {"1/cm", 1e2}}}},
}};

auto trim(std::string_view s) -> std::string_view {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    return s;
}

auto find_field(std::string_view key) -> const FieldSpec * {
    for (const auto &field : kFields) {
        if (field.key == key) {
            return &field;
        }
    }
    return nullptr;
}

auto parse_quantity(const FieldSpec &field, std::string_view value, int line) -> double {
    double number = 0.0;
    const auto *begin = value.data();
    const auto *end = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(begin, end, number);
    if (ec != std::errc{} || !std::isfinite(number)) {
        throw ParseError(std::string(field.key),
                         fmt::format("line {}: '{}' is not a number", line, value));
    }
    const std::string_view unit = trim(std::string_view(ptr, end - ptr));
    if (unit.empty()) {
        return number;
    }
    for (const auto &candidate : field.units) {
        if (!candidate.unit.empty() && candidate.unit == unit) {
            return number * candidate.factor;
        }
    }
    throw ParseError(std::string(field.key),
                     fmt::format("line {}: unit '{}' not accepted for {}", line, unit,
                                 field.key));
}

void require(bool condition, std::string_view field, std::string_view rule, double value) {
    if (!condition) {
        fail(ErrorKind::Validation,
             fmt::format("material field {} = {} violates {}", field, value, rule));
    }
}

} // namespace

void validate(const Material &m) {
    for (const auto &field : kFields) {
        require(std::isfinite(m.*field.member), field.key, "finiteness", m.*field.member);
    }
    require(m.n >= 1.0, "n", "n >= 1", m.n);
    require(m.length > 0.0, "length", "length > 0", m.length);
    require(m.mass > 0.0, "mass", "mass > 0", m.mass);
    require(m.specific_heat > 0.0, "specific_heat", "specific_heat > 0",
            m.specific_heat);
    require(m.alpha_abs >= 0.0, "alpha_abs", "alpha_abs >= 0", m.alpha_abs);
}

auto transmissivity(const Material &material) -> double {
    validate(material);
    return std::exp(-material.length * material.alpha_abs);
}

auto phase_coupling(const Material &material, double omega, const PhysicalConstants &k)
    -> double {
    validate(material);
    if (!(omega > 0.0)) {
        fail(ErrorKind::InvalidParameter,
             fmt::format("probe frequency must be positive, got {}", omega));
    }
    return omega * material.length / k.c *
           (material.n * material.alpha_T + material.n_prime);
}

auto wavelength_to_omega(double wavelength, const PhysicalConstants &k) -> double {
    if (!(wavelength > 0.0)) {
        fail(ErrorKind::InvalidParameter, "wavelength must be positive");
    }
    return 2.0 * std::numbers::pi * k.c / wavelength;
}

auto ppktp() -> Material {
    return {.name = "ppktp",
            .n = 1.74,
            .n_prime = 0.6e-5,
            .alpha_T = 1.1e-5,
            .length = 1e-2,
            .mass = 3e-3,
            .specific_heat = 688.0,
            .alpha_abs = 0.0002 * 1e2};
}

auto builtin_material(std::string_view name) -> std::optional<Material> {
    if (name == "ppktp" || name == "PPKTP") {
        return ppktp();
    }
    return std::nullopt;
}

auto parse_material(std::string_view text) -> Material {
    Material material;
    std::map<std::string, int, std::less<>> seen;
    std::istringstream in{std::string(text)};
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ParseError("", fmt::format("line {}: expected key = value", line_no));
        }
        const std::string key(trim(line.substr(0, eq)));
        const std::string_view value = trim(line.substr(eq + 1));
        if (seen.contains(key)) {
            throw ParseError(key, fmt::format("line {}: duplicate key {}", line_no, key));
        }
        seen.emplace(key, line_no);
        if (key == "name") {
            material.name = std::string(value);
            continue;
        }
        const FieldSpec *field = find_field(key);
        if (field == nullptr) {
            throw ParseError(key, fmt::format("line {}: unknown key {}", line_no, key));
        }
        material.*field->member = parse_quantity(*field, value, line_no);
    }
    for (const auto &field : kFields) {
        if (!seen.contains(field.key)) {
            throw ParseError(std::string(field.key),
                             fmt::format("missing required key {}", field.key));
        }
    }
    validate(material);
    return material;
}

auto format_material(const Material &m) -> std::string {
    std::string out = "# SI units\n";
    if (!m.name.empty()) {
        out += fmt::format("name = {}\n", m.name);
    }
    for (const auto &field : kFields) {
        out += fmt::format("{} = {:.17g}\n", field.key, m.*field.member);
    }
    return out;
}

auto load_material(const std::filesystem::path &path) -> Material {
    std::ifstream in(path);
    if (!in) {
        fail(ErrorKind::Io, fmt::format("cannot open material file {}", path.string()));
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_material(buffer.str());
}

void save_material(const Material &material, const std::filesystem::path &path) {
    validate(material);
    std::ofstream out(path);
    if (!out) {
        fail(ErrorKind::Io, fmt::format("cannot write material file {}", path.string()));
    }
    out << format_material(material);
    if (!out) {
        fail(ErrorKind::Io, fmt::format("write to {} failed", path.string()));
    }
}

auto resolve_material(std::string_view reference) -> Material {
    const std::filesystem::path direct{std::string(reference)};
    if (std::filesystem::is_regular_file(direct)) {
        return load_material(direct);
    }
    if (const char *dir = std::getenv("QTHERM_DATA_DIR"); dir != nullptr && *dir != '\0') {
        const auto candidate =
            std::filesystem::path(dir) / (std::string(reference) + ".material");
        if (std::filesystem::is_regular_file(candidate)) {
            return load_material(candidate);
        }
    }
    if (auto builtin = builtin_material(reference)) {
        return *builtin;
    }
    fail(ErrorKind::Validation,
         fmt::format("unknown material '{}' (not a file, not in QTHERM_DATA_DIR, "
                     "not a built-in preset)",
                     reference));
}

} // namespace qtherm
