#pragma once

// JSON scenario files. Complex numbers are [re, im] pairs; vectors are lists
// of pairs and matrices lists of rows. See docs/scenario.schema.json.

#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "ctxlab/dilation.hpp"
#include "ctxlab/povm.hpp"

namespace ctxlab::scenario {

inline constexpr int kFormatVersion = 1;

struct StateEntry {
    std::string label;
    std::variant<Ket, DensityMatrix> state;

    DensityMatrix density(double tol = kDefaultTol) const;
};

struct HardySection {
    std::string f;
    std::string d1;
    std::string d2;
    std::optional<Ket> basis1;
    std::optional<Ket> basis2;
};

struct ScenarioFile {
    int version = kFormatVersion;
    std::size_t system_dim = 0;
    std::size_t env_dim = 0;
    std::vector<LabelledKet> outcomes;
    std::optional<Ket> phi_init;
    std::optional<Povm> povm;
    std::vector<StateEntry> states;
    std::optional<HardySection> hardy;

    bool has_dilation() const { return !outcomes.empty() && phi_init.has_value(); }
    /// Validates the outcome set and initial state.
    Dilation dilation(double tol = kDefaultTol) const;
    /// The explicit povm section if present, else the POVM of the dilation.
    Povm resolve_povm(double tol = kDefaultTol) const;
    const StateEntry &state(const std::string &label) const;
};

/// Structural problems raise InputError; violated physics (non-orthonormal
/// outcomes, non-positive elements, ...) raise InvariantError.
ScenarioFile parse(const nlohmann::json &doc, double tol = kDefaultTol);
ScenarioFile load(const std::filesystem::path &path, double tol = kDefaultTol);

nlohmann::json to_json(const ScenarioFile &file);
void save(const ScenarioFile &file, const std::filesystem::path &path);

nlohmann::json encode(Complex z);
nlohmann::json encode(const Vector &v);
nlohmann::json encode(const Matrix &m);
nlohmann::json encode(const PovmElement &element);

/// Rounds to 12 significant digits.
double round12(double x);

} // namespace ctxlab::scenario
