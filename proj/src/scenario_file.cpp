#include "ctxlab/scenario_file.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "ctxlab/error.hpp"

namespace ctxlab::scenario {

using nlohmann::json;

namespace {

const json &require(const json &object, const char *key, const std::string &where) {
    if (!object.is_object() || !object.contains(key))
        throw InputError(where + ": missing field '" + key + "'");
    return object.at(key);
}

std::size_t read_dim(const json &doc, const char *key) {
    const json &value = require(doc, key, "scenario");
    if (!value.is_number_integer() || value.get<long long>() < 1)
        throw InputError(std::string("scenario: '") + key + "' must be a positive integer");
    return value.get<std::size_t>();
}

Complex decode_complex(const json &pair, const std::string &where) {
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number())
        throw InputError(where + ": complex entries must be [re, im] number pairs");
    return {pair[0].get<double>(), pair[1].get<double>()};
}

Vector decode_vector(const json &list, std::size_t dim, const std::string &where) {
    if (!list.is_array())
        throw InputError(where + ": expected a list of [re, im] pairs");
    if (list.size() != dim)
        throw InputError(where + ": expected " + std::to_string(dim) + " entries, got " +
                         std::to_string(list.size()));
    Vector v(static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < dim; ++i)
        v[static_cast<Eigen::Index>(i)] = decode_complex(list[i], where);
    if (!v.allFinite())
        throw InputError(where + ": non-finite entries");
    return v;
}

Matrix decode_matrix(const json &rows, std::size_t dim, const std::string &where) {
    if (!rows.is_array() || rows.size() != dim)
        throw InputError(where + ": expected " + std::to_string(dim) + " rows");
    Matrix m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::size_t r = 0; r < dim; ++r)
        m.row(static_cast<Eigen::Index>(r)) = decode_vector(rows[r], dim, where).transpose();
    return m;
}

std::string read_label(const json &entry, const std::string &where) {
    const json &label = require(entry, "label", where);
    if (!label.is_string())
        throw InputError(where + ": 'label' must be a string");
    return label.get<std::string>();
}

} // namespace

DensityMatrix StateEntry::density(double tol) const {
    if (const auto *ket = std::get_if<Ket>(&state))
        return DensityMatrix::pure(*ket, tol);
    return std::get<DensityMatrix>(state);
}

Dilation ScenarioFile::dilation(double tol) const {
    if (!has_dilation())
        throw InputError("scenario has no outcomes/phi_init dilation section");
    return Dilation(JointOutcomeSet(Space::joint(env_dim, system_dim), outcomes, tol), *phi_init, tol);
}

Povm ScenarioFile::resolve_povm(double tol) const {
    if (povm)
        return *povm;
    if (has_dilation())
        return povm_from_dilation(dilation(tol), tol);
    throw InputError("scenario has neither a povm section nor a dilation");
}

const StateEntry &ScenarioFile::state(const std::string &label) const {
    for (const auto &entry : states) {
        if (entry.label == label)
            return entry;
    }
    throw LabelError("scenario has no state labelled '" + label + "'");
}

ScenarioFile parse(const json &doc, double tol) {
    if (!doc.is_object())
        throw InputError("scenario: top level must be a JSON object");
    ScenarioFile file;
    const json &version = require(doc, "version", "scenario");
    if (!version.is_number_integer() || version.get<int>() != kFormatVersion)
        throw InputError("scenario: unsupported version (expected " + std::to_string(kFormatVersion) + ")");
    file.system_dim = read_dim(doc, "system_dim");
    const Space system = Space::system(file.system_dim);

    const bool needs_env = doc.contains("outcomes") || doc.contains("phi_init");
    if (doc.contains("env_dim"))
        file.env_dim = read_dim(doc, "env_dim");
    else if (needs_env)
        throw InputError("scenario: 'env_dim' is required with outcomes or phi_init");

    if (doc.contains("outcomes")) {
        const json &outcomes = doc.at("outcomes");
        if (!outcomes.is_array())
            throw InputError("scenario: 'outcomes' must be a list");
        const Space joint = Space::joint(file.env_dim, file.system_dim);
        for (std::size_t i = 0; i < outcomes.size(); ++i) {
            const std::string where = "outcomes[" + std::to_string(i) + "]";
            std::string label = read_label(outcomes[i], where);
            Vector v = decode_vector(require(outcomes[i], "vector", where), joint.dim(), where);
            file.outcomes.push_back({std::move(label), Ket(joint, std::move(v))});
        }
    }
    if (doc.contains("phi_init")) {
        Vector v = decode_vector(doc.at("phi_init"), file.env_dim, "phi_init");
        file.phi_init.emplace(Space::environment(file.env_dim), std::move(v));
    }
    if (file.outcomes.empty() != !file.phi_init.has_value())
        throw InputError("scenario: 'outcomes' and 'phi_init' must be given together");

    if (doc.contains("povm")) {
        const json &entries = doc.at("povm");
        if (!entries.is_array())
            throw InputError("scenario: 'povm' must be a list");
        std::vector<PovmElement> elements;
        for (std::size_t i = 0; i < entries.size(); ++i) {
            const std::string where = "povm[" + std::to_string(i) + "]";
            std::string label = read_label(entries[i], where);
            if (entries[i].contains("vector"))
                elements.emplace_back(std::move(label),
                                      Ket(system, decode_vector(entries[i].at("vector"), file.system_dim, where)));
            else if (entries[i].contains("matrix"))
                elements.emplace_back(std::move(label), Operator(system, decode_matrix(entries[i].at("matrix"),
                                                                                         file.system_dim, where)));
            else
                throw InputError(where + ": element needs a 'vector' or a 'matrix'");
        }
        file.povm.emplace(file.system_dim, std::move(elements), tol);
    }

    if (doc.contains("states")) {
        const json &entries = doc.at("states");
        if (!entries.is_array())
            throw InputError("scenario: 'states' must be a list");
        for (std::size_t i = 0; i < entries.size(); ++i) {
            const std::string where = "states[" + std::to_string(i) + "]";
            std::string label = read_label(entries[i], where);
            if (entries[i].contains("vector")) {
                Ket ket(system, decode_vector(entries[i].at("vector"), file.system_dim, where));
                if (!ket.is_normalised(tol))
                    throw InvariantError("state.normalised", where + " is not normalised");
                file.states.push_back({std::move(label), std::move(ket)});
            } else if (entries[i].contains("density_matrix")) {
                Operator op(system, decode_matrix(entries[i].at("density_matrix"), file.system_dim, where));
                file.states.push_back({std::move(label), DensityMatrix(std::move(op), tol)});
            } else {
                throw InputError(where + ": state needs a 'vector' or a 'density_matrix'");
            }
        }
    }

    if (doc.contains("hardy")) {
        const json &hardy = doc.at("hardy");
        HardySection section;
        auto read = [&](const char *key) {
            const json &value = require(hardy, key, "hardy");
            if (!value.is_string())
                throw InputError(std::string("hardy: '") + key + "' must be a label");
            return value.get<std::string>();
        };
        section.f = read("f");
        section.d1 = read("d1");
        section.d2 = read("d2");
        if (hardy.contains("basis1"))
            section.basis1.emplace(system, decode_vector(hardy.at("basis1"), file.system_dim, "hardy.basis1"));
        if (hardy.contains("basis2"))
            section.basis2.emplace(system, decode_vector(hardy.at("basis2"), file.system_dim, "hardy.basis2"));
        file.hardy = std::move(section);
    }
    return file;
}

ScenarioFile load(const std::filesystem::path &path, double tol) {
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open scenario file '" + path.string() + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error &e) {
        throw InputError("'" + path.string() + "' is not valid JSON: " + e.what());
    }
    return parse(doc, tol);
}

json encode(Complex z) { return json::array({z.real(), z.imag()}); }

json encode(const Vector &v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i)
        out.push_back(encode(v[i]));
    return out;
}

json encode(const Matrix &m) {
    json out = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        out.push_back(encode(Vector(m.row(r).transpose())));
    return out;
}

json encode(const PovmElement &element) {
    json out = {{"label", element.label()}};
    if (element.is_vector())
        out["vector"] = encode(element.vector().amplitudes());
    else
        out["matrix"] = encode(std::get<Operator>(element.payload()).entries());
    return out;
}

json to_json(const ScenarioFile &file) {
    json doc = {{"version", file.version}, {"system_dim", file.system_dim}};
    if (file.env_dim > 0)
        doc["env_dim"] = file.env_dim;
    if (!file.outcomes.empty()) {
        json outcomes = json::array();
        for (const auto &outcome : file.outcomes)
            outcomes.push_back({{"label", outcome.label}, {"vector", encode(outcome.vector.amplitudes())}});
        doc["outcomes"] = std::move(outcomes);
    }
    if (file.phi_init)
        doc["phi_init"] = encode(file.phi_init->amplitudes());
    if (file.povm) {
        json elements = json::array();
        for (const auto &element : file.povm->elements())
            elements.push_back(encode(element));
        doc["povm"] = std::move(elements);
    }
    if (!file.states.empty()) {
        json states = json::array();
        for (const auto &entry : file.states) {
            if (const auto *ket = std::get_if<Ket>(&entry.state))
                states.push_back({{"label", entry.label}, {"vector", encode(ket->amplitudes())}});
            else
                states.push_back({{"label", entry.label},
                                  {"density_matrix", encode(std::get<DensityMatrix>(entry.state).entries())}});
        }
        doc["states"] = std::move(states);
    }
    if (file.hardy) {
        json hardy = {{"f", file.hardy->f}, {"d1", file.hardy->d1}, {"d2", file.hardy->d2}};
        if (file.hardy->basis1)
            hardy["basis1"] = encode(file.hardy->basis1->amplitudes());
        if (file.hardy->basis2)
            hardy["basis2"] = encode(file.hardy->basis2->amplitudes());
        doc["hardy"] = std::move(hardy);
    }
    return doc;
}

void save(const ScenarioFile &file, const std::filesystem::path &path) {
    std::ofstream out(path);
    if (!out)
        throw InputError("cannot write '" + path.string() + "'");
    out << to_json(file).dump(2) << '\n';
}

double round12(double x) {
    if (!std::isfinite(x) || x == 0.0)
        return x;
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.12g", x);
    return std::strtod(buffer, nullptr);
}

} // namespace ctxlab::scenario
