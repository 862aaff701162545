#include <sstream>

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "commands.hpp"
#include "ctxlab/contextuality.hpp"
#include "ctxlab/dilation.hpp"
#include "ctxlab/error.hpp"
#include "ctxlab/interferometer.hpp"
#include "ctxlab/povm.hpp"
#include "ctxlab/scenario_file.hpp"

namespace py = pybind11;
using namespace ctxlab;

namespace {

Ket system_ket(const Vector &v) { return Ket(Space::system(static_cast<std::size_t>(v.size())), v); }

Povm make_povm(const std::vector<std::pair<std::string, Vector>> &vectors,
               const std::vector<std::pair<std::string, Matrix>> &matrices, double tol) {
    std::size_t dim = 0;
    if (!vectors.empty())
        dim = static_cast<std::size_t>(vectors.front().second.size());
    else if (!matrices.empty())
        dim = static_cast<std::size_t>(matrices.front().second.rows());
    std::vector<PovmElement> elements;
    for (const auto &[label, v] : vectors) {
        if (static_cast<std::size_t>(v.size()) != dim)
            throw DimensionError("element '" + label + "' has the wrong dimension");
        elements.emplace_back(label, system_ket(v));
    }
    for (const auto &[label, m] : matrices)
        elements.emplace_back(label, Operator(Space::system(dim), m));
    return Povm(dim, std::move(elements), tol);
}

py::dict graph_dict(const ContextGraph &graph) {
    py::list edges;
    for (const auto &edge : graph.edges)
        edges.append(py::make_tuple(edge.first, edge.second, edge.witness));
    py::dict out;
    out["nodes"] = graph.nodes;
    out["edges"] = edges;
    out["excluded"] = graph.excluded;
    return out;
}

py::list dilation_outcomes(const Dilation &dilation) {
    py::list out;
    for (const auto &outcome : dilation.outcomes().outcomes())
        out.append(py::make_tuple(outcome.label, outcome.vector.amplitudes()));
    return out;
}

} // namespace

PYBIND11_MODULE(_ctxlab, m) {
    m.doc() = "Measurement-context analysis for POVMs and their dilations";
    m.attr("DEFAULT_TOL") = kDefaultTol;

    auto error = py::register_exception<Error>(m, "Error");
    py::register_exception<DimensionError>(m, "DimensionError", error);
    py::register_exception<InvariantError>(m, "InvariantError", error);
    py::register_exception<LabelError>(m, "LabelError", error);
    py::register_exception<InputError>(m, "InputError", error);
    py::register_exception<NumericError>(m, "NumericError", error);

    py::class_<Povm>(m, "Povm")
        .def(py::init(&make_povm), py::arg("vectors"), py::arg("matrices") = std::vector<std::pair<std::string, Matrix>>{},
             py::arg("tol") = kDefaultTol, "Elements as (label, vector) and (label, matrix) pairs.")
        .def_property_readonly("system_dim", &Povm::system_dim)
        .def_property_readonly("labels", &Povm::labels)
        .def("__len__", &Povm::size)
        .def("__contains__", &Povm::contains)
        .def("effect", [](const Povm &p, const std::string &label) { return p.at(label).effect().entries(); })
        .def("vector",
             [](const Povm &p, const std::string &label) -> std::optional<Vector> {
                 const auto &element = p.at(label);
                 if (!element.is_vector())
                     return std::nullopt;
                 return element.vector().amplitudes();
             })
        .def("completeness_residual", &completeness_check)
        .def(
            "probability",
            [](const Povm &p, const Vector &psi, const std::string &label) {
                return probability(p, system_ket(psi), label);
            },
            py::arg("state"), py::arg("label"))
        .def("weight", [](const Povm &p, const std::string &label) { return context_selection_probability(p, label); })
        .def(
            "rescaled_probability",
            [](const Povm &p, const Vector &psi, const std::string &label, double tol) {
                return rescaled_probability(p, system_ket(psi), label, tol);
            },
            py::arg("state"), py::arg("label"), py::arg("tol") = kDefaultTol)
        .def(
            "context_graph", [](const Povm &p, double tol) { return graph_dict(context_graph(p, tol)); },
            py::arg("tol") = kDefaultTol)
        .def(
            "coarse_grain",
            [](const Povm &p, const std::vector<std::string> &labels, std::string new_label, double tol) {
                return coarse_grain(p, labels, std::move(new_label), tol);
            },
            py::arg("labels"), py::arg("new_label"), py::arg("tol") = kDefaultTol);

    m.def(
        "three_path_povm",
        [](const std::string &basis, bool merge_a, const std::string &phi_init) {
            const auto s = interferometer::build_three_path();
            if (basis == "VH")
                return interferometer::povm_vh(s, interferometer::parse_polarisation(phi_init));
            if (basis != "DA")
                throw InputError("unknown basis '" + basis + "' (expected VH or DA)");
            if (phi_init != "D")
                return povm_from_dilation(interferometer::dilation_da(s, interferometer::parse_polarisation(phi_init)));
            return interferometer::povm_da(s, merge_a);
        },
        py::arg("basis") = "VH", py::arg("merge_a") = false, py::arg("phi_init") = "D");

    m.def(
        "naimark_dilate",
        [](const Povm &p, double tol) {
            const Dilation d = naimark_dilate(p, tol);
            return py::make_tuple(dilation_outcomes(d), d.phi_init().amplitudes(), d.env_dim());
        },
        py::arg("povm"), py::arg("tol") = kDefaultTol,
        "Returns (outcomes, phi_init, env_dim); joint index is env * system_dim + sys.");

    m.def(
        "hardy_state", [](const Vector &d1, const Vector &d2) { return hardy_state(system_ket(d1), system_ket(d2)).amplitudes(); },
        py::arg("d1"), py::arg("d2"));

    m.def(
        "max_violation",
        [](const Vector &f, const Vector &d1, const Vector &d2) {
            const auto v = max_violation(HardyTriple::from_kets(system_ket(f), system_ket(d1), system_ket(d2)));
            return py::make_tuple(v.value, v.state.amplitudes());
        },
        py::arg("f"), py::arg("d1"), py::arg("d2"));

    m.def(
        "load_povm", [](const std::filesystem::path &path, double tol) { return scenario::load(path, tol).resolve_povm(tol); },
        py::arg("path"), py::arg("tol") = kDefaultTol, "The POVM described by a scenario file.");

    m.def(
        "run_cli",
        [](const std::vector<std::string> &args) {
            std::vector<std::string> argv{"ctxlab"};
            argv.insert(argv.end(), args.begin(), args.end());
            std::ostringstream out, err;
            const int code = cli::run(argv, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Runs the command-line tool in-process; returns (exit_code, stdout, stderr).");
}
