#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ctxlab/contextuality.hpp"
#include "ctxlab/dilation.hpp"
#include "ctxlab/error.hpp"
#include "ctxlab/interferometer.hpp"
#include "ctxlab/scenario_file.hpp"

namespace ctxlab::cli {

using nlohmann::json;

namespace {

// Values this close to zero are printed as 0; residuals are printed raw.
constexpr double kDisplayZero = 1e-13;

std::string format_raw(double x) {
    char buffer[40];
    std::snprintf(buffer, sizeof buffer, "%.12g", x);
    return buffer;
}

std::string format_value(double x) { return format_raw(std::abs(x) < kDisplayZero ? 0.0 : x); }

double clean(double x) { return scenario::round12(std::abs(x) < kDisplayZero ? 0.0 : x); }

std::string format_complex(Complex z) {
    const double re = std::abs(z.real()) < kDisplayZero ? 0.0 : z.real();
    const double im = std::abs(z.imag()) < kDisplayZero ? 0.0 : z.imag();
    if (im == 0.0)
        return format_raw(re);
    std::string out = re == 0.0 ? "" : format_raw(re);
    out += (im < 0 ? "-" : (re == 0.0 ? "" : "+")) + format_raw(std::abs(im)) + "i";
    return out;
}

std::string format_vector(const Vector &v) {
    std::string out = "[";
    for (Eigen::Index i = 0; i < v.size(); ++i)
        out += (i ? ", " : "") + format_complex(v[i]);
    return out + "]";
}

json clean_json(Complex z) { return json::array({clean(z.real()), clean(z.imag())}); }

json clean_json(const Vector &v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i)
        out.push_back(clean_json(v[i]));
    return out;
}

json clean_json(const Matrix &m) {
    json out = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        out.push_back(clean_json(Vector(m.row(r).transpose())));
    return out;
}

json number_or_null(double x) { return std::isnan(x) ? json(nullptr) : json(clean(x)); }

struct PovmSummary {
    std::vector<std::string> gram_labels;
    Matrix gram_matrix;
    double completeness = 0.0;
    ContextGraph graph;
};

PovmSummary summarise(const Povm &povm, double tol) {
    PovmSummary summary;
    std::vector<Ket> vectors;
    for (const auto &element : povm.elements()) {
        if (element.is_vector()) {
            summary.gram_labels.push_back(element.label());
            vectors.push_back(element.vector());
        }
    }
    if (!vectors.empty())
        summary.gram_matrix = gram(vectors);
    summary.completeness = completeness_check(povm);
    summary.graph = context_graph(povm, tol);
    return summary;
}

void print_graph_text(const ContextGraph &graph, std::ostream &out) {
    out << "context graph: " << graph.nodes.size() << " nodes, " << graph.edges.size() << " edges\n";
    for (const auto &edge : graph.edges)
        out << "  " << edge.first << " -- " << edge.second << "  witness " << format_value(edge.witness) << '\n';
    if (!graph.excluded.empty()) {
        out << "excluded (zero weight):";
        for (const auto &label : graph.excluded)
            out << ' ' << label;
        out << '\n';
    }
}

json graph_json(const ContextGraph &graph) {
    json edges = json::array();
    for (const auto &edge : graph.edges)
        edges.push_back({{"a", edge.first}, {"b", edge.second}, {"witness", clean(edge.witness)}});
    return {{"nodes", graph.nodes}, {"edges", std::move(edges)}, {"excluded", graph.excluded}};
}

void print_povm_text(const Povm &povm, const PovmSummary &summary, double tol, std::ostream &out) {
    out << "POVM: " << povm.size() << " outcomes on " << povm.space().describe() << '\n';
    for (const auto &element : povm.elements()) {
        out << "  " << element.label() << "  weight " << format_value(context_selection_probability(povm, element.label()));
        if (element.is_vector()) {
            out << "  " << format_vector(element.vector().amplitudes()) << '\n';
        } else {
            const Operator &op = std::get<Operator>(element.payload());
            int rank = 0;
            for (auto value : eigh(op, tol).values)
                rank += value > tol ? 1 : 0;
            out << "  operator rank " << rank << " trace " << format_value(op.trace().real()) << '\n';
        }
    }
    if (!summary.gram_labels.empty()) {
        out << "Gram matrix (";
        for (std::size_t i = 0; i < summary.gram_labels.size(); ++i)
            out << (i ? ", " : "") << summary.gram_labels[i];
        out << "):\n";
        for (Eigen::Index r = 0; r < summary.gram_matrix.rows(); ++r)
            out << "  " << format_vector(summary.gram_matrix.row(r).transpose()) << '\n';
    }
    out << "completeness residual: " << format_raw(summary.completeness) << (summary.completeness <= tol ? "" : "  (INCOMPLETE)")
        << '\n';
    print_graph_text(summary.graph, out);
}

json povm_json(const Povm &povm, const PovmSummary &summary, double tol) {
    json outcomes = json::array();
    for (const auto &element : povm.elements()) {
        json entry = {{"label", element.label()},
                      {"weight", clean(context_selection_probability(povm, element.label()))}};
        if (element.is_vector())
            entry["vector"] = clean_json(element.vector().amplitudes());
        else
            entry["matrix"] = clean_json(std::get<Operator>(element.payload()).entries());
        outcomes.push_back(std::move(entry));
    }
    json doc = {{"system_dim", povm.system_dim()},
                {"outcomes", std::move(outcomes)},
                {"completeness_residual", scenario::round12(summary.completeness)},
                {"complete", summary.completeness <= tol},
                {"context_graph", graph_json(summary.graph)}};
    if (!summary.gram_labels.empty())
        doc["gram"] = {{"labels", summary.gram_labels}, {"matrix", clean_json(summary.gram_matrix)}};
    return doc;
}

void print_constraints_text(const ConstraintReport &report, std::ostream &out) {
    out << "dilation constraints: orthogonality residual " << format_raw(report.max_orthogonality_residual)
        << ", normalisation residual " << format_raw(report.max_normalisation_residual)
        << ", overlap with initial condition " << format_raw(report.max_initial_overlap) << '\n';
}

json constraints_json(const ConstraintReport &report) {
    return {{"max_orthogonality_residual", scenario::round12(report.max_orthogonality_residual)},
            {"max_normalisation_residual", scenario::round12(report.max_normalisation_residual)},
            {"max_initial_overlap", scenario::round12(report.max_initial_overlap)}};
}

HardyTriple triple_for(const scenario::ScenarioFile &file, const Povm &povm, double tol) {
    if (!file.hardy)
        throw InputError("scenario has no 'hardy' section");
    return HardyTriple::from_povm(povm, file.hardy->f, file.hardy->d1, file.hardy->d2, file.hardy->basis1,
                                  file.hardy->basis2, tol);
}

// ---- commands ----------------------------------------------------------------

struct Options {
    double tol = kDefaultTol;
    bool json_output = false;
    bool strict = false;
    bool dot = false;
    bool merge_a = false;
    std::string preset;
    std::string basis = "VH";
    std::string phi_init = "D";
    std::string file;
    std::string output;
    std::string export_path;
    std::string state_label;
};

scenario::ScenarioFile three_path_file(const Options &opt) {
    using namespace interferometer;
    const auto s = build_three_path();
    const Polarisation phi = parse_polarisation(opt.phi_init);
    if (opt.basis != "VH" && opt.basis != "DA")
        throw InputError("unknown basis '" + opt.basis + "' (expected VH or DA)");
    if (opt.merge_a && opt.basis != "DA")
        throw InputError("--merge-a only applies to --basis DA");
    const Dilation dilation = opt.basis == "VH" ? dilation_vh(s, phi) : dilation_da(s, phi);

    scenario::ScenarioFile file;
    file.system_dim = 3;
    file.env_dim = 2;
    for (const auto &outcome : dilation.outcomes().outcomes())
        file.outcomes.push_back(outcome);
    file.phi_init = dilation.phi_init();
    if (opt.merge_a) {
        const std::vector<std::string> a_labels = {"A,1", "A,2", "A,3"};
        file.povm = coarse_grain(povm_from_dilation(dilation, opt.tol), a_labels, "A", opt.tol);
    }
    return file;
}

scenario::ScenarioFile hardy_file(const Options &opt) {
    const auto s = interferometer::build_three_path();
    const double r2 = 1.0 / std::sqrt(2.0);
    const Ket d1(s.f.space(), {0.0, r2, -r2});
    const Ket d2(s.f.space(), {r2, 0.0, -r2});
    auto completion = complete_hardy_povm(s.f, d1, d2, opt.tol);

    scenario::ScenarioFile file;
    file.system_dim = 3;
    file.povm = std::move(completion.povm);
    file.states.push_back({"hardy", hardy_state(d1, d2, opt.tol)});
    file.states.push_back({"path1", s.path1});
    file.states.push_back({"path2", s.path2});
    file.hardy = scenario::HardySection{"F", "D1", "D2", s.path1, s.path2};
    return file;
}

int cmd_scenario_run(const Options &opt, std::ostream &out, std::ostream &err) {
    scenario::ScenarioFile file;
    if (opt.preset == "three-path") {
        file = three_path_file(opt);
    } else if (opt.preset == "hardy") {
        file = hardy_file(opt);
    } else {
        err << "ctxlab: unknown preset '" << opt.preset << "' (available: three-path, hardy)\n";
        return kInputError;
    }
    if (!opt.export_path.empty())
        scenario::save(file, opt.export_path);

    const Povm povm = file.resolve_povm(opt.tol);
    const auto summary = summarise(povm, opt.tol);
    std::optional<ConstraintReport> constraints;
    if (file.has_dilation())
        constraints = verify_constraints(file.dilation(opt.tol));

    if (opt.json_output) {
        json doc = povm_json(povm, summary, opt.tol);
        doc["preset"] = opt.preset;
        if (constraints)
            doc["dilation_constraints"] = constraints_json(*constraints);
        out << doc.dump(2) << '\n';
        return kOk;
    }
    out << "preset: " << opt.preset;
    if (opt.preset == "three-path")
        out << " (basis " << opt.basis << ", phi_init " << opt.phi_init << (opt.merge_a ? ", A merged" : "") << ")";
    out << '\n';
    print_povm_text(povm, summary, opt.tol, out);
    if (constraints)
        print_constraints_text(*constraints, out);
    return kOk;
}

int cmd_povm_check(const Options &opt, std::ostream &out, std::ostream &err) {
    const auto file = scenario::load(opt.file, opt.tol);
    const Povm povm = file.resolve_povm(opt.tol);
    const auto summary = summarise(povm, opt.tol);
    std::optional<ConstraintReport> constraints;
    if (file.has_dilation())
        constraints = verify_constraints(file.dilation(opt.tol));

    if (opt.json_output) {
        json doc = povm_json(povm, summary, opt.tol);
        if (constraints)
            doc["dilation_constraints"] = constraints_json(*constraints);
        out << doc.dump(2) << '\n';
    } else {
        print_povm_text(povm, summary, opt.tol, out);
        if (constraints)
            print_constraints_text(*constraints, out);
    }
    if (opt.strict && summary.completeness > opt.tol) {
        err << "ctxlab: invariant violated: povm.complete (residual " << format_raw(summary.completeness) << ")\n";
        return kInvariantViolation;
    }
    return kOk;
}

int cmd_dilate(const Options &opt, std::ostream &out, std::ostream &) {
    const auto input = scenario::load(opt.file, opt.tol);
    const Povm povm = input.resolve_povm(opt.tol);
    const Dilation dilation = naimark_dilate(povm, opt.tol);

    scenario::ScenarioFile file;
    file.system_dim = povm.system_dim();
    file.env_dim = dilation.env_dim();
    for (const auto &outcome : dilation.outcomes().outcomes())
        file.outcomes.push_back(outcome);
    file.phi_init = dilation.phi_init();
    file.states = input.states;
    file.hardy = input.hardy;

    if (opt.output.empty() || opt.output == "-")
        out << scenario::to_json(file).dump(2) << '\n';
    else
        scenario::save(file, opt.output);
    return kOk;
}

int cmd_context_graph(const Options &opt, std::ostream &out, std::ostream &) {
    const auto file = scenario::load(opt.file, opt.tol);
    const auto graph = context_graph(file.resolve_povm(opt.tol), opt.tol);
    if (opt.dot)
        out << to_dot(graph);
    else if (opt.json_output)
        out << graph_json(graph).dump(2) << '\n';
    else
        print_graph_text(graph, out);
    return kOk;
}

int cmd_inequality(const Options &opt, std::ostream &out, std::ostream &) {
    const auto file = scenario::load(opt.file, opt.tol);
    const Povm povm = file.resolve_povm(opt.tol);
    const HardyTriple triple = triple_for(file, povm, opt.tol);

    std::vector<std::pair<std::string, DensityMatrix>> states;
    if (!opt.state_label.empty()) {
        states.emplace_back(opt.state_label, file.state(opt.state_label).density(opt.tol));
    } else if (!file.states.empty()) {
        for (const auto &entry : file.states)
            states.emplace_back(entry.label, entry.density(opt.tol));
    } else {
        states.emplace_back("hardy", DensityMatrix::pure(hardy_state(triple.d1_hat, triple.d2_hat, opt.tol), opt.tol));
    }

    json reports = json::array();
    for (const auto &[label, rho] : states) {
        const auto report = evaluate_inequality(povm, triple, rho, opt.tol);
        const auto &c = report.certification;
        if (opt.json_output) {
            reports.push_back({{"state", label},
                               {"lhs", clean(report.lhs)},
                               {"rhs", clean(report.rhs)},
                               {"violated", report.violated},
                               {"density_matrix", clean_json(report.state_used.entries())},
                               {"certification",
                                {{"c1", number_or_null(c.c1)},
                                 {"c2", number_or_null(c.c2)},
                                 {"r1", number_or_null(c.r1)},
                                 {"r2", number_or_null(c.r2)}}}});
            continue;
        }
        out << "state " << label << ": lhs " << format_value(report.lhs) << "  rhs " << format_value(report.rhs)
            << "  violated " << (report.violated ? "true" : "false") << '\n';
        out << "  certification: c1 " << format_value(c.c1) << "  c2 " << format_value(c.c2) << "  r1 "
            << format_value(c.r1) << "  r2 " << format_value(c.r2) << '\n';
    }
    if (opt.json_output)
        out << json{{"f", triple.f}, {"d1", triple.d1}, {"d2", triple.d2}, {"reports", std::move(reports)}}.dump(2)
            << '\n';
    return kOk;
}

int cmd_max_violation(const Options &opt, std::ostream &out, std::ostream &) {
    const auto file = scenario::load(opt.file, opt.tol);
    const Povm povm = file.resolve_povm(opt.tol);
    const auto violation = max_violation(triple_for(file, povm, opt.tol), opt.tol);
    if (opt.json_output) {
        out << json{{"value", clean(violation.value)}, {"state", clean_json(violation.state.amplitudes())}}.dump(2)
            << '\n';
    } else {
        out << "max violation: " << format_value(violation.value) << '\n';
        out << "state: " << format_vector(violation.state.amplitudes()) << '\n';
    }
    return kOk;
}

} // namespace

std::string to_dot(const ContextGraph &graph) {
    std::ostringstream out;
    out << "graph context {\n";
    for (const auto &node : graph.nodes)
        out << "  \"" << node << "\";\n";
    for (const auto &edge : graph.edges)
        out << "  \"" << edge.first << "\" -- \"" << edge.second << "\" [witness=\"" << format_value(edge.witness)
            << "\"];\n";
    for (const auto &label : graph.excluded)
        out << "  // excluded (zero weight): \"" << label << "\"\n";
    out << "}\n";
    return out.str();
}

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Measurement-context analysis for POVMs and their dilations", "ctxlab"};
    app.require_subcommand(1);
    app.fallthrough();

    Options opt;
    app.add_option("--tol", opt.tol, "Tolerance for all validation in this run")->check(CLI::PositiveNumber);

    auto *scenario_cmd = app.add_subcommand("scenario", "Built-in scenarios");
    scenario_cmd->require_subcommand(1);
    auto *run_cmd = scenario_cmd->add_subcommand("run", "Run a built-in scenario");
    run_cmd->add_option("preset", opt.preset, "Preset name (three-path, hardy)")->required();
    run_cmd->add_option("--basis", opt.basis, "Detected polarisations: VH or DA");
    run_cmd->add_flag("--merge-a", opt.merge_a, "Coarse-grain the three A outcomes");
    run_cmd->add_option("--phi-init", opt.phi_init, "Initial polarisation: D, A, H or V");
    run_cmd->add_option("--export", opt.export_path, "Write the scenario as a scenario file");
    run_cmd->add_flag("--json", opt.json_output, "Machine-readable output");

    auto *povm_cmd = app.add_subcommand("povm", "POVM utilities");
    povm_cmd->require_subcommand(1);
    auto *check_cmd = povm_cmd->add_subcommand("check", "Validate and summarise a POVM");
    check_cmd->add_option("file", opt.file, "Scenario file")->required();
    check_cmd->add_flag("--strict", opt.strict, "Exit 3 when the POVM is incomplete");
    check_cmd->add_flag("--json", opt.json_output, "Machine-readable output");

    auto *dilate_cmd = app.add_subcommand("dilate", "Naimark-dilate a rank-1 POVM");
    dilate_cmd->add_option("file", opt.file, "Scenario file")->required();
    dilate_cmd->add_option("-o,--output", opt.output, "Output scenario file (default stdout)");

    auto *graph_cmd = app.add_subcommand("context-graph", "Pairs of outcomes that share a context");
    graph_cmd->add_option("file", opt.file, "Scenario file")->required();
    graph_cmd->add_flag("--dot", opt.dot, "Graphviz output");
    graph_cmd->add_flag("--json", opt.json_output, "Machine-readable output");

    auto *inequality_cmd = app.add_subcommand("inequality", "Evaluate the rescaled-probability inequality");
    inequality_cmd->add_option("file", opt.file, "Scenario file with a hardy section")->required();
    inequality_cmd->add_option("--state", opt.state_label, "Evaluate only this state");
    inequality_cmd->add_flag("--json", opt.json_output, "Machine-readable output");

    auto *violation_cmd = app.add_subcommand("max-violation", "Largest achievable violation");
    violation_cmd->add_option("file", opt.file, "Scenario file with a hardy section")->required();
    violation_cmd->add_flag("--json", opt.json_output, "Machine-readable output");

    std::vector<std::string> reversed(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp &) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError &e) {
        err << "ctxlab: " << e.what() << '\n';
        return kInputError;
    }

    try {
        if (run_cmd->parsed())
            return cmd_scenario_run(opt, out, err);
        if (check_cmd->parsed())
            return cmd_povm_check(opt, out, err);
        if (dilate_cmd->parsed())
            return cmd_dilate(opt, out, err);
        if (graph_cmd->parsed())
            return cmd_context_graph(opt, out, err);
        if (inequality_cmd->parsed())
            return cmd_inequality(opt, out, err);
        if (violation_cmd->parsed())
            return cmd_max_violation(opt, out, err);
    } catch (const InvariantError &e) {
        err << "ctxlab: invariant violated: " << e.what() << '\n';
        return kInvariantViolation;
    } catch (const NumericError &e) {
        err << "ctxlab: numeric failure: " << e.what() << '\n';
        return kNumericFailure;
    } catch (const Error &e) {
        err << "ctxlab: " << e.what() << '\n';
        return kInputError;
    } catch (const std::exception &e) {
        err << "ctxlab: internal error: " << e.what() << '\n';
        return kNumericFailure;
    }
    err << "ctxlab: no command\n";
    return kInputError;
}

} // namespace ctxlab::cli
