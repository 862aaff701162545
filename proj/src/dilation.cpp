#include "ctxlab/dilation.hpp"

#include <algorithm>
#include <cmath>

#include "ctxlab/error.hpp"

namespace ctxlab {

JointOutcomeSet::JointOutcomeSet(Space space, std::vector<LabelledKet> outcomes, Unchecked)
    : space_(space), outcomes_(std::move(outcomes)) {
    if (space_.kind() != SpaceKind::Joint)
        throw DimensionError("outcome set must live in a joint space, got " + space_.describe());
    if (outcomes_.empty())
        throw InvariantError("outcomes.nonempty", "outcome set is empty");
    if (outcomes_.size() > space_.dim())
        throw InvariantError("outcomes.count", std::to_string(outcomes_.size()) + " outcomes exceed " +
                                                   space_.describe());
    for (const auto &outcome : outcomes_) {
        if (outcome.vector.space() != space_)
            throw DimensionError("outcome '" + outcome.label + "' lives in " + outcome.vector.space().describe() +
                                 ", expected " + space_.describe());
    }
}

JointOutcomeSet::JointOutcomeSet(Space space, std::vector<LabelledKet> outcomes, double tol)
    : JointOutcomeSet(space, std::move(outcomes), Unchecked{}) {
    const auto all = vectors();
    const Matrix g = gram(all);
    const double residual = max_abs_diff(g, Matrix::Identity(g.rows(), g.cols()));
    if (residual > tol)
        throw InvariantError("outcomes.orthonormal",
                             "joint outcomes are not orthonormal (residual " + std::to_string(residual) + ")");
}

JointOutcomeSet JointOutcomeSet::unvalidated(Space space, std::vector<LabelledKet> outcomes) {
    return {space, std::move(outcomes), Unchecked{}};
}

std::vector<Ket> JointOutcomeSet::vectors() const {
    std::vector<Ket> out;
    out.reserve(outcomes_.size());
    for (const auto &outcome : outcomes_)
        out.push_back(outcome.vector);
    return out;
}

Dilation::Dilation(JointOutcomeSet outcomes, Ket phi_init, double tol)
    : outcomes_(std::move(outcomes)), phi_init_(std::move(phi_init)) {
    if (phi_init_.space() != Space::environment(outcomes_.space().env_dim()))
        throw DimensionError("initial environment state lives in " + phi_init_.space().describe() +
                             ", outcomes in " + outcomes_.space().describe());
    if (!phi_init_.is_normalised(tol))
        throw InvariantError("phi_init.normalised",
                             "initial environment state has norm^2 " + std::to_string(phi_init_.norm2()));
}

Povm povm_from_dilation(const Dilation &dilation, double tol) {
    std::vector<PovmElement> elements;
    elements.reserve(dilation.outcomes().size());
    for (const auto &outcome : dilation.outcomes().outcomes())
        elements.emplace_back(outcome.label, partial_inner_env(dilation.phi_init(), outcome.vector));
    return Povm(dilation.sys_dim(), std::move(elements), tol);
}

ResidualSet residual_decompose(const Dilation &dilation) {
    ResidualSet out;
    out.items.reserve(dilation.outcomes().size());
    for (const auto &outcome : dilation.outcomes().outcomes()) {
        Ket lambda = partial_inner_env(dilation.phi_init(), outcome.vector);
        Ket sigma = outcome.vector - tensor(dilation.phi_init(), lambda);
        out.items.push_back({outcome.label, std::move(lambda), std::move(sigma)});
    }
    return out;
}

ConstraintReport verify_constraints(const Dilation &dilation) {
    const ResidualSet residuals = residual_decompose(dilation);
    const auto &items = residuals.items;
    ConstraintReport report;
    for (std::size_t i = 0; i < items.size(); ++i) {
        const double norm_residual = std::abs(items[i].sigma.norm2() + items[i].lambda.norm2() - 1.0);
        report.max_normalisation_residual = std::max(report.max_normalisation_residual, norm_residual);
        const double initial = partial_inner_env(dilation.phi_init(), items[i].sigma).amplitudes().cwiseAbs().maxCoeff();
        report.max_initial_overlap = std::max(report.max_initial_overlap, initial);
        for (std::size_t j = i + 1; j < items.size(); ++j) {
            const Complex total = items[i].sigma.inner(items[j].sigma) + items[i].lambda.inner(items[j].lambda);
            report.max_orthogonality_residual = std::max(report.max_orthogonality_residual, std::abs(total));
        }
    }
    return report;
}

Dilation naimark_dilate(const Povm &povm, double tol) {
    const double completeness = completeness_check(povm);
    if (completeness > tol)
        throw InvariantError("povm.complete",
                             "cannot dilate an incomplete POVM (residual " + std::to_string(completeness) + ")");

    const std::size_t ds = povm.system_dim();
    const std::size_t count = povm.size();
    std::vector<Ket> lambdas;
    lambdas.reserve(count);
    for (const auto &element : povm.elements()) {
        if (element.is_vector()) {
            lambdas.push_back(element.vector());
            continue;
        }
        const auto decomposition = eigh(std::get<Operator>(element.payload()), tol);
        const auto top = decomposition.values.size() - 1;
        if (top > 0 && decomposition.values[top - 1] > tol)
            throw InvariantError("naimark.rank_one", "element '" + element.label() + "' is not rank-1");
        lambdas.emplace_back(povm.space(),
                             std::sqrt(std::max(0.0, decomposition.values[top])) * decomposition.vectors.col(top));
    }

    // Gram of the sigma parts must be I - G_lambda, a projector of rank M - d_S:
    // sigma_m[d_S + k] = sqrt(mu_k) conj(u_k[m]).
    const auto m = static_cast<Eigen::Index>(count);
    const Matrix sigma_gram = Matrix::Identity(m, m) - gram(lambdas);
    const auto decomposition = eigh(sigma_gram, std::max(tol, 1e-12));
    std::vector<Eigen::Index> kept;
    for (Eigen::Index k = 0; k < m; ++k) {
        if (decomposition.values[k] > tol)
            kept.push_back(k);
    }
    if (kept.size() > (count - 1) * ds)
        throw NumericError("naimark: residual rank exceeds the environment capacity");

    const Space joint = Space::joint(count, ds);
    const Ket phi = Ket::basis(Space::environment(count), 0);
    std::vector<LabelledKet> outcomes;
    outcomes.reserve(count);
    std::vector<Vector> columns;
    for (auto k : kept)
        columns.push_back(canonical_phase(decomposition.vectors.col(k)));
    for (std::size_t i = 0; i < count; ++i) {
        Vector amplitudes = tensor(phi, lambdas[i]).amplitudes();
        for (std::size_t c = 0; c < kept.size(); ++c) {
            const double scale = std::sqrt(decomposition.values[kept[c]]);
            amplitudes[static_cast<Eigen::Index>(ds + c)] = scale * std::conj(columns[c][static_cast<Eigen::Index>(i)]);
        }
        outcomes.push_back({povm.elements()[i].label(), Ket(joint, std::move(amplitudes))});
    }
    return Dilation(JointOutcomeSet(joint, std::move(outcomes), tol), phi, tol);
}

Povm context_switch_povm(std::span<const SwitchContext> contexts, std::span<const Ket> basis, const Ket &phi_init,
                         double tol) {
    if (contexts.empty())
        throw InvariantError("switch.nonempty", "no contexts given");
    require_orthonormal_basis(basis, "switch.orthonormal_basis", tol);
    const Space system = basis.front().space();
    if (system.kind() != SpaceKind::System)
        throw DimensionError("context basis must live in a system space");
    if (phi_init.space().kind() != SpaceKind::Environment)
        throw DimensionError("initial state must live in an environment space");

    std::vector<Ket> env_states;
    for (const auto &context : contexts) {
        if (context.env_state.space() != phi_init.space())
            throw DimensionError("context '" + context.label + "' environment state lives in " +
                                 context.env_state.space().describe());
        if (context.unitary.space() != system)
            throw DimensionError("context '" + context.label + "' unitary acts on " +
                                 context.unitary.space().describe());
        if (!context.unitary.is_unitary(tol))
            throw InvariantError("switch.unitary", "context '" + context.label + "' operator is not unitary");
        env_states.push_back(context.env_state);
    }
    const Matrix g = gram(env_states);
    if (max_abs_diff(g, Matrix::Identity(g.rows(), g.cols())) > tol)
        throw InvariantError("switch.orthonormal_env", "context environment states are not orthonormal");

    std::vector<PovmElement> elements;
    for (const auto &context : contexts) {
        const Complex amplitude = phi_init.inner(context.env_state);
        const Operator dagger = context.unitary.adjoint();
        for (std::size_t a = 0; a < basis.size(); ++a)
            elements.emplace_back(context.label + "," + std::to_string(a + 1), amplitude * dagger.apply(basis[a]));
    }
    return Povm(system.dim(), std::move(elements), tol);
}

} // namespace ctxlab
