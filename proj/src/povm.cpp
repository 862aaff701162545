#include "ctxlab/povm.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "ctxlab/error.hpp"

namespace ctxlab {

namespace {

void require_system_ket(const Ket &ket, std::size_t dim, const std::string &what) {
    if (ket.space() != Space::system(dim))
        throw DimensionError(what + " lives in " + ket.space().describe() + ", expected System(" +
                             std::to_string(dim) + ")");
}

/// Projector onto the span of eigenvectors with eigenvalue > tol.
Matrix support_projector(const Operator &effect, double tol) {
    const auto decomposition = eigh(effect, tol);
    const auto n = effect.entries().rows();
    Matrix projector = Matrix::Zero(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        if (decomposition.values[k] > tol)
            projector += decomposition.vectors.col(k) * decomposition.vectors.col(k).adjoint();
    }
    return projector;
}

Ket require_pure_state(const Ket &state, std::size_t dim, double tol) {
    require_system_ket(state, dim, "state");
    if (!state.is_normalised(tol))
        throw InvariantError("state.normalised", "pure state has norm^2 " + std::to_string(state.norm2()));
    return state;
}

} // namespace

PovmElement::PovmElement(std::string label, Ket vector) : label_(std::move(label)), payload_(std::move(vector)) {}

PovmElement::PovmElement(std::string label, Operator op) : label_(std::move(label)), payload_(std::move(op)) {}

Operator PovmElement::effect() const {
    if (const auto *ket = std::get_if<Ket>(&payload_))
        return Operator::outer(*ket);
    return std::get<Operator>(payload_);
}

Povm::Povm(std::size_t system_dim, std::vector<PovmElement> elements, double tol) : system_dim_(system_dim) {
    if (system_dim_ == 0)
        throw DimensionError("POVM system dimension must be at least 1");
    if (elements.empty())
        throw InvariantError("povm.nonempty", "POVM has no elements");
    std::unordered_set<std::string> seen;
    elements_.reserve(elements.size());
    for (auto &element : elements) {
        if (!seen.insert(element.label()).second)
            throw InvariantError("povm.unique_labels", "duplicate outcome label '" + element.label() + "'");
        if (element.is_vector()) {
            const Ket &v = element.vector();
            require_system_ket(v, system_dim_, "element '" + element.label() + "'");
            if (v.norm2() > 1.0 + tol)
                throw InvariantError("povm.element_bounds", "element '" + element.label() + "' has weight " +
                                                                std::to_string(v.norm2()) + " > 1");
            elements_.emplace_back(element.label(), v.canonical_phase());
        } else {
            const Operator &op = std::get<Operator>(element.payload());
            if (op.space() != Space::system(system_dim_))
                throw DimensionError("element '" + element.label() + "' lives in " + op.space().describe());
            if (!op.is_hermitian(tol))
                throw InvariantError("povm.element_hermitian", "element '" + element.label() + "' is not Hermitian");
            const auto values = eigh(op, tol).values;
            if (values[0] < -tol || values[values.size() - 1] > 1.0 + tol)
                throw InvariantError("povm.element_bounds",
                                     "element '" + element.label() + "' has eigenvalues outside [0, 1]");
            elements_.push_back(std::move(element));
        }
    }
}

bool Povm::contains(std::string_view label) const {
    return std::any_of(elements_.begin(), elements_.end(), [&](const auto &e) { return e.label() == label; });
}

std::size_t Povm::index_of(std::string_view label) const {
    for (std::size_t i = 0; i < elements_.size(); ++i) {
        if (elements_[i].label() == label)
            return i;
    }
    throw LabelError("unknown outcome label '" + std::string(label) + "'");
}

const PovmElement &Povm::at(std::string_view label) const { return elements_[index_of(label)]; }

std::vector<std::string> Povm::labels() const {
    std::vector<std::string> out;
    out.reserve(elements_.size());
    for (const auto &e : elements_)
        out.push_back(e.label());
    return out;
}

DensityMatrix::DensityMatrix(Operator op, double tol) : op_(std::move(op)) {
    if (op_.space().kind() != SpaceKind::System)
        throw DimensionError("density matrix must act on a system space, got " + op_.space().describe());
    if (!op_.is_hermitian(tol))
        throw InvariantError("state.hermitian", "density matrix is not Hermitian");
    const double trace = op_.trace().real();
    if (std::abs(trace - 1.0) > tol)
        throw InvariantError("state.unit_trace", "density matrix has trace " + std::to_string(trace));
    const double smallest = eigh(op_, tol).values[0];
    if (smallest < -tol)
        throw InvariantError("state.positive", "density matrix has eigenvalue " + std::to_string(smallest));
}

DensityMatrix DensityMatrix::pure(const Ket &state, double tol) {
    if (!state.is_normalised(tol))
        throw InvariantError("state.normalised", "pure state has norm^2 " + std::to_string(state.norm2()));
    return DensityMatrix(Operator::outer(state), tol);
}

double completeness_check(const Povm &povm) {
    const auto n = static_cast<Eigen::Index>(povm.system_dim());
    Matrix total = Matrix::Zero(n, n);
    for (const auto &element : povm.elements())
        total += element.effect().entries();
    return max_abs_diff(total, Matrix::Identity(n, n));
}

double probability(const Povm &povm, const DensityMatrix &state, std::string_view label) {
    if (state.dim() != povm.system_dim())
        throw DimensionError("state dimension does not match POVM");
    const PovmElement &element = povm.at(label);
    if (element.is_vector()) {
        const Vector &v = element.vector().amplitudes();
        return v.dot(state.entries() * v).real();
    }
    return (std::get<Operator>(element.payload()).entries() * state.entries()).trace().real();
}

double probability(const Povm &povm, const Ket &state, std::string_view label) {
    const Ket psi = require_pure_state(state, povm.system_dim(), kDefaultTol);
    const PovmElement &element = povm.at(label);
    if (element.is_vector())
        return std::norm(element.vector().inner(psi));
    const Vector &a = psi.amplitudes();
    return a.dot(std::get<Operator>(element.payload()).entries() * a).real();
}

double context_selection_probability(const Povm &povm, std::string_view label) {
    const PovmElement &element = povm.at(label);
    if (element.is_vector())
        return element.vector().norm2();
    const auto values = eigh(std::get<Operator>(element.payload())).values;
    return values[values.size() - 1];
}

DensityMatrix maximizing_state(const Povm &povm, std::string_view label, double tol) {
    const PovmElement &element = povm.at(label);
    if (element.is_vector()) {
        const Ket &v = element.vector();
        if (v.norm2() <= tol)
            throw InvariantError("povm.nonzero_element", "outcome '" + element.label() + "' has zero weight");
        return DensityMatrix::pure(v.normalised(tol), tol);
    }
    const auto decomposition = eigh(std::get<Operator>(element.payload()), tol);
    const auto top = static_cast<std::size_t>(decomposition.values.size() - 1);
    if (decomposition.values[static_cast<Eigen::Index>(top)] <= tol)
        throw InvariantError("povm.nonzero_element", "outcome '" + element.label() + "' has zero weight");
    return DensityMatrix::pure(eigenvector(decomposition, top, povm.space()), tol);
}

namespace {

double selection_or_throw(const Povm &povm, std::string_view label, double tol) {
    const double weight = context_selection_probability(povm, label);
    if (weight <= tol)
        throw InvariantError("povm.nonzero_element", "outcome '" + std::string(label) + "' has zero weight");
    return weight;
}

} // namespace

double rescaled_probability(const Povm &povm, const DensityMatrix &state, std::string_view label, double tol) {
    const double weight = selection_or_throw(povm, label, tol);
    return probability(povm, state, label) / weight;
}

double rescaled_probability(const Povm &povm, const Ket &state, std::string_view label, double tol) {
    const double weight = selection_or_throw(povm, label, tol);
    return probability(povm, state, label) / weight;
}

ContextRelation share_context(const Povm &povm, std::string_view first, std::string_view second, double tol) {
    const PovmElement &a = povm.at(first);
    const PovmElement &b = povm.at(second);
    selection_or_throw(povm, first, tol);
    selection_or_throw(povm, second, tol);

    ContextRelation relation;
    if (a.is_vector() && b.is_vector()) {
        const Ket &u = a.vector();
        const Ket &v = b.vector();
        relation.method = ContextRelation::Method::InnerProduct;
        relation.witness = std::min(1.0, std::abs(u.inner(v)) / (u.norm() * v.norm()));
        relation.proportional = relation.witness >= 1.0 - tol;
        relation.shared = relation.witness <= tol || relation.proportional;
        return relation;
    }
    const Matrix p = support_projector(a.effect(), tol);
    const Matrix q = support_projector(b.effect(), tol);
    relation.method = ContextRelation::Method::Commutator;
    relation.witness = (p * q - q * p).norm();
    relation.proportional = (p - q).norm() <= tol;
    relation.shared = relation.witness <= tol;
    return relation;
}

bool ContextGraph::has_edge(std::string_view a, std::string_view b) const {
    return std::any_of(edges.begin(), edges.end(), [&](const ContextEdge &e) {
        return (e.first == a && e.second == b) || (e.first == b && e.second == a);
    });
}

ContextGraph context_graph(const Povm &povm, double tol) {
    ContextGraph graph;
    for (const auto &element : povm.elements()) {
        if (context_selection_probability(povm, element.label()) <= tol)
            graph.excluded.push_back(element.label());
        else
            graph.nodes.push_back(element.label());
    }
    for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
        for (std::size_t j = i + 1; j < graph.nodes.size(); ++j) {
            const auto relation = share_context(povm, graph.nodes[i], graph.nodes[j], tol);
            if (relation.shared)
                graph.edges.push_back({graph.nodes[i], graph.nodes[j], relation.witness});
        }
    }
    return graph;
}

Povm coarse_grain(const Povm &povm, std::span<const std::string> labels, std::string new_label, double tol) {
    if (labels.empty())
        throw InvariantError("coarse_grain.nonempty", "nothing to merge");
    std::vector<bool> merged(povm.size(), false);
    for (const auto &label : labels)
        merged[povm.index_of(label)] = true;

    const auto n = static_cast<Eigen::Index>(povm.system_dim());
    Matrix total = Matrix::Zero(n, n);
    std::size_t insert_at = povm.size();
    for (std::size_t i = 0; i < povm.size(); ++i) {
        if (!merged[i])
            continue;
        insert_at = std::min(insert_at, i);
        total += povm.elements()[i].effect().entries();
    }

    const Space space = povm.space();
    const auto decomposition = eigh(total, tol);
    const auto top = n - 1;
    const bool rank_one = n == 1 || decomposition.values[top - 1] <= tol;
    std::optional<PovmElement> combined;
    if (rank_one) {
        const double weight = std::max(0.0, decomposition.values[top]);
        combined.emplace(new_label, Ket(space, std::sqrt(weight) * decomposition.vectors.col(top)));
    } else {
        combined.emplace(new_label, Operator(space, 0.5 * (total + total.adjoint())));
    }

    std::vector<PovmElement> out;
    out.reserve(povm.size());
    for (std::size_t i = 0; i < povm.size(); ++i) {
        if (i == insert_at)
            out.push_back(*combined);
        if (!merged[i])
            out.push_back(povm.elements()[i]);
    }
    return Povm(povm.system_dim(), std::move(out), tol);
}

void require_orthonormal_basis(std::span<const Ket> vectors, const char *invariant, double tol) {
    if (vectors.empty())
        throw InvariantError(invariant, "empty basis");
    const Space &space = vectors.front().space();
    if (vectors.size() != space.dim())
        throw InvariantError(invariant, "basis has " + std::to_string(vectors.size()) + " vectors for " +
                                            space.describe());
    const Matrix g = gram(vectors);
    const double residual = max_abs_diff(g, Matrix::Identity(g.rows(), g.cols()));
    if (residual > tol)
        throw InvariantError(invariant, "basis is not orthonormal (residual " + std::to_string(residual) + ")");
}

Povm selby_mixture(std::span<const LabelledBasis> bases, std::span<const double> weights, double tol) {
    if (bases.empty())
        throw InvariantError("selby.nonempty", "no measurement bases given");
    if (weights.size() != bases.size())
        throw InvariantError("selby.weights", "expected one weight per basis");
    double total = 0.0;
    for (double w : weights) {
        if (!std::isfinite(w) || w < -tol)
            throw InvariantError("selby.weights", "weights must be non-negative");
        total += w;
    }
    if (std::abs(total - 1.0) > tol)
        throw InvariantError("selby.weights", "weights sum to " + std::to_string(total));

    const std::size_t dim = bases.front().vectors.empty() ? 0 : bases.front().vectors.front().dim();
    std::vector<PovmElement> elements;
    for (std::size_t x = 0; x < bases.size(); ++x) {
        const auto &basis = bases[x];
        require_orthonormal_basis(basis.vectors, "selby.orthonormal_basis", tol);
        for (std::size_t a = 0; a < basis.vectors.size(); ++a) {
            require_system_ket(basis.vectors[a], dim, "basis '" + basis.label + "'");
            elements.emplace_back(basis.label + "," + std::to_string(a + 1),
                                  std::sqrt(std::max(0.0, weights[x])) * basis.vectors[a]);
        }
    }
    return Povm(dim, std::move(elements), tol);
}

} // namespace ctxlab
