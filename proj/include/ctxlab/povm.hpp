#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ctxlab/hilbert.hpp"

namespace ctxlab {

/// One POVM outcome. Rank-1 elements are held as a (non-normalised) vector
/// |lambda>, giving the effect |lambda><lambda|; anything else as an operator.
class PovmElement {
  public:
    using Payload = std::variant<Ket, Operator>;

    PovmElement(std::string label, Ket vector);
    PovmElement(std::string label, Operator op);

    const std::string &label() const noexcept { return label_; }
    const Payload &payload() const noexcept { return payload_; }
    bool is_vector() const noexcept { return std::holds_alternative<Ket>(payload_); }
    /// Only valid when is_vector().
    const Ket &vector() const { return std::get<Ket>(payload_); }
    /// The effect as an operator, whatever the storage.
    Operator effect() const;

  private:
    std::string label_;
    Payload payload_;
};

/// Labelled outcomes over a system space. Construction checks per-element
/// bounds and label uniqueness and canonicalises vector phases; completeness
/// is reported by completeness_check rather than enforced.
class Povm {
  public:
    Povm(std::size_t system_dim, std::vector<PovmElement> elements, double tol = kDefaultTol);

    std::size_t system_dim() const noexcept { return system_dim_; }
    Space space() const { return Space::system(system_dim_); }
    const std::vector<PovmElement> &elements() const noexcept { return elements_; }
    std::size_t size() const noexcept { return elements_.size(); }

    bool contains(std::string_view label) const;
    std::size_t index_of(std::string_view label) const;
    const PovmElement &at(std::string_view label) const;
    std::vector<std::string> labels() const;

  private:
    std::size_t system_dim_;
    std::vector<PovmElement> elements_;
};

/// Positive semidefinite, unit-trace operator on a system space.
class DensityMatrix {
  public:
    explicit DensityMatrix(Operator op, double tol = kDefaultTol);
    static DensityMatrix pure(const Ket &state, double tol = kDefaultTol);

    const Operator &op() const noexcept { return op_; }
    const Matrix &entries() const noexcept { return op_.entries(); }
    std::size_t dim() const noexcept { return op_.dim(); }

  private:
    Operator op_;
};

/// max entrywise |sum of effects - I|.
double completeness_check(const Povm &povm);

double probability(const Povm &povm, const DensityMatrix &state, std::string_view label);
double probability(const Povm &povm, const Ket &state, std::string_view label);

/// <lambda|lambda> for vector elements; the largest eigenvalue for operator
/// elements (the supremum of the outcome probability in both cases).
double context_selection_probability(const Povm &povm, std::string_view label);

/// The state that attains context_selection_probability for `label`.
DensityMatrix maximizing_state(const Povm &povm, std::string_view label, double tol = kDefaultTol);

double rescaled_probability(const Povm &povm, const DensityMatrix &state, std::string_view label,
                            double tol = kDefaultTol);
double rescaled_probability(const Povm &povm, const Ket &state, std::string_view label, double tol = kDefaultTol);

struct ContextRelation {
    enum class Method { InnerProduct, Commutator };

    bool shared = false;
    /// |<l1^|l2^>| for InnerProduct, Frobenius norm of [P1, P2] for Commutator.
    double witness = 0.0;
    Method method = Method::InnerProduct;
    /// Rank-1 pair whose directions coincide (including an outcome with itself).
    bool proportional = false;
};

ContextRelation share_context(const Povm &povm, std::string_view first, std::string_view second,
                              double tol = kDefaultTol);

struct ContextEdge {
    std::string first;
    std::string second;
    double witness = 0.0;
};

struct ContextGraph {
    std::vector<std::string> nodes;
    std::vector<ContextEdge> edges;
    /// Zero-weight outcomes left out of the graph.
    std::vector<std::string> excluded;

    bool has_edge(std::string_view a, std::string_view b) const;
};

ContextGraph context_graph(const Povm &povm, double tol = kDefaultTol);

/// Replaces `labels` by one element holding the sum of their effects, placed
/// where the first merged outcome was. A rank-1 sum is stored as a vector.
Povm coarse_grain(const Povm &povm, std::span<const std::string> labels, std::string new_label,
                  double tol = kDefaultTol);

struct LabelledBasis {
    std::string label;
    std::vector<Ket> vectors;
};

/// Random choice of measurement basis x with probability weights[x];
/// outcome "x,a" (a 1-based) carries sqrt(weights[x]) |a_x>.
Povm selby_mixture(std::span<const LabelledBasis> bases, std::span<const double> weights,
                   double tol = kDefaultTol);

/// Checks that `vectors` is an orthonormal basis of a system space.
void require_orthonormal_basis(std::span<const Ket> vectors, const char *invariant, double tol = kDefaultTol);

} // namespace ctxlab
