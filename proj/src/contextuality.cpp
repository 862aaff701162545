#include "ctxlab/contextuality.hpp"

#include <cmath>
#include <limits>

#include "ctxlab/error.hpp"

namespace ctxlab {

namespace {

Ket direction_of(const Povm &povm, const std::string &label, double tol) {
    const PovmElement &element = povm.at(label);
    if (element.is_vector()) {
        if (element.vector().norm2() <= tol)
            throw InvariantError("povm.nonzero_element", "outcome '" + label + "' has zero weight");
        return element.vector().normalised(tol);
    }
    const auto decomposition = eigh(std::get<Operator>(element.payload()), tol);
    const auto top = static_cast<std::size_t>(decomposition.values.size() - 1);
    if (decomposition.values[static_cast<Eigen::Index>(top)] <= tol)
        throw InvariantError("povm.nonzero_element", "outcome '" + label + "' has zero weight");
    if (top > 0 && decomposition.values[static_cast<Eigen::Index>(top - 1)] > tol)
        throw InvariantError("hardy.rank_one", "outcome '" + label + "' is not rank-1");
    return eigenvector(decomposition, top, povm.space()).canonical_phase();
}

std::optional<Ket> part_orthogonal_to(const Ket &f, const Ket &d, double tol) {
    const Ket rest = f - d.inner(f) * d;
    if (rest.norm() <= tol)
        return std::nullopt;
    return rest.normalised(tol).canonical_phase();
}

void require_orthogonal(const Ket &a, const Ket &b, const char *invariant, double tol) {
    const double overlap = std::abs(a.inner(b));
    if (overlap > tol)
        throw InvariantError(invariant, "overlap " + std::to_string(overlap) + " exceeds tolerance");
}

Matrix projector(const Ket &unit) { return unit.amplitudes() * unit.amplitudes().adjoint(); }

} // namespace

HardyDecomposition hardy_decomposition_check(const Ket &f, const Ket &b, const Ket &d) {
    // Least squares over span{b, d}; b and d need not be orthogonal.
    Matrix columns(f.dim(), 2);
    columns << b.amplitudes(), d.amplitudes();
    const Vector coefficients = columns.completeOrthogonalDecomposition().solve(f.amplitudes());
    HardyDecomposition out;
    out.alpha = coefficients[0];
    out.beta = coefficients[1];
    out.residual = (f - out.alpha * b - out.beta * d).norm();
    out.basis_overlap = std::abs(b.inner(d));
    return out;
}

Ket hardy_state(const Ket &d1, const Ket &d2, double tol) {
    if (d1.space().kind() != SpaceKind::System || d1.dim() != 3 || d2.space() != d1.space())
        throw DimensionError("hardy_state is defined for pairs of System(3) kets only");
    const Eigen::Vector3cd a = d1.normalised(tol).amplitudes();
    const Eigen::Vector3cd b = d2.normalised(tol).amplitudes();
    // Eigen's complex cross product is conj(a x b): orthogonal to a and b under <.|.>.
    const Eigen::Vector3cd null = a.cross(b);
    if (null.norm() <= tol)
        throw InvariantError("hardy.independent", "d1 and d2 are linearly dependent");
    return Ket(d1.space(), Vector(null)).normalised(tol).canonical_phase();
}

HardyTriple HardyTriple::from_povm(const Povm &povm, std::string f, std::string d1, std::string d2,
                                   std::optional<Ket> basis1, std::optional<Ket> basis2, double tol) {
    Ket f_hat = direction_of(povm, f, tol);
    Ket d1_hat = direction_of(povm, d1, tol);
    Ket d2_hat = direction_of(povm, d2, tol);
    const bool declared = basis1 && basis2;
    if (basis1)
        basis1 = basis1->normalised(tol);
    else
        basis1 = part_orthogonal_to(f_hat, d1_hat, tol);
    if (basis2)
        basis2 = basis2->normalised(tol);
    else
        basis2 = part_orthogonal_to(f_hat, d2_hat, tol);

    if (basis1)
        require_orthogonal(d1_hat, *basis1, "hardy.d1_orthogonal_b1", tol);
    if (basis2)
        require_orthogonal(d2_hat, *basis2, "hardy.d2_orthogonal_b2", tol);
    if (declared)
        require_orthogonal(*basis1, *basis2, "hardy.orthogonal_pair", tol);

    return {std::move(f),      std::move(d1),      std::move(d2),      std::move(f_hat),
            std::move(d1_hat), std::move(d2_hat), std::move(basis1), std::move(basis2)};
}

HardyTriple HardyTriple::from_kets(const Ket &f, const Ket &d1, const Ket &d2, double tol) {
    return {"F",
            "D1",
            "D2",
            f.normalised(tol).canonical_phase(),
            d1.normalised(tol).canonical_phase(),
            d2.normalised(tol).canonical_phase(),
            std::nullopt,
            std::nullopt};
}

InequalityReport evaluate_inequality(const Povm &povm, const HardyTriple &triple, const DensityMatrix &state,
                                     double tol) {
    const double lhs = rescaled_probability(povm, state, triple.f, tol);
    const double rhs =
        rescaled_probability(povm, state, triple.d1, tol) + rescaled_probability(povm, state, triple.d2, tol);

    Certification certification;
    certification.c1 = rescaled_probability(povm, maximizing_state(povm, triple.d1, tol), triple.f, tol);
    certification.c2 = rescaled_probability(povm, maximizing_state(povm, triple.d2, tol), triple.f, tol);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    certification.r1 = triple.basis1 ? rescaled_probability(povm, *triple.basis1, triple.f, tol) : nan;
    certification.r2 = triple.basis2 ? rescaled_probability(povm, *triple.basis2, triple.f, tol) : nan;

    return InequalityReport{lhs, rhs, lhs > rhs + tol, state, certification};
}

InequalityReport evaluate_inequality(const Povm &povm, const HardyTriple &triple, const Ket &state, double tol) {
    return evaluate_inequality(povm, triple, DensityMatrix::pure(state, tol), tol);
}

Violation max_violation(const HardyTriple &triple, double tol) {
    const Matrix m = projector(triple.f_hat) - projector(triple.d1_hat) - projector(triple.d2_hat);
    const auto decomposition = eigh(m, tol);
    const auto top = static_cast<std::size_t>(decomposition.values.size() - 1);
    return {decomposition.values[static_cast<Eigen::Index>(top)],
            eigenvector(decomposition, top, triple.f_hat.space()).canonical_phase()};
}

HardyCompletion complete_hardy_povm(const Ket &f, const Ket &d1, const Ket &d2, double tol) {
    const Ket fu = f.normalised(tol);
    const Ket d1u = d1.normalised(tol);
    const Ket d2u = d2.normalised(tol);
    const Matrix sum = projector(fu) + projector(d1u) + projector(d2u);
    const auto n = sum.rows();
    const double largest = eigh(sum, tol).values[n - 1];
    const double scale = 1.0 / largest;

    const Space space = fu.space();
    const Complex amplitude = std::sqrt(scale);
    std::vector<PovmElement> elements{{"F", amplitude * fu}, {"D1", amplitude * d1u}, {"D2", amplitude * d2u}};
    const auto rest = eigh(Matrix(Matrix::Identity(n, n) - scale * sum), tol);
    int k = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (rest.values[i] <= tol)
            continue;
        elements.emplace_back("rest," + std::to_string(++k),
                              Ket(space, std::sqrt(rest.values[i]) * rest.vectors.col(i)));
    }
    return {Povm(space.dim(), std::move(elements), tol), scale};
}

} // namespace ctxlab
