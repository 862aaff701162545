#include "ctxlab/hilbert.hpp"

#include <algorithm>
#include <cmath>

#include "ctxlab/error.hpp"

namespace ctxlab {

std::string to_string(SpaceKind kind) {
    switch (kind) {
    case SpaceKind::System:
        return "System";
    case SpaceKind::Environment:
        return "Environment";
    case SpaceKind::Joint:
        return "Joint";
    }
    return "?";
}

Space::Space(SpaceKind kind, std::size_t dim, std::size_t env_dim, std::size_t sys_dim)
    : kind_(kind), dim_(dim), env_dim_(env_dim), sys_dim_(sys_dim) {
    if (dim_ == 0)
        throw DimensionError("space dimension must be at least 1");
}

Space Space::system(std::size_t dim) { return {SpaceKind::System, dim, 0, 0}; }

Space Space::environment(std::size_t dim) { return {SpaceKind::Environment, dim, 0, 0}; }

Space Space::joint(std::size_t env_dim, std::size_t sys_dim) {
    if (env_dim == 0 || sys_dim == 0)
        throw DimensionError("joint space factors must be at least 1");
    return {SpaceKind::Joint, env_dim * sys_dim, env_dim, sys_dim};
}

std::string Space::describe() const {
    if (kind_ == SpaceKind::Joint)
        return "Joint(" + std::to_string(env_dim_) + "," + std::to_string(sys_dim_) + ")";
    return to_string(kind_) + "(" + std::to_string(dim_) + ")";
}

namespace {

void require_same_space(const Space &a, const Space &b, const char *what) {
    if (!(a == b))
        throw DimensionError(std::string(what) + ": " + a.describe() + " vs " + b.describe());
}

} // namespace

Ket::Ket(Space space, Vector amplitudes) : space_(space), amplitudes_(std::move(amplitudes)) {
    if (static_cast<std::size_t>(amplitudes_.size()) != space_.dim())
        throw DimensionError("ket length " + std::to_string(amplitudes_.size()) + " does not match " +
                             space_.describe());
    if (!amplitudes_.allFinite())
        throw InvariantError("ket.finite", "ket has non-finite amplitudes");
}

Ket::Ket(Space space, std::initializer_list<Complex> amplitudes)
    : Ket(space, Eigen::Map<const Vector>(amplitudes.begin(), static_cast<Eigen::Index>(amplitudes.size()))) {}

Ket Ket::basis(Space space, std::size_t index) {
    if (index >= space.dim())
        throw DimensionError("basis index out of range for " + space.describe());
    Vector v = Vector::Zero(static_cast<Eigen::Index>(space.dim()));
    v[static_cast<Eigen::Index>(index)] = 1.0;
    return {space, std::move(v)};
}

Ket Ket::zero(Space space) { return {space, Vector::Zero(static_cast<Eigen::Index>(space.dim()))}; }

bool Ket::is_normalised(double tol) const { return std::abs(norm2() - 1.0) <= tol; }

Ket Ket::normalised(double tol) const {
    const double n = norm();
    if (n <= tol)
        throw NumericError("cannot normalise a zero ket");
    return {space_, amplitudes_ / n};
}

Ket Ket::canonical_phase() const { return {space_, ctxlab::canonical_phase(amplitudes_)}; }

Complex Ket::inner(const Ket &other) const {
    require_same_space(space_, other.space_, "inner product");
    return amplitudes_.dot(other.amplitudes_);
}

Ket Ket::operator+(const Ket &other) const {
    require_same_space(space_, other.space_, "ket sum");
    return {space_, amplitudes_ + other.amplitudes_};
}

Ket Ket::operator-(const Ket &other) const {
    require_same_space(space_, other.space_, "ket difference");
    return {space_, amplitudes_ - other.amplitudes_};
}

Ket Ket::operator-() const { return {space_, -amplitudes_}; }

Ket operator*(Complex scale, const Ket &ket) { return {ket.space_, scale * ket.amplitudes_}; }

Operator::Operator(Space space, Matrix entries) : space_(space), entries_(std::move(entries)) {
    const auto n = static_cast<Eigen::Index>(space_.dim());
    if (entries_.rows() != n || entries_.cols() != n)
        throw DimensionError("operator shape " + std::to_string(entries_.rows()) + "x" +
                             std::to_string(entries_.cols()) + " does not match " + space_.describe());
    if (!entries_.allFinite())
        throw InvariantError("operator.finite", "operator has non-finite entries");
}

Operator Operator::identity(Space space) {
    const auto n = static_cast<Eigen::Index>(space.dim());
    return {space, Matrix::Identity(n, n)};
}

Operator Operator::outer(const Ket &ket) { return outer(ket, ket); }

Operator Operator::outer(const Ket &a, const Ket &b) {
    require_same_space(a.space(), b.space(), "outer product");
    return {a.space(), a.amplitudes() * b.amplitudes().adjoint()};
}

Operator Operator::adjoint() const { return {space_, entries_.adjoint()}; }

Ket Operator::apply(const Ket &ket) const {
    require_same_space(space_, ket.space(), "operator application");
    return {space_, entries_ * ket.amplitudes()};
}

double Operator::hermiticity_residual() const { return max_abs_diff(entries_, entries_.adjoint()); }

bool Operator::is_hermitian(double tol) const { return hermiticity_residual() <= tol; }

double Operator::unitarity_residual() const {
    const auto n = entries_.rows();
    return max_abs_diff(entries_.adjoint() * entries_, Matrix::Identity(n, n));
}

bool Operator::is_unitary(double tol) const { return unitarity_residual() <= tol; }

Operator Operator::operator+(const Operator &other) const {
    require_same_space(space_, other.space_, "operator sum");
    return {space_, entries_ + other.entries_};
}

Operator Operator::operator-(const Operator &other) const {
    require_same_space(space_, other.space_, "operator difference");
    return {space_, entries_ - other.entries_};
}

Operator Operator::operator*(const Operator &other) const {
    require_same_space(space_, other.space_, "operator product");
    return {space_, entries_ * other.entries_};
}

Operator operator*(Complex scale, const Operator &op) { return {op.space_, scale * op.entries_}; }

Ket tensor(const Ket &env, const Ket &sys) {
    if (env.space().kind() != SpaceKind::Environment)
        throw DimensionError("tensor: first factor must be an environment ket, got " + env.space().describe());
    if (sys.space().kind() != SpaceKind::System)
        throw DimensionError("tensor: second factor must be a system ket, got " + sys.space().describe());
    const auto de = static_cast<Eigen::Index>(env.dim());
    const auto ds = static_cast<Eigen::Index>(sys.dim());
    Vector out(de * ds);
    for (Eigen::Index e = 0; e < de; ++e)
        out.segment(e * ds, ds) = env.amplitudes()[e] * sys.amplitudes();
    return {Space::joint(env.dim(), sys.dim()), std::move(out)};
}

Ket partial_inner_env(const Ket &phi, const Ket &joint) {
    if (phi.space().kind() != SpaceKind::Environment)
        throw DimensionError("partial_inner_env: expected an environment ket, got " + phi.space().describe());
    if (joint.space().kind() != SpaceKind::Joint || joint.space().env_dim() != phi.dim())
        throw DimensionError("partial_inner_env: " + joint.space().describe() + " is not compatible with " +
                             phi.space().describe());
    const auto de = static_cast<Eigen::Index>(phi.dim());
    const auto ds = static_cast<Eigen::Index>(joint.space().sys_dim());
    Vector out = Vector::Zero(ds);
    for (Eigen::Index e = 0; e < de; ++e)
        out += std::conj(phi.amplitudes()[e]) * joint.amplitudes().segment(e * ds, ds);
    return {Space::system(static_cast<std::size_t>(ds)), std::move(out)};
}

Matrix gram(std::span<const Ket> vectors) {
    if (vectors.empty())
        throw InvariantError("gram.nonempty", "gram matrix of an empty list");
    const Space &space = vectors.front().space();
    Matrix columns(static_cast<Eigen::Index>(space.dim()), static_cast<Eigen::Index>(vectors.size()));
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        require_same_space(space, vectors[i].space(), "gram");
        columns.col(static_cast<Eigen::Index>(i)) = vectors[i].amplitudes();
    }
    return columns.adjoint() * columns;
}

EigenDecomposition eigh(const Matrix &matrix, double tol) {
    if (matrix.rows() != matrix.cols())
        throw DimensionError("eigh: matrix is not square");
    const double residual = max_abs_diff(matrix, matrix.adjoint());
    if (residual > tol)
        throw InvariantError("operator.hermitian",
                             "eigh input is not Hermitian (residual " + std::to_string(residual) + ")");
    // Symmetrise so round-off in the lower triangle cannot leak in.
    const Matrix symmetric = 0.5 * (matrix + matrix.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetric);
    if (solver.info() != Eigen::Success)
        throw NumericError("eigh: eigensolver did not converge");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

EigenDecomposition eigh(const Operator &op, double tol) { return eigh(op.entries(), tol); }

Ket eigenvector(const EigenDecomposition &decomposition, std::size_t index, const Space &space) {
    return {space, decomposition.vectors.col(static_cast<Eigen::Index>(index))};
}

Vector canonical_phase(const Vector &v) {
    if (v.size() == 0)
        return v;
    const double largest = v.cwiseAbs().maxCoeff();
    if (largest == 0.0)
        return v;
    const double cutoff = largest - 1e-9 * std::max(1.0, largest);
    Eigen::Index pivot = 0;
    while (std::abs(v[pivot]) < cutoff)
        ++pivot;
    const Complex phase = std::conj(v[pivot]) / std::abs(v[pivot]);
    Vector out = phase * v;
    out[pivot] = std::abs(v[pivot]);
    return out;
}

double max_abs_diff(const Matrix &a, const Matrix &b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionError("max_abs_diff: shape mismatch");
    if (a.size() == 0)
        return 0.0;
    return (a - b).cwiseAbs().maxCoeff();
}

} // namespace ctxlab
