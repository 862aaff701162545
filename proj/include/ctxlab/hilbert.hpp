#pragma once

// Dense complex linear algebra over labelled Hilbert spaces.
//
// Joint spaces use the environment-major flat index: the amplitude of
// |e>_E (x) |s>_S lives at e * d_S + s.

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace ctxlab {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

inline constexpr double kDefaultTol = 1e-9;

enum class SpaceKind { System, Environment, Joint };

std::string to_string(SpaceKind kind);

class Space {
  public:
    static Space system(std::size_t dim);
    static Space environment(std::size_t dim);
    static Space joint(std::size_t env_dim, std::size_t sys_dim);

    SpaceKind kind() const noexcept { return kind_; }
    std::size_t dim() const noexcept { return dim_; }
    /// Environment factor of a joint space (0 otherwise).
    std::size_t env_dim() const noexcept { return env_dim_; }
    /// System factor of a joint space (0 otherwise).
    std::size_t sys_dim() const noexcept { return sys_dim_; }

    std::string describe() const;

    friend bool operator==(const Space &, const Space &) = default;

  private:
    Space(SpaceKind kind, std::size_t dim, std::size_t env_dim, std::size_t sys_dim);

    SpaceKind kind_;
    std::size_t dim_;
    std::size_t env_dim_;
    std::size_t sys_dim_;
};

/// Amplitude vector over a labelled space. Need not be normalised.
class Ket {
  public:
    Ket(Space space, Vector amplitudes);
    Ket(Space space, std::initializer_list<Complex> amplitudes);

    /// Canonical basis vector |index> (0-based).
    static Ket basis(Space space, std::size_t index);
    static Ket zero(Space space);

    const Space &space() const noexcept { return space_; }
    const Vector &amplitudes() const noexcept { return amplitudes_; }
    std::size_t dim() const noexcept { return space_.dim(); }
    Complex operator[](std::size_t i) const { return amplitudes_[static_cast<Eigen::Index>(i)]; }

    double norm2() const { return amplitudes_.squaredNorm(); }
    double norm() const { return amplitudes_.norm(); }
    bool is_normalised(double tol = kDefaultTol) const;

    /// Unit vector in the same direction; throws NumericError on a zero ket.
    Ket normalised(double tol = kDefaultTol) const;
    /// Same vector with its largest-magnitude amplitude made real positive.
    Ket canonical_phase() const;

    /// <this|other>, antilinear in this.
    Complex inner(const Ket &other) const;

    Ket operator+(const Ket &other) const;
    Ket operator-(const Ket &other) const;
    Ket operator-() const;
    friend Ket operator*(Complex scale, const Ket &ket);
    friend Ket operator*(const Ket &ket, Complex scale) { return scale * ket; }

  private:
    Space space_;
    Vector amplitudes_;
};

/// Dense operator on a labelled space.
class Operator {
  public:
    Operator(Space space, Matrix entries);

    static Operator identity(Space space);
    /// |ket><ket|
    static Operator outer(const Ket &ket);
    /// |a><b|
    static Operator outer(const Ket &a, const Ket &b);

    const Space &space() const noexcept { return space_; }
    const Matrix &entries() const noexcept { return entries_; }
    std::size_t dim() const noexcept { return space_.dim(); }

    Operator adjoint() const;
    Ket apply(const Ket &ket) const;
    Complex trace() const { return entries_.trace(); }

    /// max |M - M^dagger| entrywise.
    double hermiticity_residual() const;
    bool is_hermitian(double tol = kDefaultTol) const;
    /// max |U^dagger U - I| entrywise.
    double unitarity_residual() const;
    bool is_unitary(double tol = kDefaultTol) const;

    Operator operator+(const Operator &other) const;
    Operator operator-(const Operator &other) const;
    Operator operator*(const Operator &other) const;
    friend Operator operator*(Complex scale, const Operator &op);

  private:
    Space space_;
    Matrix entries_;
};

/// |env> (x) |sys>, environment-major.
Ket tensor(const Ket &env, const Ket &sys);

/// Environment-side inner product: lambda[s] = sum_e conj(phi[e]) m[e * d_S + s].
Ket partial_inner_env(const Ket &phi, const Ket &joint);

/// G[i][j] = <v_i|v_j>. All vectors must share one space.
Matrix gram(std::span<const Ket> vectors);

struct EigenDecomposition {
    Eigen::VectorXd values; ///< ascending
    Matrix vectors;         ///< columns are orthonormal eigenvectors
};

/// Hermitian eigendecomposition. Throws InvariantError if the input is not
/// Hermitian within tol.
EigenDecomposition eigh(const Matrix &matrix, double tol = kDefaultTol);
EigenDecomposition eigh(const Operator &op, double tol = kDefaultTol);

/// Column `index` of an eigendecomposition as a ket over `space`.
Ket eigenvector(const EigenDecomposition &decomposition, std::size_t index, const Space &space);

/// Multiplies by the unit phase that makes the largest-magnitude entry real
/// positive. Near-ties (within 1e-9 relative) resolve to the lowest index.
Vector canonical_phase(const Vector &v);

/// max entrywise absolute difference.
double max_abs_diff(const Matrix &a, const Matrix &b);

} // namespace ctxlab
