#pragma once

// Hardy-like paradoxes and the rescaled-probability noncontextuality test.
//
// Given outcomes F, D1, D2 with |F> = a1|b1> + c1|D1> = a2|b2> + c2|D2> and
// <b1|b2> = 0, a noncontextual reading requires F to be explained by D1 or
// D2. Contextuality is indicated whenever
//
//   P(F)/w(F) > P(D1)/w(D1) + P(D2)/w(D2),     w(m) = <lambda(m)|lambda(m)>.

#include <optional>
#include <string>

#include "ctxlab/hilbert.hpp"
#include "ctxlab/povm.hpp"

namespace ctxlab {

struct HardyDecomposition {
    Complex alpha;        ///< <b|f>
    Complex beta;         ///< <d|f>
    double residual;      ///< || f - alpha b - beta d ||
    double basis_overlap; ///< |<b|d>|, zero for a genuine decomposition
};

/// Best fit f ~ alpha b + beta d; residual is the norm of what is left.
HardyDecomposition hardy_decomposition_check(const Ket &f, const Ket &b, const Ket &d);

/// The normalised dim-3 state orthogonal to both d1 and d2.
Ket hardy_state(const Ket &d1, const Ket &d2, double tol = kDefaultTol);

struct HardyTriple {
    std::string f;
    std::string d1;
    std::string d2;
    Ket f_hat;
    Ket d1_hat;
    Ket d2_hat;
    /// The orthogonal pair |b1>, |b2> with D1 orthogonal to b1, D2 to b2.
    std::optional<Ket> basis1;
    std::optional<Ket> basis2;

    /// Reads the three rank-1 outcomes from `povm`. Missing basis vectors are
    /// derived as the normalised part of F orthogonal to D1 (resp. D2).
    static HardyTriple from_povm(const Povm &povm, std::string f, std::string d1, std::string d2,
                                 std::optional<Ket> basis1 = std::nullopt, std::optional<Ket> basis2 = std::nullopt,
                                 double tol = kDefaultTol);

    /// A triple over bare directions, labelled "F", "D1", "D2".
    static HardyTriple from_kets(const Ket &f, const Ket &d1, const Ket &d2, double tol = kDefaultTol);
};

struct Certification {
    double c1 = 0.0; ///< rescaled P(F) at the state maximising P(D1)
    double c2 = 0.0;
    double r1 = 0.0; ///< rescaled P(F) at |b1>; NaN when b1 is unknown
    double r2 = 0.0;
};

struct InequalityReport {
    double lhs = 0.0;
    double rhs = 0.0;
    bool violated = false;
    DensityMatrix state_used;
    Certification certification;
};

InequalityReport evaluate_inequality(const Povm &povm, const HardyTriple &triple, const DensityMatrix &state,
                                     double tol = kDefaultTol);
InequalityReport evaluate_inequality(const Povm &povm, const HardyTriple &triple, const Ket &state,
                                     double tol = kDefaultTol);

struct Violation {
    double value;
    Ket state;
};

/// Largest eigenpair of P_F - P_D1 - P_D2 (normalised projectors): the
/// supremum of lhs - rhs over all states, attained by a pure state.
Violation max_violation(const HardyTriple &triple, double tol = kDefaultTol);

struct HardyCompletion {
    Povm povm;
    /// Common weight c of the three Hardy outcomes.
    double scale;
};

/// Embeds F, D1, D2 with common weight c = 1/lambda_max(P_F + P_D1 + P_D2) and
/// spends the remainder I - c(P_F + P_D1 + P_D2) on rank-1 outcomes "rest,k".
HardyCompletion complete_hardy_povm(const Ket &f, const Ket &d1, const Ket &d2, double tol = kDefaultTol);

} // namespace ctxlab
