#pragma once

// System-environment dilations of POVMs.
//
// A dilation is an orthonormal set of joint outcomes |m> in E (x) S together
// with the initial environment state |phi>. The POVM element of outcome m is
// the partial inner product <phi|m>, and the remainder
// |sigma(m)> = |m> - |phi> (x) <phi|m> is orthogonal to |phi> (x) H_S.

#include <span>
#include <string>
#include <vector>

#include "ctxlab/hilbert.hpp"
#include "ctxlab/povm.hpp"

namespace ctxlab {

struct LabelledKet {
    std::string label;
    Ket vector;
};

class JointOutcomeSet {
  public:
    /// Validates that all outcomes live in `space` and are orthonormal.
    JointOutcomeSet(Space space, std::vector<LabelledKet> outcomes, double tol = kDefaultTol);

    /// Skips the orthonormality check; for probing constraint reports on
    /// deliberately broken outcome sets.
    static JointOutcomeSet unvalidated(Space space, std::vector<LabelledKet> outcomes);

    const Space &space() const noexcept { return space_; }
    const std::vector<LabelledKet> &outcomes() const noexcept { return outcomes_; }
    std::size_t size() const noexcept { return outcomes_.size(); }
    bool complete() const noexcept { return outcomes_.size() == space_.dim(); }
    std::vector<Ket> vectors() const;

  private:
    struct Unchecked {};
    JointOutcomeSet(Space space, std::vector<LabelledKet> outcomes, Unchecked);

    Space space_;
    std::vector<LabelledKet> outcomes_;
};

class Dilation {
  public:
    Dilation(JointOutcomeSet outcomes, Ket phi_init, double tol = kDefaultTol);

    const JointOutcomeSet &outcomes() const noexcept { return outcomes_; }
    const Ket &phi_init() const noexcept { return phi_init_; }
    std::size_t env_dim() const noexcept { return outcomes_.space().env_dim(); }
    std::size_t sys_dim() const noexcept { return outcomes_.space().sys_dim(); }

  private:
    JointOutcomeSet outcomes_;
    Ket phi_init_;
};

Povm povm_from_dilation(const Dilation &dilation, double tol = kDefaultTol);

struct Residual {
    std::string label;
    Ket lambda; ///< <phi|m>, phase as produced by the contraction
    Ket sigma;  ///< |m> - |phi> (x) |lambda>
};

struct ResidualSet {
    std::vector<Residual> items;
};

ResidualSet residual_decompose(const Dilation &dilation);

struct ConstraintReport {
    /// max over m != m' of |<sigma|sigma'> + <lambda|lambda'>|
    double max_orthogonality_residual = 0.0;
    /// max over m of |<sigma|sigma> + <lambda|lambda> - 1|
    double max_normalisation_residual = 0.0;
    /// max over m of |<phi (x) e_s|sigma(m)>|
    double max_initial_overlap = 0.0;
};

ConstraintReport verify_constraints(const Dilation &dilation);

/// Dilates a complete rank-1 POVM into an environment of dimension M (the
/// element count) with |phi> = |0>_E. The POVM vectors are embedded verbatim.
Dilation naimark_dilate(const Povm &povm, double tol = kDefaultTol);

struct SwitchContext {
    std::string label;
    Ket env_state;    ///< |x>_E
    Operator unitary; ///< U_x on the system
};

/// lambda(x,a) = <phi|x> U_x^dagger |a>, labelled "x,a" with a 1-based.
Povm context_switch_povm(std::span<const SwitchContext> contexts, std::span<const Ket> basis, const Ket &phi_init,
                         double tol = kDefaultTol);

} // namespace ctxlab
