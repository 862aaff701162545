#pragma once

// Three-path interferometer with photon polarisation as the environment.
//
// System: output paths |1>,|2>,|3>. Environment: polarisation with |H> = |0>_E
// and |V> = |1>_E. A half-wave plate in one internal path flips the sign of
// that path's amplitude for H-polarised light, so H outcomes detect the
// rotated basis (I - 2|P><P|)|i>.

#include <string>

#include "ctxlab/dilation.hpp"
#include "ctxlab/hilbert.hpp"
#include "ctxlab/povm.hpp"

namespace ctxlab::interferometer {

enum class HwpPath { F, S1, S2 };

enum class Polarisation { H, V, D, A };

struct ThreePathScenario {
    Ket path1, path2, path3;
    Ket s1; ///< (|2> + |3>)/sqrt2
    Ket s2; ///< (|1> + |3>)/sqrt2
    Ket f;  ///< (|1> + |2> - |3>)/sqrt3
    Ket h, v, d, a;
    HwpPath hwp_path = HwpPath::F;
    Operator hwp; ///< I - 2|P><P| for the path P carrying the plate
};

ThreePathScenario build_three_path(HwpPath hwp_path = HwpPath::F);

const Ket &polarisation(const ThreePathScenario &s, Polarisation p);
Polarisation parse_polarisation(const std::string &name);

Ket hwp_transform(const ThreePathScenario &s, const Ket &psi);

/// (V,i) = |V> (x) |i>, (H,i) = |H> (x) hwp|i>.
JointOutcomeSet joint_outcomes_vh(const ThreePathScenario &s);

/// (D,i) and (A,i): (|H> (x) hwp|i> +- |V> (x) |i>)/sqrt2.
JointOutcomeSet joint_outcomes_da(const ThreePathScenario &s);

Dilation dilation_vh(const ThreePathScenario &s, Polarisation phi_init = Polarisation::D);
Dilation dilation_da(const ThreePathScenario &s, Polarisation phi_init = Polarisation::D);

Povm povm_vh(const ThreePathScenario &s, Polarisation phi_init = Polarisation::D);

/// D/A POVM with phi_init = |D>. With merge_a the three A outcomes are
/// coarse-grained into a single outcome "A".
Povm povm_da(const ThreePathScenario &s, bool merge_a);

} // namespace ctxlab::interferometer
