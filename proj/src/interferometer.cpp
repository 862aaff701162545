#include "ctxlab/interferometer.hpp"

#include <cmath>
#include <vector>

#include "ctxlab/error.hpp"

namespace ctxlab::interferometer {

namespace {

const Space kSystem = Space::system(3);
const Space kEnv = Space::environment(2);

std::string index_label(const char *prefix, int i) { return std::string(prefix) + "," + std::to_string(i); }

} // namespace

ThreePathScenario build_three_path(HwpPath hwp_path) {
    const double r2 = 1.0 / std::sqrt(2.0);
    const double r3 = 1.0 / std::sqrt(3.0);
    Ket p1 = Ket::basis(kSystem, 0);
    Ket p2 = Ket::basis(kSystem, 1);
    Ket p3 = Ket::basis(kSystem, 2);
    Ket s1(kSystem, {0.0, r2, r2});
    Ket s2(kSystem, {r2, 0.0, r2});
    Ket f(kSystem, {r3, r3, -r3});
    Ket h = Ket::basis(kEnv, 0);
    Ket v = Ket::basis(kEnv, 1);
    Ket d(kEnv, {r2, r2});
    Ket a(kEnv, {r2, -r2});

    const Ket &plate = hwp_path == HwpPath::F ? f : hwp_path == HwpPath::S1 ? s1 : s2;
    Operator hwp = Operator::identity(kSystem) - Complex(2.0) * Operator::outer(plate);
    return {std::move(p1), std::move(p2), std::move(p3), std::move(s1), std::move(s2), std::move(f),
            std::move(h),  std::move(v),  std::move(d),  std::move(a),  hwp_path,      std::move(hwp)};
}

const Ket &polarisation(const ThreePathScenario &s, Polarisation p) {
    switch (p) {
    case Polarisation::H:
        return s.h;
    case Polarisation::V:
        return s.v;
    case Polarisation::D:
        return s.d;
    case Polarisation::A:
        return s.a;
    }
    throw InputError("unknown polarisation");
}

Polarisation parse_polarisation(const std::string &name) {
    if (name == "H")
        return Polarisation::H;
    if (name == "V")
        return Polarisation::V;
    if (name == "D")
        return Polarisation::D;
    if (name == "A")
        return Polarisation::A;
    throw InputError("unknown polarisation '" + name + "' (expected H, V, D or A)");
}

Ket hwp_transform(const ThreePathScenario &s, const Ket &psi) { return s.hwp.apply(psi); }

JointOutcomeSet joint_outcomes_vh(const ThreePathScenario &s) {
    const Ket paths[] = {s.path1, s.path2, s.path3};
    std::vector<LabelledKet> outcomes;
    for (int i = 0; i < 3; ++i)
        outcomes.push_back({index_label("V", i + 1), tensor(s.v, paths[i])});
    for (int i = 0; i < 3; ++i)
        outcomes.push_back({index_label("H", i + 1), tensor(s.h, hwp_transform(s, paths[i]))});
    return JointOutcomeSet(Space::joint(2, 3), std::move(outcomes));
}

JointOutcomeSet joint_outcomes_da(const ThreePathScenario &s) {
    // Built from the unit context vectors; the weighted lambda vectors would
    // leave each outcome with norm^2 1/2.
    const double r2 = 1.0 / std::sqrt(2.0);
    const Ket paths[] = {s.path1, s.path2, s.path3};
    std::vector<LabelledKet> d_outcomes;
    std::vector<LabelledKet> a_outcomes;
    for (int i = 0; i < 3; ++i) {
        const Ket h_part = tensor(s.h, hwp_transform(s, paths[i]));
        const Ket v_part = tensor(s.v, paths[i]);
        d_outcomes.push_back({index_label("D", i + 1), Complex(r2) * (h_part + v_part)});
        a_outcomes.push_back({index_label("A", i + 1), Complex(r2) * (h_part - v_part)});
    }
    d_outcomes.insert(d_outcomes.end(), a_outcomes.begin(), a_outcomes.end());
    return JointOutcomeSet(Space::joint(2, 3), std::move(d_outcomes));
}

Dilation dilation_vh(const ThreePathScenario &s, Polarisation phi_init) {
    return Dilation(joint_outcomes_vh(s), polarisation(s, phi_init));
}

Dilation dilation_da(const ThreePathScenario &s, Polarisation phi_init) {
    return Dilation(joint_outcomes_da(s), polarisation(s, phi_init));
}

Povm povm_vh(const ThreePathScenario &s, Polarisation phi_init) {
    return povm_from_dilation(dilation_vh(s, phi_init));
}

Povm povm_da(const ThreePathScenario &s, bool merge_a) {
    Povm povm = povm_from_dilation(dilation_da(s, Polarisation::D));
    if (!merge_a)
        return povm;
    const std::vector<std::string> a_labels = {"A,1", "A,2", "A,3"};
    return coarse_grain(povm, a_labels, "A");
}

} // namespace ctxlab::interferometer
