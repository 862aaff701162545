#include <cmath>

#include <gtest/gtest.h>

#include "ctxlab/error.hpp"
#include "ctxlab/povm.hpp"
#include "support/oracles.hpp"

using namespace ctxlab;
using ctxlab::testing::Generator;

namespace {

const Space kS3 = Space::system(3);
const double kR2 = 1.0 / std::sqrt(2.0);
const double kR3 = 1.0 / std::sqrt(3.0);

std::vector<PovmElement> eq15_elements() {
    return {{"D,1", Ket(kS3, {2.0 / 3, -1.0 / 3, 1.0 / 3})},
            {"D,2", Ket(kS3, {-1.0 / 3, 2.0 / 3, 1.0 / 3})},
            {"D,3", Ket(kS3, {1.0 / 3, 1.0 / 3, 2.0 / 3})},
            {"A", Ket(kS3, {kR3, kR3, -kR3})}};
}

Povm eq15() { return Povm(3, eq15_elements()); }

Povm vh_povm() {
    const double h = 1.0 / (3.0 * std::sqrt(2.0));
    return Povm(3, {{"V,1", Ket(kS3, {kR2, 0, 0})},
                    {"V,2", Ket(kS3, {0, kR2, 0})},
                    {"V,3", Ket(kS3, {0, 0, kR2})},
                    {"H,1", Ket(kS3, {h, -2 * h, 2 * h})},
                    {"H,2", Ket(kS3, {-2 * h, h, 2 * h})},
                    {"H,3", Ket(kS3, {2 * h, 2 * h, h})}});
}

Povm projective(std::size_t dim) {
    std::vector<PovmElement> elements;
    for (std::size_t i = 0; i < dim; ++i)
        elements.emplace_back("e" + std::to_string(i), Ket::basis(Space::system(dim), i));
    return Povm(dim, std::move(elements));
}

const Ket kUniform(kS3, {kR3, kR3, kR3});

} // namespace

TEST(PovmConstruction, RejectsDuplicateLabelsAndOversizedElements) {
    EXPECT_THROW(Povm(3, {{"a", Ket::basis(kS3, 0)}, {"a", Ket::basis(kS3, 1)}}), InvariantError);
    EXPECT_THROW(Povm(3, {{"big", Ket(kS3, {1.0, 1.0, 0.0})}}), InvariantError);
    EXPECT_THROW(Povm(3, {{"wrong", Ket::basis(Space::system(2), 0)}}), DimensionError);
    Matrix negative = Matrix::Zero(3, 3);
    negative(0, 0) = -0.5;
    EXPECT_THROW(Povm(3, {{"neg", Operator(kS3, negative)}}), InvariantError);
}

TEST(PovmConstruction, CanonicalisesPhases) {
    const Povm p(3, {{"x", Ket(kS3, {0.0, Complex(0, -kR2), 0.0})}});
    EXPECT_DOUBLE_EQ(p.at("x").vector()[1].real(), kR2);
    EXPECT_EQ(p.at("x").vector()[1].imag(), 0.0);
}

TEST(Completeness, ProjectiveBasisIsExact) { EXPECT_EQ(completeness_check(projective(4)), 0.0); }

TEST(Completeness, Eq15PovmResolvesIdentity) { EXPECT_LE(completeness_check(eq15()), 1e-12); }

TEST(Completeness, MissingAOutcomeLeavesFDeficit) {
    auto elements = eq15_elements();
    elements.pop_back();
    EXPECT_NEAR(completeness_check(Povm(3, elements)), 1.0 / 3.0, 1e-12);
}

TEST(Probability, VerticalOutcomeOnPathOne) {
    EXPECT_NEAR(probability(vh_povm(), Ket::basis(kS3, 0), "V,1"), 0.5, 1e-15);
}

TEST(Probability, UniformStateOnEq15) {
    const Povm p = eq15();
    EXPECT_NEAR(probability(p, kUniform, "A"), 1.0 / 9.0, 1e-15);
    EXPECT_NEAR(probability(p, kUniform, "D,1"), 4.0 / 27.0, 1e-15);
    EXPECT_NEAR(probability(p, kUniform, "D,2"), 4.0 / 27.0, 1e-15);
    EXPECT_NEAR(probability(p, kUniform, "D,3"), 16.0 / 27.0, 1e-15);
    double total = 0.0;
    for (const auto &label : p.labels())
        total += probability(p, kUniform, label);
    EXPECT_NEAR(total, 1.0, 1e-15);
}

TEST(Probability, DensityMatrixAndKetAgree) {
    const Povm p = eq15();
    const auto rho = DensityMatrix::pure(kUniform);
    for (const auto &label : p.labels())
        EXPECT_NEAR(probability(p, rho, label), probability(p, kUniform, label), 1e-15);
}

TEST(Probability, UnknownLabelAndBadStateAreTyped) {
    EXPECT_THROW(probability(eq15(), kUniform, "nope"), LabelError);
    EXPECT_THROW(probability(eq15(), Ket(kS3, {1.0, 1.0, 0.0}), "A"), InvariantError);
    EXPECT_THROW(DensityMatrix(Operator(kS3, 2.0 * Matrix::Identity(3, 3))), InvariantError);
}

TEST(ContextSelection, Weights) {
    EXPECT_NEAR(context_selection_probability(projective(3), "e1"), 1.0, 1e-15);
    EXPECT_NEAR(context_selection_probability(eq15(), "D,1"), 2.0 / 3.0, 1e-15);
    const Povm vh = vh_povm();
    for (const auto &label : vh.labels())
        EXPECT_NEAR(context_selection_probability(vh, label), 0.5, 1e-15);
}

TEST(ContextSelection, OperatorElementUsesLargestEigenvalue) {
    Matrix e = Matrix::Zero(3, 3);
    e(0, 0) = 0.25;
    e(1, 1) = 0.75;
    const Povm p(3, {{"op", Operator(kS3, e)}});
    EXPECT_NEAR(context_selection_probability(p, "op"), 0.75, 1e-15);
    const auto rho = maximizing_state(p, "op");
    EXPECT_NEAR(probability(p, rho, "op"), 0.75, 1e-12);
}

TEST(MaximizingState, ProjectiveOutcome) {
    const auto rho = maximizing_state(projective(3), "e2");
    EXPECT_LE(max_abs_diff(rho.entries(), Operator::outer(Ket::basis(kS3, 2)).entries()), 1e-15);
}

TEST(MaximizingState, Eq15OutcomesReachTheirWeights) {
    const Povm p = eq15();
    const auto rho = maximizing_state(p, "D,1");
    const Ket expected(kS3, {2.0 / std::sqrt(6.0), -1.0 / std::sqrt(6.0), 1.0 / std::sqrt(6.0)});
    EXPECT_LE(max_abs_diff(rho.entries(), Operator::outer(expected).entries()), 1e-15);
    EXPECT_NEAR(probability(p, rho, "D,1"), 2.0 / 3.0, 1e-15);

    const auto rho_a = maximizing_state(p, "A");
    EXPECT_LE(max_abs_diff(rho_a.entries(), Operator::outer(Ket(kS3, {kR3, kR3, -kR3})).entries()), 1e-15);
    EXPECT_NEAR(probability(p, rho_a, "A"), 1.0, 1e-15);
}

TEST(MaximizingState, ZeroElementIsTyped) {
    const Povm p(3, {{"zero", Ket::zero(kS3)}, {"one", Ket::basis(kS3, 0)}});
    EXPECT_THROW(maximizing_state(p, "zero"), InvariantError);
    EXPECT_THROW(rescaled_probability(p, kUniform, "zero"), InvariantError);
}

TEST(Rescaled, Examples) {
    const Povm p = eq15();
    EXPECT_NEAR(rescaled_probability(p, maximizing_state(p, "D,2"), "D,2"), 1.0, 1e-15);
    EXPECT_NEAR(rescaled_probability(p, kUniform, "A"), 1.0 / 9.0, 1e-15);
    const Povm vh = vh_povm();
    const Ket one = Ket::basis(kS3, 0);
    EXPECT_NEAR(rescaled_probability(vh, one, "V,1") + rescaled_probability(vh, one, "V,2"), 1.0, 1e-15);
}

TEST(ShareContext, Eq15Relations) {
    const Povm p = eq15();
    const auto orthogonal = share_context(p, "D,1", "A");
    EXPECT_TRUE(orthogonal.shared);
    EXPECT_NEAR(orthogonal.witness, 0.0, 1e-15);
    EXPECT_FALSE(orthogonal.proportional);

    const auto overlapping = share_context(p, "D,1", "D,2");
    EXPECT_FALSE(overlapping.shared);
    EXPECT_NEAR(overlapping.witness, 0.5, 1e-15);

    const auto self = share_context(p, "D,3", "D,3");
    EXPECT_TRUE(self.shared);
    EXPECT_TRUE(self.proportional);
}

TEST(ShareContext, ProportionalPairIsFlagged) {
    const Povm p(3, {{"a", Ket(kS3, {0.5, 0, 0})}, {"b", Ket(kS3, {Complex(0, 0.3), 0, 0})}});
    const auto relation = share_context(p, "a", "b");
    EXPECT_TRUE(relation.shared);
    EXPECT_TRUE(relation.proportional);
}

TEST(ShareContext, CommutatorPathAgreesWithInnerProductOnRankOne) {
    Generator gen(21);
    for (int trial = 0; trial < 40; ++trial) {
        Ket u(kS3, 0.6 * gen.unit_vector(3));
        Ket v(kS3, 0.6 * gen.unit_vector(3));
        if (trial % 3 == 0) // force orthogonality
            v = Ket(kS3, 0.6 * (v - u.normalised().inner(v) * u.normalised()).normalised().amplitudes());
        const Povm vectors(3, {{"u", u}, {"v", v}});
        const Povm operators(3, {{"u", Operator::outer(u)}, {"v", Operator::outer(v)}});
        EXPECT_EQ(share_context(vectors, "u", "v").shared, share_context(operators, "u", "v").shared);
        EXPECT_EQ(share_context(operators, "u", "v").method, ContextRelation::Method::Commutator);
    }
}

TEST(ShareContext, ZeroElementIsTyped) {
    const Povm p(3, {{"zero", Ket::zero(kS3)}, {"one", Ket::basis(kS3, 0)}});
    EXPECT_THROW(share_context(p, "zero", "one"), InvariantError);
}

TEST(ContextGraph, ProjectiveIsComplete) {
    const auto graph = context_graph(projective(4));
    EXPECT_EQ(graph.nodes.size(), 4u);
    EXPECT_EQ(graph.edges.size(), 6u);
}

TEST(ContextGraph, Eq15IsAStar) {
    const auto graph = context_graph(eq15());
    ASSERT_EQ(graph.edges.size(), 3u);
    for (const char *d : {"D,1", "D,2", "D,3"})
        EXPECT_TRUE(graph.has_edge("A", d)) << d;
    EXPECT_FALSE(graph.has_edge("D,1", "D,2"));
    EXPECT_FALSE(graph.has_edge("D,2", "D,3"));
    EXPECT_FALSE(graph.has_edge("D,1", "D,3"));
}

TEST(ContextGraph, VhEdgesStayWithinEachContext) {
    const Povm p = vh_povm();
    const auto graph = context_graph(p);
    for (const auto &v : {"V,1", "V,2", "V,3"}) {
        for (const auto &h : {"H,1", "H,2", "H,3"}) {
            const bool orthogonal = std::abs(p.at(v).vector().inner(p.at(h).vector())) <= 1e-12;
            EXPECT_EQ(graph.has_edge(v, h), orthogonal);
        }
    }
    EXPECT_TRUE(graph.has_edge("V,1", "V,2"));
    EXPECT_TRUE(graph.has_edge("H,1", "H,3"));
    EXPECT_EQ(graph.edges.size(), 6u);
}

TEST(ContextGraph, ZeroElementsAreExcluded) {
    const Povm p(3, {{"zero", Ket::zero(kS3)}, {"one", Ket::basis(kS3, 0)}, {"two", Ket::basis(kS3, 1)}});
    const auto graph = context_graph(p);
    ASSERT_EQ(graph.excluded.size(), 1u);
    EXPECT_EQ(graph.excluded[0], "zero");
    EXPECT_EQ(graph.nodes.size(), 2u);
}

TEST(ShareContext, IsReflexiveAndSymmetric) {
    Generator gen(33);
    std::vector<PovmElement> elements;
    for (const auto &v : gen.rank_one_povm(3, 7))
        elements.emplace_back("m" + std::to_string(elements.size()), Ket(kS3, v));
    const Povm p(3, std::move(elements));
    for (const auto &a : p.labels()) {
        EXPECT_TRUE(share_context(p, a, a).shared);
        for (const auto &b : p.labels())
            EXPECT_EQ(share_context(p, a, b).shared, share_context(p, b, a).shared);
    }
}

TEST(CoarseGrain, ThreeAOutcomesMergeToUnitF) {
    const Ket f(kS3, {kR3, kR3, -kR3});
    std::vector<PovmElement> elements = eq15_elements();
    elements.pop_back();
    for (int i = 1; i <= 3; ++i)
        elements.emplace_back("A," + std::to_string(i), Complex(kR3) * f);
    const Povm six(3, elements);
    const std::vector<std::string> merge{"A,1", "A,2", "A,3"};
    const Povm merged = coarse_grain(six, merge, "A");
    ASSERT_EQ(merged.size(), 4u);
    ASSERT_TRUE(merged.at("A").is_vector());
    EXPECT_NEAR(merged.at("A").vector().norm2(), 1.0, 1e-12);
    EXPECT_LE(ctxlab::testing::phase_distance(merged.at("A").vector().amplitudes(), f.amplitudes()), 1e-12);
    EXPECT_LE(completeness_check(merged), 1e-12);
    EXPECT_EQ(merged.index_of("A"), 3u);
}

TEST(CoarseGrain, WholeProjectiveBasisBecomesIdentity) {
    const Povm p = projective(3);
    const auto labels = p.labels();
    const Povm merged = coarse_grain(p, labels, "all");
    ASSERT_EQ(merged.size(), 1u);
    ASSERT_FALSE(merged.at("all").is_vector());
    EXPECT_LE(max_abs_diff(merged.at("all").effect().entries(), Matrix::Identity(3, 3)), 1e-12);
}

TEST(CoarseGrain, TwoDOutcomesGiveRankTwoOperator) {
    const std::vector<std::string> merge{"D,1", "D,2"};
    const Povm merged = coarse_grain(eq15(), merge, "D12");
    ASSERT_FALSE(merged.at("D12").is_vector());
    EXPECT_NEAR(merged.at("D12").effect().trace().real(), 4.0 / 3.0, 1e-12);
    EXPECT_LE(completeness_check(merged), 1e-12);
}

TEST(CoarseGrain, PreservesUnmergedProbabilities) {
    Generator gen(44);
    std::vector<PovmElement> elements;
    for (const auto &v : gen.rank_one_povm(3, 6))
        elements.emplace_back("m" + std::to_string(elements.size()), Ket(kS3, v));
    const Povm p(3, std::move(elements));
    const std::vector<std::string> merge{"m1", "m4"};
    const Povm merged = coarse_grain(p, merge, "m14");
    EXPECT_LE(completeness_check(merged), 1e-12);
    for (int trial = 0; trial < 20; ++trial) {
        const DensityMatrix rho(Operator(kS3, gen.density_matrix(3)));
        for (const char *label : {"m0", "m2", "m3", "m5"})
            EXPECT_NEAR(probability(merged, rho, label), probability(p, rho, label), 1e-14);
        EXPECT_NEAR(probability(merged, rho, "m14"), probability(p, rho, "m1") + probability(p, rho, "m4"), 1e-12);
    }
}

TEST(Selby, SingleBasisIsProjective) {
    const std::vector<LabelledBasis> bases{{"Z", {Ket::basis(kS3, 0), Ket::basis(kS3, 1), Ket::basis(kS3, 2)}}};
    const std::vector<double> weights{1.0};
    const Povm p = selby_mixture(bases, weights);
    EXPECT_EQ(completeness_check(p), 0.0);
    for (const auto &label : p.labels())
        EXPECT_NEAR(context_selection_probability(p, label), 1.0, 1e-15);
    EXPECT_TRUE(p.contains("Z,3"));
}

TEST(Selby, UniformOverQubitMutuallyUnbiasedBases) {
    const Space s2 = Space::system(2);
    const std::vector<LabelledBasis> bases{
        {"Z", {Ket(s2, {1, 0}), Ket(s2, {0, 1})}},
        {"X", {Ket(s2, {kR2, kR2}), Ket(s2, {kR2, -kR2})}},
        {"Y", {Ket(s2, {kR2, Complex(0, kR2)}), Ket(s2, {kR2, Complex(0, -kR2)})}}};
    const std::vector<double> weights{1.0 / 3, 1.0 / 3, 1.0 / 3};
    const Povm p = selby_mixture(bases, weights);
    ASSERT_EQ(p.size(), 6u);
    for (const auto &label : p.labels())
        EXPECT_NEAR(context_selection_probability(p, label), 1.0 / 3.0, 1e-15);
    EXPECT_LE(completeness_check(p), 1e-12);
}

TEST(Selby, InvalidWeightsAndBasesAreTyped) {
    const std::vector<LabelledBasis> bases{{"Z", {Ket::basis(kS3, 0), Ket::basis(kS3, 1), Ket::basis(kS3, 2)}}};
    const std::vector<double> bad{0.7};
    EXPECT_THROW(selby_mixture(bases, bad), InvariantError);
    const std::vector<double> negative{-0.5, 1.5};
    const std::vector<LabelledBasis> two{bases[0], bases[0]};
    EXPECT_THROW(selby_mixture(two, negative), InvariantError);
    const std::vector<LabelledBasis> broken{{"Z", {Ket::basis(kS3, 0), Ket::basis(kS3, 0), Ket::basis(kS3, 2)}}};
    const std::vector<double> one{1.0};
    EXPECT_THROW(selby_mixture(broken, one), InvariantError);
}

TEST(Selby, SelectionProbabilityEqualsBasisWeight) {
    Generator gen(55);
    for (int trial = 0; trial < 20; ++trial) {
        const int d = gen.uniform_int(2, 4);
        const int t = gen.uniform_int(1, 4);
        const Space s = Space::system(static_cast<std::size_t>(d));
        std::vector<LabelledBasis> bases;
        std::vector<double> weights;
        double total = 0.0;
        for (int x = 0; x < t; ++x) {
            const Matrix u = gen.unitary(d);
            LabelledBasis basis{"b" + std::to_string(x), {}};
            for (int a = 0; a < d; ++a)
                basis.vectors.emplace_back(s, u.col(a));
            bases.push_back(std::move(basis));
            weights.push_back(gen.uniform() + 0.1);
            total += weights.back();
        }
        for (auto &w : weights)
            w /= total;
        const Povm p = selby_mixture(bases, weights);
        EXPECT_LE(completeness_check(p), 1e-12);
        for (int x = 0; x < t; ++x)
            for (int a = 1; a <= d; ++a)
                EXPECT_NEAR(context_selection_probability(p, "b" + std::to_string(x) + "," + std::to_string(a)),
                            weights[static_cast<std::size_t>(x)], 1e-12);
    }
}

TEST(Properties, ProbabilitiesSumToOneAndRespectWeights) {
    Generator gen(66);
    for (int trial = 0; trial < 200; ++trial) {
        const int d = gen.uniform_int(2, 5);
        const int m = gen.uniform_int(d, 10);
        const Space s = Space::system(static_cast<std::size_t>(d));
        std::vector<PovmElement> elements;
        for (const auto &v : gen.rank_one_povm(d, m))
            elements.emplace_back("m" + std::to_string(elements.size()), Ket(s, v));
        const Povm p(static_cast<std::size_t>(d), std::move(elements));
        const DensityMatrix rho(Operator(s, gen.density_matrix(d)));
        const Ket psi(s, gen.unit_vector(d));
        double total = 0.0;
        for (const auto &label : p.labels()) {
            total += probability(p, rho, label);
            EXPECT_LE(probability(p, psi, label), context_selection_probability(p, label) + 1e-9);
        }
        EXPECT_NEAR(total, 1.0, 1e-9);
    }
}
