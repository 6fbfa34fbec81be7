#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "../fixtures.hpp"
#include "helpers.hpp"
#include "qcompact/random.hpp"
#include "qcompact/three_qubit.hpp"

using namespace qcompact;
using qtest::basis_ket;

namespace {

double fidelity(const PureState& a, const PureState& b) {
    return std::norm(a.amplitudes().dot(b.amplitudes()));
}

}  // namespace

TEST(NamedStates, ParseRoundTrip) {
    for (auto n : {NamedState::Ghz, NamedState::W, NamedState::Eq8Max, NamedState::Product,
                   NamedState::BellTimesPure}) {
        EXPECT_EQ(parse_named_state(to_string(n)), n);
        EXPECT_NEAR(make_named_state(n).amplitudes().norm(), 1.0, 1e-14);
    }
    EXPECT_THROW(parse_named_state("cat"), std::invalid_argument);
}

TEST(NamedStates, Eq8IsTheStandardFormAtItsParameters) {
    const PureState a = make_named_state(NamedState::Eq8Max);
    const PureState b =
        make_standard_form({0.25, 0.25, 0.25, 0.25}, 0.0, std::numbers::pi, 0.0, std::numbers::pi);
    EXPECT_NEAR(fidelity(a, b), 1.0, 1e-14);
}

TEST(StandardForm, GhzParameters) {
    const auto sf = standard_form(make_named_state(NamedState::Ghz));
    EXPECT_NEAR(sf.p[0], 0.5, 1e-12);
    EXPECT_NEAR(sf.p[3], 0.5, 1e-12);
    EXPECT_NEAR(sf.p[1] + sf.p[2], 0.0, 1e-12);
    EXPECT_NEAR(sf.theta_b, 0.0, 1e-10);
    EXPECT_NEAR(sf.theta_c, 0.0, 1e-10);
}

TEST(StandardForm, ReconstructsRandomStates) {
    Rng rng(53);
    const SubsystemLayout layout({2, 2, 2});
    for (int t = 0; t < 50; ++t) {
        const PureState psi = haar_random_state(layout, rng);
        for (const auto& o : enumerate_orderings(layout)) {
            const auto sf = standard_form(psi, o);
            EXPECT_GE(fidelity(psi, reconstruct_input(sf, layout)), 1.0 - 1e-10);
            double total = 0.0;
            for (double p : sf.p) {
                EXPECT_GE(p, 0.0);
                total += p;
            }
            EXPECT_NEAR(total, 1.0, 1e-12);
            EXPECT_GE(sf.theta_b, 0.0);
            EXPECT_LE(sf.theta_b, std::numbers::pi + 1e-12);
            const auto c = verify_constraint(sf);
            if (!c.singular) EXPECT_LT(c.residual, 1e-8);
            for (const auto& u : sf.local_unitaries) {
                EXPECT_LT(qtest::max_diff(u.adjoint() * u, Mat::Identity(2, 2)), 1e-12);
            }
        }
    }
}

TEST(StandardForm, StateMatchesParameters) {
    Rng rng(59);
    const SubsystemLayout layout({2, 2, 2});
    const PureState psi = haar_random_state(layout, rng);
    const auto sf = standard_form(psi);
    const PureState direct = make_standard_form(sf.p, sf.alpha, sf.beta, sf.theta_b, sf.theta_c);
    EXPECT_NEAR(fidelity(standard_form_state(sf, layout), direct), 1.0, 1e-10);
}

TEST(StandardForm, EcIsInvariantUnderTheMap) {
    Rng rng(61);
    const SubsystemLayout layout({2, 2, 2});
    const PureState psi = haar_random_state(layout, rng);
    const auto sf = standard_form(psi);
    EXPECT_NEAR(entanglement_value(standard_form_state(sf, layout)), entanglement_value(psi), 1e-8);
}

TEST(StandardForm, RejectsNonQubits) {
    const PureState psi = haar_random_state(SubsystemLayout({2, 3, 2}), std::uint64_t{1});
    EXPECT_THROW(standard_form(psi), std::invalid_argument);
    EXPECT_THROW(classify(psi), std::invalid_argument);
}

TEST(Constraint, Eq8IsSingularWithZeroResidual) {
    const auto sf = standard_form(make_named_state(NamedState::Eq8Max));
    const auto c = verify_constraint(sf);
    EXPECT_LT(c.residual, 1e-10);
}

TEST(Classify, Fixtures) {
    for (const auto& f : qtest::class_fixtures()) {
        const PureState psi = f.state();
        const auto c = verify_constraint(standard_form(psi));
        EXPECT_TRUE(c.singular || c.residual < 1e-8) << f.name;
        const auto cls = classify(psi);
        EXPECT_EQ(cls.label, f.expected) << f.name << " got " << to_string(cls.label);
    }
}

TEST(Classify, FixtureDetails) {
    const auto fx = qtest::class_fixtures();
    const auto a = classify(fx[2].state());
    ASSERT_TRUE(a.schmidt_witness.has_value());
    EXPECT_TRUE(*a.schmidt_witness);
    EXPECT_EQ(a.n_ms, 1u);

    const auto b = classify(fx[3].state());
    EXPECT_EQ(b.n_ms, 2u);
    ASSERT_TRUE(b.thetas_equal.has_value());
    EXPECT_TRUE(*b.thetas_equal);

    EXPECT_EQ(classify(fx[4].state()).n_ms, 3u);
}

TEST(Classify, NamedStates) {
    EXPECT_EQ(classify(make_named_state(NamedState::Product)).label, ThreeQubitLabel::I);
    EXPECT_EQ(classify(make_named_state(NamedState::BellTimesPure)).label, ThreeQubitLabel::II);
    EXPECT_EQ(classify(make_named_state(NamedState::Ghz)).label, ThreeQubitLabel::IIIa);
    const auto w = classify(make_named_state(NamedState::W));
    EXPECT_EQ(w.label, ThreeQubitLabel::IIIa);
    EXPECT_FALSE(*w.schmidt_witness);
}

TEST(Classify, LocalUnitariesKeepTheClass) {
    Rng rng(67);
    const SubsystemLayout layout({2, 2, 2});
    for (const auto& f : qtest::class_fixtures()) {
        const PureState psi = f.state();
        const PureState phi = apply_local_unitary(psi, haar_local_unitaries(layout, rng));
        EXPECT_EQ(classify(phi).label, f.expected) << f.name;
    }
}

TEST(Classify, LabelsPrint) {
    EXPECT_EQ(to_string(ThreeQubitLabel::I), "I");
    EXPECT_EQ(to_string(ThreeQubitLabel::IIIb), "III-b");
}
