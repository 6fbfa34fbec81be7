#include <gtest/gtest.h>

#include <cmath>

#include "helpers.hpp"
#include "linalg.hpp"
#include "qcompact/measures.hpp"
#include "qcompact/random.hpp"
#include "qcompact/three_qubit.hpp"

using namespace qcompact;
using qtest::basis_ket;

namespace {

ProductMixture plus_minus_mixture(double p) {
    const Vec plus = (basis_ket("0") + basis_ket("1")) / std::sqrt(2.0);
    const Vec minus = (basis_ket("0") - basis_ket("1")) / std::sqrt(2.0);
    ProductMixture sigma{SubsystemLayout({2, 2, 2}), {}};
    sigma.terms.push_back({p, {plus, plus, plus}});
    sigma.terms.push_back({1.0 - p, {minus, minus, minus}});
    return sigma;
}

}  // namespace

TEST(Ec, GoldenValues) {
    EXPECT_NEAR(entanglement_value(make_named_state(NamedState::Ghz)), 1.0, 1e-12);
    EXPECT_NEAR(entanglement_value(make_named_state(NamedState::Eq8Max)), 2.0, 1e-12);
    EXPECT_NEAR(entanglement_value(make_named_state(NamedState::Product)), 0.0, 1e-14);
    EXPECT_NEAR(entanglement_value(make_named_state(NamedState::W)), std::log2(3.0), 1e-12);
    EXPECT_NEAR(entanglement_value(make_named_state(NamedState::BellTimesPure)), 1.0, 1e-12);
    // computational-basis GHZ is the eq8 state up to a Hadamard on every party; the
    // degenerate spectrum is resolved into |+>,|-> so the trees are those of eq8
    EXPECT_NEAR(entanglement_value(qtest::qubits(basis_ket("000") + basis_ket("111"))), 2.0,
                1e-12);
}

TEST(Ec, GhzFamilyAcrossPartyCounts) {
    for (std::size_t n = 2; n <= 6; ++n) {
        EXPECT_NEAR(entanglement_value(make_named_state(NamedState::Ghz, n)), 1.0, 1e-12) << n;
    }
}

TEST(Ec, Eq8OrderingsAgree) {
    const auto r = entanglement_pure(make_named_state(NamedState::Eq8Max));
    ASSERT_EQ(r.per_ordering.size(), 3u);
    for (const auto& o : r.per_ordering) EXPECT_NEAR(o.entropy, 2.0, 1e-12);
    const auto terms = nested_entropy_terms(r.tree);
    ASSERT_EQ(terms.size(), 2u);
    EXPECT_NEAR(terms[0], 1.0, 1e-12);
    EXPECT_NEAR(terms[1], 1.0, 1e-12);
}

TEST(Ec, ArgminTieKeepsFirstOrdering) {
    const auto r = entanglement_pure(make_named_state(NamedState::Ghz));
    EXPECT_EQ(r.argmin_ordering, Ordering::identity(3));
}

TEST(Ec, ArgminPicksCheapestOrdering) {
    // A is product with BC; peeling B first costs more than peeling A
    const auto r = entanglement_pure(make_named_state(NamedState::BellTimesPure));
    const auto& layout = r.tree.layout;
    EXPECT_NEAR(r.value, 1.0, 1e-12);
    for (const auto& o : r.per_ordering) {
        if (o.ordering.to_string(layout) == "ABC") EXPECT_NEAR(o.entropy, 1.0, 1e-12);
    }
}

TEST(Ec, NestedEntropyEqualsFlatEntropy) {
    Rng rng(17);
    for (const auto& dims : std::vector<std::vector<std::size_t>>{{2, 2, 2}, {2, 3, 2}, {2, 2, 2, 2}}) {
        const SubsystemLayout layout(dims);
        for (int t = 0; t < 10; ++t) {
            const PureState psi = haar_random_state(layout, rng);
            for (const auto& o : enumerate_orderings(layout)) {
                const auto tree = compact_decomposition(psi, o);
                const double flat = shannon_entropy(tree.leaf_weights());
                EXPECT_NEAR(nested_entropy(tree), flat, 1e-10);
                double sum = 0.0;
                for (double x : nested_entropy_terms(tree)) sum += x;
                EXPECT_NEAR(sum, flat, 1e-10);
            }
        }
    }
}

TEST(Ec, BipartiteEqualsEntanglementEntropy) {
    Rng rng(23);
    for (std::size_t da = 2; da <= 4; ++da) {
        for (std::size_t db = 2; db <= 4; ++db) {
            const SubsystemLayout layout({da, db});
            for (int t = 0; t < 10; ++t) {
                const PureState psi = haar_random_state(layout, rng);
                const Mat red = qtest::brute_partial_trace(psi.projector(), {da, db}, {0});
                Eigen::SelfAdjointEigenSolver<Mat> es(red);
                double s = 0.0;
                for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
                    const double l = es.eigenvalues()(i);
                    if (l > 1e-15) s -= l * std::log2(l);
                }
                EXPECT_NEAR(entanglement_value(psi), s, 1e-10);
            }
        }
    }
}

TEST(Ec, LogBaseScaling) {
    const PureState psi = haar_random_state(SubsystemLayout({2, 2, 2}), std::uint64_t{4});
    EXPECT_NEAR(entanglement_value(psi, LogBase::E), entanglement_value(psi) * std::log(2.0),
                1e-12);
}

TEST(Ec, BoundsAndLocalUnitaryInvariance) {
    Rng rng(29);
    for (std::size_t n = 2; n <= 5; ++n) {
        const SubsystemLayout layout(std::vector<std::size_t>(n, 2));
        for (int t = 0; t < 5; ++t) {
            const PureState psi = haar_random_state(layout, rng);
            const double e = entanglement_value(psi);
            EXPECT_GE(e, 0.0);
            EXPECT_LE(e, static_cast<double>(n - 1) + 1e-12);
            const PureState phi = apply_local_unitary(psi, haar_local_unitaries(layout, rng));
            EXPECT_NEAR(entanglement_value(phi), e, 1e-8);
        }
    }
}

TEST(Correlation, GhzValues) {
    const PureState ghz = make_named_state(NamedState::Ghz);
    EXPECT_NEAR(correlation_information(ghz), 3.0, 1e-12);
    const auto r = entanglement_pure(ghz);
    EXPECT_NEAR(r.correlation_rho, 3.0, 1e-12);
    EXPECT_NEAR(r.correlation_sigma, 2.0, 1e-12);
    EXPECT_NEAR(correlation_information(DensityMatrix(ghz)), 3.0, 1e-10);
}

TEST(Membership, FrozenCounterexample) {
    // sigma shares support with GHZ but has the wrong marginals
    const auto r = verify_membership(make_named_state(NamedState::Ghz), plus_minus_mixture(0.6));
    EXPECT_TRUE(r.support_ok);
    EXPECT_NEAR(r.marginal_residual, 0.1, 1e-12);
    EXPECT_NEAR(r.contrast_line_residual, 0.05849625007211562, 1e-10);
    EXPECT_FALSE(r.within(1e-8));
}

TEST(Membership, BalancedMixturePasses) {
    const auto r = verify_membership(make_named_state(NamedState::Ghz), plus_minus_mixture(0.5));
    EXPECT_TRUE(r.within(1e-10));
    EXPECT_NEAR(r.rel_rho_sigma, 1.0, 1e-10);
    EXPECT_NEAR(r.rel_rho_product, 3.0, 1e-10);
    EXPECT_NEAR(r.rel_sigma_product, 2.0, 1e-10);
}

TEST(Membership, SupportLeakIsInfinite) {
    ProductMixture sigma{SubsystemLayout({2, 2, 2}), {}};
    sigma.terms.push_back({1.0, {basis_ket("0"), basis_ket("0"), basis_ket("0")}});
    const auto r = verify_membership(make_named_state(NamedState::Ghz), sigma);
    EXPECT_FALSE(r.support_ok);
    EXPECT_EQ(r.rel_rho_sigma, kInfinity);
    EXPECT_FALSE(r.within(1.0));
}

TEST(Membership, EveryOrderingOnRandomStates) {
    Rng rng(37);
    for (const auto& dims : std::vector<std::vector<std::size_t>>{{2, 2, 2}, {3, 2, 2}, {2, 2, 2, 2}}) {
        const SubsystemLayout layout(dims);
        for (int t = 0; t < 5; ++t) {
            const PureState psi = haar_random_state(layout, rng);
            for (const auto& o : enumerate_orderings(layout)) {
                const auto sigma = decohere(compact_decomposition(psi, o));
                const auto r = verify_membership(psi, sigma);
                EXPECT_TRUE(r.within(1e-8)) << o.to_string(layout);
                EXPECT_LT(r.entropy_gap_residual, 1e-8);
                EXPECT_NEAR(r.rel_rho_sigma, shannon_entropy(sigma.weights()), 1e-8);
            }
        }
    }
}

TEST(Membership, Errors) {
    const PureState big = haar_random_state(SubsystemLayout(std::vector<std::size_t>(7, 2)),
                                            std::uint64_t{1});
    const auto sigma = decohere(compact_decomposition(big, Ordering::identity(7)));
    EXPECT_THROW(verify_membership(big, sigma), std::invalid_argument);
    EXPECT_THROW(verify_membership(make_named_state(NamedState::Ghz, 4), plus_minus_mixture(0.5)),
                 std::invalid_argument);
}

TEST(RelativeEntropyObjective, GradientMatchesFiniteDifferences) {
    Rng rng(41);
    const SubsystemLayout layout({2, 2});
    const DensityMatrix rho = haar_random_density(layout, 2, rng);
    const std::size_t k = 6;
    const std::size_t n = k * (1 + 4 + 4);
    std::normal_distribution<double> g;
    std::vector<double> x(n);
    for (auto& v : x) v = g(rng);
    std::vector<double> grad;
    detail::relative_entropy_objective_for_test(rho, k, x, &grad);
    ASSERT_EQ(grad.size(), n);
    const double h = 1e-6;
    for (std::size_t i = 0; i < n; ++i) {
        auto up = x, down = x;
        up[i] += h;
        down[i] -= h;
        const double fd = (detail::relative_entropy_objective_for_test(rho, k, up, nullptr) -
                           detail::relative_entropy_objective_for_test(rho, k, down, nullptr)) /
                          (2 * h);
        EXPECT_NEAR(grad[i], fd, 1e-5 * std::max(1.0, std::abs(fd))) << i;
    }
}

TEST(RelativeEntropyEstimate, BoundedByEcAndTightOnBipartite) {
    Rng rng(43);
    const SubsystemLayout layout({2, 2});
    for (int t = 0; t < 3; ++t) {
        const PureState psi = haar_random_state(layout, rng);
        const double ec = entanglement_value(psi);
        const auto est = relative_entropy_of_entanglement_estimate(psi);
        EXPECT_LE(est.value, ec + 1e-9);
        // E_R equals the entanglement entropy on pure bipartite states
        EXPECT_GE(est.value, ec - 1e-6);
    }
}

TEST(RelativeEntropyEstimate, ThreeQubitUpperBound) {
    const PureState psi = haar_random_state(SubsystemLayout({2, 2, 2}), std::uint64_t{47});
    const auto est = relative_entropy_of_entanglement_estimate(psi);
    EXPECT_LE(est.value, entanglement_value(psi) + 1e-9);
    EXPECT_LE(est.value, est.compact_seed_value + 1e-12);
    EXPECT_GE(est.value, 0.0);
}

TEST(RelativeEntropyEstimate, ProductStateIsNearZero) {
    const auto est = relative_entropy_of_entanglement_estimate(make_named_state(NamedState::Product));
    EXPECT_NEAR(est.value, 0.0, 1e-8);
}
