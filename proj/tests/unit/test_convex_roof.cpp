#include <gtest/gtest.h>

#include <cmath>

#include "helpers.hpp"
#include "qcompact/convex_roof.hpp"
#include "qcompact/random.hpp"
#include "qcompact/three_qubit.hpp"

using namespace qcompact;
using qtest::basis_ket;

namespace {

const SubsystemLayout kTwoQubits({2, 2});

DensityMatrix bell_mixture(double p) {
    const Vec bell = (basis_ket("00") + basis_ket("11")) / std::sqrt(2.0);
    return DensityMatrix(kTwoQubits,
                         p * bell * bell.adjoint() + (1.0 - p) * Mat::Identity(4, 4) / 4.0);
}

double binary_entropy(double x) { return -x * std::log2(x) - (1 - x) * std::log2(1 - x); }

}  // namespace

TEST(Wootters, KnownStates) {
    EXPECT_NEAR(wootters_ef(bell_mixture(1.0)), 1.0, 1e-12);
    EXPECT_NEAR(concurrence(bell_mixture(1.0)), 1.0, 1e-12);
    EXPECT_NEAR(wootters_ef(bell_mixture(0.0)), 0.0, 1e-12);
    EXPECT_NEAR(wootters_ef(bell_mixture(1.0 / 3.0)), 0.0, 1e-12);
    EXPECT_NEAR(wootters_ef(DensityMatrix(PureState(kTwoQubits, basis_ket("01")))), 0.0, 1e-12);
}

TEST(Wootters, WernerClosedForm) {
    for (double p : {0.5, 0.7, 0.9}) {
        const double c = (3 * p - 1) / 2;
        const double ef = binary_entropy((1 + std::sqrt(1 - c * c)) / 2);
        EXPECT_NEAR(concurrence(bell_mixture(p)), c, 1e-12);
        EXPECT_NEAR(wootters_ef(bell_mixture(p)), ef, 1e-12);
    }
}

TEST(Wootters, PureStatesMatchEntanglementEntropy) {
    Rng rng(71);
    for (int t = 0; t < 10; ++t) {
        const PureState psi = haar_random_state(kTwoQubits, rng);
        EXPECT_NEAR(wootters_ef(DensityMatrix(psi)), entanglement_value(psi), 1e-7);
    }
}

TEST(Wootters, RejectsOtherDims) {
    const DensityMatrix rho(SubsystemLayout({2, 3}), Mat::Identity(6, 6) / 6.0);
    EXPECT_THROW(wootters_ef(rho), std::invalid_argument);
}

TEST(Ensemble, ReassemblesRho) {
    Rng rng(73);
    const SubsystemLayout layout({2, 3});
    for (std::size_t rank = 1; rank <= 4; ++rank) {
        const DensityMatrix rho = haar_random_density(layout, rank, rng);
        EXPECT_EQ(ensemble_rank(rho), rank);
        const Mat g = ginibre(2 * rank + 1, rank, rng);
        const Mat v = Eigen::HouseholderQR<Mat>(g).householderQ() * Mat::Identity(2 * rank + 1, rank);
        const auto e = ensemble_from_isometry(rho, v);
        EXPECT_LT(qtest::max_diff(e.assemble(), rho.entries()), 1e-12);
        double total = 0.0;
        for (double w : e.weights) total += w;
        EXPECT_NEAR(total, 1.0, 1e-12);
    }
}

TEST(Ensemble, RejectsBadIsometries) {
    const DensityMatrix rho = haar_random_density(kTwoQubits, 2, std::uint64_t{3});
    EXPECT_THROW(ensemble_from_isometry(rho, Mat::Identity(3, 3)), std::invalid_argument);
    EXPECT_THROW(ensemble_from_isometry(rho, Mat::Identity(1, 2)), std::invalid_argument);
    EXPECT_THROW(ensemble_from_isometry(rho, 2.0 * Mat::Identity(3, 2)), std::invalid_argument);
}

TEST(Roof, PureStateConsistency) {
    Rng rng(79);
    const PureState psi = haar_random_state(SubsystemLayout({2, 2, 2}), rng);
    RoofConfig cfg;
    cfg.restarts = 3;
    const auto r = roof_minimize(DensityMatrix(psi), cfg);
    EXPECT_EQ(r.rank, 1u);
    EXPECT_NEAR(r.value, entanglement_value(psi), 1e-9);
}

TEST(Roof, SeparableDiagonalIsZero) {
    Mat m = Mat::Zero(4, 4);
    m(0, 0) = 0.5;
    m(3, 3) = 0.5;
    const auto r = roof_minimize(DensityMatrix(kTwoQubits, m));
    EXPECT_NEAR(r.value, 0.0, 1e-6);
    EXPECT_NEAR(r.eigen_ensemble_value, 0.0, 1e-12);
}

TEST(Roof, NoisyBellMatchesOracle) {
    const DensityMatrix rho = bell_mixture(0.9);
    RoofConfig cfg;
    cfg.restarts = 16;
    const auto r = roof_minimize(rho, cfg);
    EXPECT_NEAR(r.value, wootters_ef(rho), 5e-3);
    EXPECT_LE(r.value, r.eigen_ensemble_value + 1e-12);
    EXPECT_LT(qtest::max_diff(r.best_ensemble.assemble(), rho.entries()), 1e-9);
}

TEST(Roof, RandomRankTwoMatchesOracle) {
    Rng rng(83);
    RoofConfig cfg;
    cfg.ensemble_size = 4;
    cfg.restarts = 32;
    for (int t = 0; t < 3; ++t) {
        const DensityMatrix rho = haar_random_density(kTwoQubits, 2, rng);
        EXPECT_NEAR(roof_minimize(rho, cfg).value, wootters_ef(rho), 5e-3);
    }
}

TEST(Roof, TracesAreMonotone) {
    const auto r = roof_minimize(haar_random_density(kTwoQubits, 2, std::uint64_t{5}));
    for (const auto& s : r.restarts) {
        for (std::size_t i = 1; i < s.trace.size(); ++i) EXPECT_LE(s.trace[i], s.trace[i - 1]);
        EXPECT_LE(s.value, s.start_value);
    }
    EXPECT_EQ(r.restarts.size(), 8u);
    EXPECT_EQ(r.ensemble_size, 4u);
}

TEST(Roof, DeterministicAcrossThreadCounts) {
    const DensityMatrix rho = haar_random_density(SubsystemLayout({2, 2, 2}), 2, std::uint64_t{7});
    RoofConfig a;
    a.restarts = 4;
    a.max_iters = 60;
    RoofConfig b = a;
    b.threads = 3;
    const auto ra = roof_minimize(rho, a);
    const auto rb = roof_minimize(rho, b);
    EXPECT_EQ(ra.value, rb.value);
    EXPECT_EQ(ra.best_restart, rb.best_restart);
    ASSERT_EQ(ra.restarts.size(), rb.restarts.size());
    for (std::size_t k = 0; k < ra.restarts.size(); ++k) {
        EXPECT_EQ(ra.restarts[k].value, rb.restarts[k].value);
        EXPECT_EQ(ra.restarts[k].trace, rb.restarts[k].trace);
    }
}

TEST(Roof, ConvexityOnSampledTriples) {
    Rng rng(89);
    RoofConfig cfg;
    cfg.restarts = 8;
    for (int t = 0; t < 2; ++t) {
        const DensityMatrix r1 = haar_random_density(kTwoQubits, 1, rng);
        const DensityMatrix r2 = haar_random_density(kTwoQubits, 2, rng);
        const double lambda = 0.3;
        const DensityMatrix mix(kTwoQubits,
                                lambda * r1.entries() + (1 - lambda) * r2.entries());
        const double lhs = roof_minimize(mix, cfg).value;
        const double rhs =
            lambda * roof_minimize(r1, cfg).value + (1 - lambda) * roof_minimize(r2, cfg).value;
        EXPECT_LE(lhs, rhs + 2e-3);
    }
}

TEST(Roof, ConfigAndCapErrors) {
    const DensityMatrix rho = bell_mixture(0.5);
    RoofConfig bad;
    bad.restarts = 0;
    EXPECT_THROW(roof_minimize(rho, bad), std::invalid_argument);
    bad = {};
    bad.tol = 0.0;
    EXPECT_THROW(roof_minimize(rho, bad), std::invalid_argument);
    bad = {};
    bad.ensemble_size = 2;  // rank 4
    EXPECT_THROW(roof_minimize(rho, bad), std::invalid_argument);
    const SubsystemLayout big(std::vector<std::size_t>(7, 2));
    const DensityMatrix large(big, Mat::Identity(128, 128) / 128.0);
    EXPECT_THROW(roof_minimize(large), std::invalid_argument);
}
