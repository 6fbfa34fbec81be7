#pragma once

// Convex-roof extension of E^c to mixed states: the minimum over ensemble
// representations rho = sum_a p_a |psi_a><psi_a| of the average pure-state
// E^c. Ensembles are parametrized by m x r isometries V acting on the
// scaled eigenvectors of rho.

#include <cstdint>
#include <vector>

#include "qcompact/measures.hpp"
#include "qcompact/tensor.hpp"

namespace qcompact {

struct EnsembleDecomposition {
    std::vector<double> weights;
    std::vector<PureState> states;
    Mat isometry;  // m x r, orthonormal columns

    /// sum_a p_a |psi_a><psi_a|
    Mat assemble() const;
};

/// Ensemble generated by V from rho's eigen-decomposition. Members with
/// weight below 1e-10 are dropped. Throws std::invalid_argument when V has
/// the wrong number of columns (must equal the numerical rank of rho), fewer
/// rows than columns, or V^dagger V deviates from identity by more than 1e-10.
EnsembleDecomposition ensemble_from_isometry(const DensityMatrix& rho, const Mat& isometry);

/// Numerical rank used for the ensemble parametrization (eigenvalues above
/// 1e-10 times the largest).
std::size_t ensemble_rank(const DensityMatrix& rho);

/// Weighted average of entanglement_pure over the ensemble.
double ensemble_average(const EnsembleDecomposition& ensemble, LogBase base = LogBase::Two);

struct RoofConfig {
    std::size_t ensemble_size = 0;  // m; 0 means 2 * rank
    std::size_t restarts = 8;       // including the eigen-ensemble start
    std::size_t max_iters = 500;
    std::uint64_t seed = 1;
    double tol = 1e-8;
    std::size_t threads = 1;
    LogBase base = LogBase::Two;

    /// Throws std::invalid_argument for out-of-range settings.
    void validate() const;
};

struct RoofRestart {
    double start_value = 0.0;
    double value = 0.0;
    bool converged = false;
    std::size_t iterations = 0;
    /// Best-so-far objective after each accepted iteration.
    std::vector<double> trace;
};

struct RoofResult {
    LogBase base = LogBase::Two;
    double value = 0.0;  // an upper bound on the roof; the minimum is not certified
    EnsembleDecomposition best_ensemble;
    std::size_t ensemble_size = 0;
    std::size_t rank = 0;
    std::size_t restarts_used = 0;
    std::size_t best_restart = 0;
    double eigen_ensemble_value = 0.0;
    std::vector<RoofRestart> restarts;

    std::vector<bool> converged_flags() const;
};

/// Multistart local minimization of the ensemble-averaged E^c. Restart 0
/// starts from the eigen-ensemble; the others from Haar-random isometries
/// drawn from a stream seeded with config.seed. Results do not depend on
/// config.threads. Throws std::invalid_argument above kDenseDimensionCap.
RoofResult roof_minimize(const DensityMatrix& rho, const RoofConfig& config = {});

/// Entanglement of formation of a two-qubit state from the concurrence.
/// Throws std::invalid_argument unless dims are [2, 2].
double wootters_ef(const DensityMatrix& rho, LogBase base = LogBase::Two);
double concurrence(const DensityMatrix& rho);

}  // namespace qcompact
