#pragma once

// Internal numerical helpers shared by the core sources.

#include <vector>

#include "qcompact/tensor.hpp"

namespace qcompact::detail {

struct HermitianEigen {
    Eigen::VectorXd values;  // descending
    Mat vectors;             // columns match values
};

/// Eigen-decomposition of a Hermitian matrix, eigenvalues sorted descending.
HermitianEigen hermitian_eigen(const Mat& h);

/// Largest elementwise |a - b|.
double max_abs_diff(const Mat& a, const Mat& b);

/// Rotates v so that its largest-magnitude entry (lowest index on ties) is
/// real and positive; returns the phase factor that was applied.
cplx fix_phase(Eigen::Ref<Vec> v);

/// Nearest-neighbour hopping matrix sum_k |k><k+1| + h.c. (sigma_x for d = 2).
Mat hopping_operator(std::size_t d);

/// Unit vector orthogonal to a unit qubit vector.
Vec qubit_complement(const Vec& v);

struct SchmidtFactors {
    std::vector<double> weights;  // squared singular values, descending, > prune
    Mat left;                     // columns: left kets
    Mat right;                    // columns: right kets
    double pruned_weight = 0.0;   // total weight dropped below the prune threshold
    bool degenerate = false;      // some kept weights coincide
};

inline constexpr double kPruneThreshold = 1e-12;
inline constexpr double kDegeneracyTolerance = 1e-10;

/// Schmidt factors of the coefficient matrix m (rows: left index, cols: right
/// index) so that m = sum_i sqrt(w_i) left_i right_i^T. Weights are not
/// renormalized. Degenerate groups are resolved by diagonalizing the hopping
/// operator projected into the group; each left ket then gets fix_phase and
/// the right ket is recomputed from it.
SchmidtFactors schmidt_factors(const Mat& m);

/// Row-major reshape of amplitudes into a (rows x cols) coefficient matrix.
Mat as_matrix(const Vec& amplitudes, std::size_t rows, std::size_t cols);

/// S(rho||sigma(x)) for the product-mixture parametrization used by the E_R
/// estimator, with its analytic gradient when `gradient` is non-null.
double relative_entropy_objective_for_test(const DensityMatrix& rho, std::size_t components,
                                           const std::vector<double>& x,
                                           std::vector<double>* gradient);

}  // namespace qcompact::detail
