#include "linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qcompact::detail {

HermitianEigen hermitian_eigen(const Mat& h) {
    const Mat sym = 0.5 * (h + h.adjoint());
    Eigen::SelfAdjointEigenSolver<Mat> solver(sym);
    const auto n = sym.rows();
    HermitianEigen out;
    out.values.resize(n);
    out.vectors.resize(n, n);
    // Eigen returns ascending order.
    for (Eigen::Index k = 0; k < n; ++k) {
        out.values(k) = solver.eigenvalues()(n - 1 - k);
        out.vectors.col(k) = solver.eigenvectors().col(n - 1 - k);
    }
    return out;
}

double max_abs_diff(const Mat& a, const Mat& b) {
    if (a.size() == 0) {
        return 0.0;
    }
    return (a - b).cwiseAbs().maxCoeff();
}

cplx fix_phase(Eigen::Ref<Vec> v) {
    if (v.size() == 0) {
        return {1.0, 0.0};
    }
    const double largest = v.cwiseAbs().maxCoeff();
    if (largest == 0.0) {
        return {1.0, 0.0};
    }
    Eigen::Index pick = 0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v(i)) >= largest - 1e-10) {
            pick = i;
            break;
        }
    }
    const cplx phase = std::conj(v(pick)) / std::abs(v(pick));
    v *= phase;
    v(pick) = std::abs(v(pick));
    return phase;
}

Mat hopping_operator(std::size_t d) {
    Mat x = Mat::Zero(d, d);
    for (std::size_t k = 0; k + 1 < d; ++k) {
        x(k, k + 1) = 1.0;
        x(k + 1, k) = 1.0;
    }
    return x;
}

Vec qubit_complement(const Vec& v) {
    Vec out(2);
    out(0) = -std::conj(v(1));
    out(1) = std::conj(v(0));
    return out;
}

Mat as_matrix(const Vec& amplitudes, std::size_t rows, std::size_t cols) {
    using RowMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    return Eigen::Map<const RowMat>(amplitudes.data(), static_cast<Eigen::Index>(rows),
                                    static_cast<Eigen::Index>(cols));
}

SchmidtFactors schmidt_factors(const Mat& m) {
    Eigen::JacobiSVD<Mat, Eigen::ColPivHouseholderQRPreconditioner> svd(
        m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sv = svd.singularValues();

    SchmidtFactors out;
    std::vector<Eigen::Index> kept;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        const double w = sv(i) * sv(i);
        if (w > kPruneThreshold) {
            kept.push_back(i);
            out.weights.push_back(w);
        } else {
            out.pruned_weight += w;
        }
    }
    const auto k = static_cast<Eigen::Index>(kept.size());
    Mat left(m.rows(), k);
    for (Eigen::Index j = 0; j < k; ++j) {
        left.col(j) = svd.matrixU().col(kept[static_cast<std::size_t>(j)]);
    }

    // Resolve degenerate groups with the fixed reference operator.
    const Mat hop = hopping_operator(static_cast<std::size_t>(m.rows()));
    Eigen::Index start = 0;
    while (start < k) {
        Eigen::Index end = start + 1;
        while (end < k && std::abs(out.weights[static_cast<std::size_t>(end - 1)] -
                                   out.weights[static_cast<std::size_t>(end)]) <=
                              kDegeneracyTolerance) {
            ++end;
        }
        if (end - start > 1) {
            out.degenerate = true;
            const Mat block = left.middleCols(start, end - start);
            const HermitianEigen rot = hermitian_eigen(block.adjoint() * hop * block);
            left.middleCols(start, end - start) = block * rot.vectors;
            // Put the group on a common weight so the reconstruction stays exact.
            double mean = 0.0;
            for (Eigen::Index j = start; j < end; ++j) {
                mean += out.weights[static_cast<std::size_t>(j)];
            }
            mean /= static_cast<double>(end - start);
            for (Eigen::Index j = start; j < end; ++j) {
                out.weights[static_cast<std::size_t>(j)] = mean;
            }
        }
        start = end;
    }

    out.right.resize(m.cols(), k);
    for (Eigen::Index j = 0; j < k; ++j) {
        fix_phase(left.col(j));
        const double s = std::sqrt(out.weights[static_cast<std::size_t>(j)]);
        // m = sum_j s_j l_j r_j^T  =>  r_j = m^T conj(l_j) / s_j
        out.right.col(j) = m.transpose() * left.col(j).conjugate() / s;
    }
    out.left = std::move(left);
    return out;
}

}  // namespace qcompact::detail
