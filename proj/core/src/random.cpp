#include "qcompact/random.hpp"

#include <cmath>

namespace qcompact {

Mat ginibre(std::size_t rows, std::size_t cols, Rng& rng) {
    // Real and imaginary parts each N(0, 1/2) so that E|z|^2 = 1.
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    Mat g(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index j = 0; j < g.cols(); ++j) {
        for (Eigen::Index i = 0; i < g.rows(); ++i) {
            const double re = normal(rng);
            const double im = normal(rng);
            g(i, j) = cplx(re, im);
        }
    }
    return g;
}

Mat haar_random_unitary(std::size_t d, Rng& rng) {
    const Mat z = ginibre(d, d, rng);
    Eigen::HouseholderQR<Mat> qr(z);
    Mat q = qr.householderQ();
    const Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index k = 0; k < q.cols(); ++k) {
        const cplx diag = r(k, k);
        const double mag = std::abs(diag);
        if (mag > 0.0) {
            q.col(k) *= diag / mag;
        }
    }
    return q;
}

PureState haar_random_state(const SubsystemLayout& layout, Rng& rng) {
    Vec amps = ginibre(layout.total_dim(), 1, rng).col(0);
    amps /= amps.norm();
    return PureState(layout, std::move(amps));
}

PureState haar_random_state(const SubsystemLayout& layout, std::uint64_t seed) {
    Rng rng(seed);
    return haar_random_state(layout, rng);
}

DensityMatrix haar_random_density(const SubsystemLayout& layout, std::size_t rank, Rng& rng) {
    if (rank < 1 || rank > layout.total_dim()) {
        throw std::invalid_argument("haar_random_density: rank " + std::to_string(rank) +
                                    " outside [1, " + std::to_string(layout.total_dim()) + "]");
    }
    const Mat g = ginibre(layout.total_dim(), rank, rng);
    Mat rho = g * g.adjoint();
    rho /= rho.trace().real();
    rho = 0.5 * (rho + rho.adjoint());
    return DensityMatrix(layout, std::move(rho));
}

DensityMatrix haar_random_density(const SubsystemLayout& layout, std::size_t rank,
                                  std::uint64_t seed) {
    Rng rng(seed);
    return haar_random_density(layout, rank, rng);
}

std::vector<Mat> haar_local_unitaries(const SubsystemLayout& layout, Rng& rng) {
    std::vector<Mat> out;
    for (std::size_t p = 0; p < layout.party_count(); ++p) {
        out.push_back(haar_random_unitary(layout.dim(p), rng));
    }
    return out;
}

}  // namespace qcompact
