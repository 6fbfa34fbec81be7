#pragma once

#include <cstdint>
#include <random>

#include "qcompact/tensor.hpp"

namespace qcompact {

/// Seeded generator passed explicitly; no hidden global state.
using Rng = std::mt19937_64;

/// Complex matrix with i.i.d. standard complex Gaussian entries.
Mat ginibre(std::size_t rows, std::size_t cols, Rng& rng);

/// Haar-distributed d x d unitary (QR of a Ginibre matrix with phase fix).
Mat haar_random_unitary(std::size_t d, Rng& rng);

PureState haar_random_state(const SubsystemLayout& layout, Rng& rng);
PureState haar_random_state(const SubsystemLayout& layout, std::uint64_t seed);

/// rho = G G^dagger / tr(G G^dagger) with G total_dim x rank Gaussian.
/// Throws std::invalid_argument unless 1 <= rank <= total_dim.
DensityMatrix haar_random_density(const SubsystemLayout& layout, std::size_t rank, Rng& rng);
DensityMatrix haar_random_density(const SubsystemLayout& layout, std::size_t rank,
                                  std::uint64_t seed);

/// One Haar unitary per party of the layout.
std::vector<Mat> haar_local_unitaries(const SubsystemLayout& layout, Rng& rng);

}  // namespace qcompact
