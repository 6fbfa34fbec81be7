#pragma once

// Correlation information, membership checks for separable reference states,
// and the compact-decomposition entanglement measure E^c on pure states.

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "qcompact/schmidt_tree.hpp"
#include "qcompact/tensor.hpp"

namespace qcompact {

/// Largest total dimension for which operators are built explicitly.
inline constexpr std::size_t kDenseDimensionCap = 64;

/// S(rho_check) - S(rho), rho_check the product of the marginals.
double correlation_information(const PureState& state, LogBase base = LogBase::Two);
double correlation_information(const DensityMatrix& rho, LogBase base = LogBase::Two);

/// Checks a candidate separable sigma against rho:
///  (i)   sigma separable (true by construction for a product mixture),
///  (ii)  equal single-party marginals,
///  (iii) tr[(sigma - rho) log sigma] = 0,
/// and the contrast additivity S(rho||sigma) + S(sigma||rho_check) = S(rho||rho_check).
struct MembershipReport {
    LogBase base = LogBase::Two;
    bool separable_by_construction = false;
    double marginal_residual = 0.0;
    double contrast_line_residual = 0.0;
    double additivity_residual = 0.0;
    /// |S(rho||sigma) - (S(sigma) - S(rho))|
    double entropy_gap_residual = 0.0;
    double entropy_rho = 0.0;
    double entropy_sigma = 0.0;
    double entropy_product = 0.0;
    double rel_rho_sigma = 0.0;
    double rel_sigma_product = 0.0;
    double rel_rho_product = 0.0;
    /// support(rho) inside support(sigma); residuals are +inf otherwise.
    bool support_ok = true;

    bool within(double tol) const {
        return support_ok && marginal_residual <= tol && contrast_line_residual <= tol &&
               additivity_residual <= tol;
    }
};

/// Throws std::invalid_argument when the layouts differ or the total
/// dimension exceeds kDenseDimensionCap.
MembershipReport verify_membership(const DensityMatrix& rho, const ProductMixture& sigma,
                                   LogBase base = LogBase::Two);
MembershipReport verify_membership(const PureState& state, const ProductMixture& sigma,
                                   LogBase base = LogBase::Two);

struct OrderingEntropy {
    Ordering ordering;
    double entropy = 0.0;
};

struct PureMeasureResult {
    LogBase base = LogBase::Two;
    double value = 0.0;
    Ordering argmin_ordering;
    std::vector<OrderingEntropy> per_ordering;
    ProductMixture sigma;          // decohered state of the argmin ordering
    DecompositionTree tree;        // tree of the argmin ordering
    double correlation_rho = 0.0;  // C^rho
    double correlation_sigma = 0.0;  // C^sigma
    /// Some ordering met a degenerate Schmidt spectrum.
    bool degenerate = false;
};

/// Minimum over the N!/2 canonical orderings of the entropy of the decohered
/// compact decomposition (the Shannon entropy of its leaf weights). Ties keep
/// the first ordering in enumeration order.
PureMeasureResult entanglement_pure(const PureState& state, LogBase base = LogBase::Two);

/// Same minimum restricted to the given orderings.
PureMeasureResult entanglement_pure(const PureState& state, std::span<const Ordering> orderings,
                                    LogBase base = LogBase::Two);

/// Value only; used inside optimizers where the full result is not needed.
double entanglement_value(const PureState& state, LogBase base = LogBase::Two);

/// H(lambda^A) + sum lambda^A H(lambda^B|.) + ... evaluated level by level.
double nested_entropy(const DecompositionTree& tree, LogBase base = LogBase::Two);

/// Level terms of nested_entropy: entry k is the weighted average of the
/// branch entropies at depth k (entry 0 is the root entropy).
std::vector<double> nested_entropy_terms(const DecompositionTree& tree,
                                         LogBase base = LogBase::Two);

struct RelativeEntropyEstimateConfig {
    std::size_t components = 0;  // product terms; 0 means 2 * total dimension
    std::size_t restarts = 4;    // random starts besides the compact seed
    std::size_t max_iters = 300;
    std::uint64_t seed = 1;
    double tol = 1e-10;
    LogBase base = LogBase::Two;
};

struct RelativeEntropyEstimate {
    double value = 0.0;  // upper bound on E_R
    ProductMixture witness;
    double compact_seed_value = 0.0;  // S(rho||sigma_compact)
    std::vector<double> restart_values;
    bool converged = false;
};

/// Minimizes S(rho||sigma) over mixtures of `components` product pure states.
/// The decohered compact state of the argmin ordering is always evaluated, so
/// the result never exceeds S(rho||sigma_compact) for pure input.
/// Throws std::invalid_argument above kDenseDimensionCap.
RelativeEntropyEstimate relative_entropy_of_entanglement_estimate(
    const DensityMatrix& rho, const RelativeEntropyEstimateConfig& config = {});
RelativeEntropyEstimate relative_entropy_of_entanglement_estimate(
    const PureState& state, const RelativeEntropyEstimateConfig& config = {});

}  // namespace qcompact
