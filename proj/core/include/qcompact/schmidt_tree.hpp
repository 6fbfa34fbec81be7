#pragma once

// Bipartite Schmidt step and the continued (compact) Schmidt decomposition.
//
// A compact decomposition peels one party off per level: the first party of
// the ordering is Schmidt-decomposed against the rest, every right ket is then
// decomposed with the next party against the remainder, and so on until two
// parties remain, which share one index as in an ordinary Schmidt pair.
//
// Conventions fixed here (the construction itself leaves them open):
//  * weights are sorted descending; weights <= 1e-12 are pruned;
//  * within a degenerate group the left basis diagonalizes the projected
//    hopping operator sum_k |k><k+1| + h.c. (|+>, |-> for qubits);
//  * each left ket has its largest component real positive (lowest index on
//    ties), the compensating phase going into the right ket.

#include <optional>
#include <string>
#include <vector>

#include "qcompact/tensor.hpp"

namespace qcompact {

/// Party order for a compact decomposition. Two orderings that differ only by
/// swapping the final two parties describe the same decomposition.
struct Ordering {
    std::vector<std::size_t> parties;

    /// Same ordering with the last two parties sorted by label.
    Ordering canonical(const SubsystemLayout& layout) const;
    bool equivalent(const Ordering& other, const SubsystemLayout& layout) const;
    std::string to_string(const SubsystemLayout& layout) const;

    static Ordering identity(std::size_t n);
    /// Parses "ABC" style strings (single-character labels) or
    /// comma-separated labels "A,B,C".
    static Ordering parse(const std::string& text, const SubsystemLayout& layout);

    bool operator==(const Ordering&) const = default;
};

/// N!/2 canonical orderings in lexicographic order of party index sequences.
std::vector<Ordering> enumerate_orderings(const SubsystemLayout& layout);

struct BipartiteSchmidt {
    std::vector<double> weights;  // descending, sum ~ 1
    Mat left_kets;                // columns, over the left parties (layout order)
    Mat right_kets;               // columns, over the right parties (layout order)
    SubsystemLayout left_layout;
    SubsystemLayout right_layout;
    double pruned_weight = 0.0;
    bool degenerate = false;
};

/// psi = sum_i sqrt(w_i) |L_i> (x) |R_i>. Throws std::invalid_argument when a
/// side is empty or the split does not partition the parties.
BipartiteSchmidt bipartite_schmidt(const PureState& state, std::span<const std::size_t> left,
                                   std::span<const std::size_t> right);

/// One branch of the tree. Non-leaf branches carry the peeled party's ket and
/// the next level in `children`; leaf branches carry the kets of the final two
/// parties (`ket` for the second-to-last, `mate` for the last).
struct Branch {
    double weight = 0.0;
    Vec ket;
    Vec mate;
    std::vector<Branch> children;

    bool is_leaf() const { return children.empty() && mate.size() > 0; }
};

struct LeafPath {
    double weight = 0.0;         // product of weights along the path
    std::vector<Vec> kets;       // one per party, layout order
};

struct DecompositionTree {
    SubsystemLayout layout;
    Ordering ordering;
    std::vector<Branch> roots;
    /// Total weight discarded by pruning (before renormalization).
    double pruned_weight = 0.0;
    /// A Schmidt step met coinciding weights; the tree then is one
    /// representative chosen by the degeneracy convention.
    bool degenerate = false;

    std::vector<LeafPath> leaves() const;
    std::vector<double> leaf_weights() const;
    std::size_t leaf_count() const;
    /// d^A ... d^X min(d^Y, d^Z) for this ordering.
    std::size_t leaf_bound() const;
    /// Each non-leaf branch has exactly one child.
    bool is_diagonal() const;
};

/// Throws std::invalid_argument for fewer than two parties or an ordering that
/// is not a permutation of the layout's parties.
DecompositionTree compact_decomposition(const PureState& state, const Ordering& ordering);

/// Resums the tree.
PureState reconstruct(const DecompositionTree& tree);

struct TreeReport {
    double orthonormality_residual = 0.0;  // sibling kets
    double mate_residual = 0.0;            // complementary-block vectors
    double probability_residual = 0.0;     // per-node weight sums
    double min_weight = 0.0;
    double fidelity = 0.0;                 // |<psi|reconstruct>|^2
    std::size_t leaf_count = 0;
    std::size_t leaf_bound = 0;

    bool ok(double tol = 1e-10) const {
        return orthonormality_residual <= tol && mate_residual <= tol &&
               probability_residual <= tol && 1.0 - fidelity <= tol && leaf_count <= leaf_bound;
    }
};

TreeReport verify_tree(const DecompositionTree& tree, const PureState& state);

struct ProductTerm {
    double weight = 0.0;
    std::vector<Vec> kets;  // unit vectors, layout order
};

/// Mixture of pure product states. `decohere` produces the orthogonal mixture
/// obtained by replacing every ket of a compact decomposition with its
/// projector; other producers (the E_R estimator) need not be orthogonal.
struct ProductMixture {
    SubsystemLayout layout;
    std::vector<ProductTerm> terms;

    /// sum_t w_t P_t as a dense matrix.
    Mat density() const;
    DensityMatrix density_matrix() const { return DensityMatrix(layout, density()); }
    std::vector<double> weights() const;
    /// Single-party marginal of the mixture without building the full matrix.
    Mat marginal(std::size_t party) const;
    /// max_{s != t} |tr(P_s P_t)|
    double max_overlap() const;
};

ProductMixture decohere(const DecompositionTree& tree);

struct SchmidtDecomposability {
    std::size_t n_ms = 0;
    bool spectra_test = false;     // n_ms == 1
    bool decomposable = false;     // spectra_test and a diagonal tree exists
    std::optional<DecompositionTree> witness;
};

SchmidtDecomposability is_schmidt_decomposable(const PureState& state,
                                                const MarginalTolerances& tol = {});

}  // namespace qcompact
