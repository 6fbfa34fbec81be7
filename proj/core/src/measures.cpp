#include "qcompact/measures.hpp"

#include <algorithm>
#include <cmath>

#include "linalg.hpp"

namespace qcompact {

namespace {

double sum_marginal_entropies(const MarginalSet& m, LogBase base) {
    double total = 0.0;
    for (const auto& part : m.marginals) {
        total += von_neumann_entropy(part, base);
    }
    return total;
}

void check_dense_cap(const SubsystemLayout& layout, const char* what) {
    if (layout.total_dim() > kDenseDimensionCap) {
        throw std::invalid_argument(std::string(what) + ": total dimension " +
                                    std::to_string(layout.total_dim()) + " exceeds cap " +
                                    std::to_string(kDenseDimensionCap));
    }
}

bool mixture_is_separable(const ProductMixture& sigma) {
    double total = 0.0;
    for (const auto& t : sigma.terms) {
        if (!(t.weight > 0.0) || t.kets.size() != sigma.layout.party_count()) {
            return false;
        }
        for (const auto& k : t.kets) {
            if (std::abs(k.squaredNorm() - 1.0) > 1e-10) return false;
        }
        total += t.weight;
    }
    return std::abs(total - 1.0) <= 1e-10;
}

// tr[(sigma - rho) log sigma] restricted to the support of sigma.
double contrast_line(const Mat& rho, const Mat& sigma, LogBase base, bool& support_ok) {
    const detail::HermitianEigen eig = detail::hermitian_eigen(sigma);
    double value = 0.0;
    double leak = 0.0;
    for (Eigen::Index k = 0; k < eig.values.size(); ++k) {
        const auto e = eig.vectors.col(k);
        const double rho_kk = std::real(e.dot(rho * e));
        if (eig.values(k) <= 1e-12) {
            leak += rho_kk;
            continue;
        }
        value += (eig.values(k) - rho_kk) * log_in(eig.values(k), base);
    }
    support_ok = leak <= 1e-10;
    return support_ok ? value : kInfinity;
}

}  // namespace

double correlation_information(const PureState& state, LogBase base) {
    return sum_marginal_entropies(marginals(state), base);
}

double correlation_information(const DensityMatrix& rho, LogBase base) {
    return sum_marginal_entropies(marginals(rho), base) - von_neumann_entropy(rho, base);
}

MembershipReport verify_membership(const DensityMatrix& rho, const ProductMixture& sigma,
                                   LogBase base) {
    if (!(rho.layout() == sigma.layout)) {
        throw std::invalid_argument("verify_membership: layouts differ");
    }
    check_dense_cap(rho.layout(), "verify_membership");

    MembershipReport r;
    r.base = base;
    r.separable_by_construction = mixture_is_separable(sigma);

    const MarginalSet m = marginals(rho);
    for (std::size_t p = 0; p < rho.party_count(); ++p) {
        r.marginal_residual = std::max(
            r.marginal_residual, detail::max_abs_diff(sigma.marginal(p), m.marginals[p].entries()));
    }

    const Mat sig = sigma.density();
    const Mat prod = uncorrelated_product(m, rho.layout()).entries();
    const Mat& rh = rho.entries();

    r.entropy_rho = von_neumann_entropy(rh, base);
    r.entropy_sigma = von_neumann_entropy(sig, base);
    r.entropy_product = von_neumann_entropy(prod, base);
    r.rel_rho_sigma = relative_entropy(rh, sig, base);
    r.rel_sigma_product = relative_entropy(sig, prod, base);
    r.rel_rho_product = relative_entropy(rh, prod, base);

    r.contrast_line_residual = std::abs(contrast_line(rh, sig, base, r.support_ok));
    if (std::isinf(r.rel_rho_sigma) || std::isinf(r.rel_sigma_product) ||
        std::isinf(r.rel_rho_product)) {
        r.support_ok = false;
    }
    if (r.support_ok) {
        r.additivity_residual =
            std::abs(r.rel_rho_sigma + r.rel_sigma_product - r.rel_rho_product);
        r.entropy_gap_residual = std::abs(r.rel_rho_sigma - (r.entropy_sigma - r.entropy_rho));
    } else {
        r.contrast_line_residual = kInfinity;
        r.additivity_residual = kInfinity;
        r.entropy_gap_residual = kInfinity;
    }
    return r;
}

MembershipReport verify_membership(const PureState& state, const ProductMixture& sigma,
                                   LogBase base) {
    check_dense_cap(state.layout(), "verify_membership");
    return verify_membership(DensityMatrix(state), sigma, base);
}

PureMeasureResult entanglement_pure(const PureState& state, std::span<const Ordering> orderings,
                                    LogBase base) {
    if (state.party_count() < 2) {
        throw std::invalid_argument("entanglement_pure: need at least two parties");
    }
    if (orderings.empty()) {
        throw std::invalid_argument("entanglement_pure: no orderings given");
    }
    PureMeasureResult out;
    out.base = base;
    std::optional<std::size_t> best;
    for (std::size_t k = 0; k < orderings.size(); ++k) {
        DecompositionTree tree = compact_decomposition(state, orderings[k]);
        const double h = shannon_entropy(tree.leaf_weights(), base);
        out.per_ordering.push_back(OrderingEntropy{orderings[k], h});
        out.degenerate = out.degenerate || tree.degenerate;
        if (!best || h < out.value - 1e-12) {
            best = k;
            out.value = h;
            out.tree = std::move(tree);
        }
    }
    out.argmin_ordering = orderings[*best];
    out.sigma = decohere(out.tree);

    const MarginalSet m = marginals(state);
    out.correlation_rho = sum_marginal_entropies(m, base);
    double sigma_marginals = 0.0;
    for (std::size_t p = 0; p < state.party_count(); ++p) {
        sigma_marginals += von_neumann_entropy(out.sigma.marginal(p), base);
    }
    out.correlation_sigma = sigma_marginals - shannon_entropy(out.sigma.weights(), base);
    return out;
}

PureMeasureResult entanglement_pure(const PureState& state, LogBase base) {
    const auto orderings = enumerate_orderings(state.layout());
    return entanglement_pure(state, orderings, base);
}

double entanglement_value(const PureState& state, LogBase base) {
    double best = kInfinity;
    for (const auto& o : enumerate_orderings(state.layout())) {
        best = std::min(best, shannon_entropy(compact_decomposition(state, o).leaf_weights(), base));
    }
    return best;
}

namespace {

double nested_level(const std::vector<Branch>& level, LogBase base) {
    std::vector<double> w;
    double below = 0.0;
    for (const auto& b : level) {
        w.push_back(b.weight);
        if (!b.children.empty()) {
            below += b.weight * nested_level(b.children, base);
        }
    }
    return shannon_entropy(w, base) + below;
}

void nested_terms(const std::vector<Branch>& level, double path_weight, std::size_t depth,
                  LogBase base, std::vector<double>& terms) {
    if (terms.size() <= depth) terms.resize(depth + 1, 0.0);
    std::vector<double> w;
    for (const auto& b : level) w.push_back(b.weight);
    terms[depth] += path_weight * shannon_entropy(w, base);
    for (const auto& b : level) {
        if (!b.children.empty()) {
            nested_terms(b.children, path_weight * b.weight, depth + 1, base, terms);
        }
    }
}

}  // namespace

double nested_entropy(const DecompositionTree& tree, LogBase base) {
    return nested_level(tree.roots, base);
}

std::vector<double> nested_entropy_terms(const DecompositionTree& tree, LogBase base) {
    std::vector<double> terms(tree.ordering.parties.size() - 1, 0.0);
    nested_terms(tree.roots, 1.0, 0, base, terms);
    return terms;
}

}  // namespace qcompact
