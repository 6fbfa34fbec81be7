#include "qcompact/schmidt_tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "linalg.hpp"

namespace qcompact {

// --- orderings -------------------------------------------------------------

namespace {

void check_permutation(const Ordering& o, std::size_t n) {
    if (o.parties.size() != n) {
        throw std::invalid_argument("ordering has " + std::to_string(o.parties.size()) +
                                    " parties, layout has " + std::to_string(n));
    }
    std::vector<bool> seen(n, false);
    for (const auto p : o.parties) {
        if (p >= n || seen[p]) {
            throw std::invalid_argument("ordering is not a permutation of the layout's parties");
        }
        seen[p] = true;
    }
}

}  // namespace

Ordering Ordering::canonical(const SubsystemLayout& layout) const {
    Ordering out = *this;
    const std::size_t n = out.parties.size();
    if (n >= 2 && layout.label(out.parties[n - 1]) < layout.label(out.parties[n - 2])) {
        std::swap(out.parties[n - 1], out.parties[n - 2]);
    }
    return out;
}

bool Ordering::equivalent(const Ordering& other, const SubsystemLayout& layout) const {
    return canonical(layout) == other.canonical(layout);
}

std::string Ordering::to_string(const SubsystemLayout& layout) const {
    bool single_char = true;
    for (const auto p : parties) {
        single_char = single_char && layout.label(p).size() == 1;
    }
    std::string out;
    for (std::size_t k = 0; k < parties.size(); ++k) {
        if (!single_char && k > 0) out += ",";
        out += layout.label(parties[k]);
    }
    return out;
}

Ordering Ordering::identity(std::size_t n) {
    Ordering o;
    o.parties.resize(n);
    std::iota(o.parties.begin(), o.parties.end(), std::size_t{0});
    return o;
}

Ordering Ordering::parse(const std::string& text, const SubsystemLayout& layout) {
    Ordering o;
    if (text.find(',') != std::string::npos) {
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ',')) {
            o.parties.push_back(layout.index_of(item));
        }
    } else {
        for (const char c : text) {
            o.parties.push_back(layout.index_of(std::string(1, c)));
        }
    }
    check_permutation(o, layout.party_count());
    return o;
}

std::vector<Ordering> enumerate_orderings(const SubsystemLayout& layout) {
    const std::size_t n = layout.party_count();
    if (n < 2) {
        throw std::invalid_argument("enumerate_orderings: need at least two parties");
    }
    std::vector<Ordering> out;
    Ordering o = Ordering::identity(n);
    do {
        if (layout.label(o.parties[n - 2]) < layout.label(o.parties[n - 1])) {
            out.push_back(o);
        }
    } while (std::next_permutation(o.parties.begin(), o.parties.end()));
    return out;
}

// --- bipartite step --------------------------------------------------------

BipartiteSchmidt bipartite_schmidt(const PureState& state, std::span<const std::size_t> left,
                                   std::span<const std::size_t> right) {
    const auto& layout = state.layout();
    if (left.empty() || right.empty()) {
        throw std::invalid_argument("bipartite_schmidt: both sides of the split must be nonempty");
    }
    std::vector<std::size_t> l(left.begin(), left.end());
    std::vector<std::size_t> r(right.begin(), right.end());
    std::sort(l.begin(), l.end());
    std::sort(r.begin(), r.end());
    std::vector<std::size_t> perm = l;
    perm.insert(perm.end(), r.begin(), r.end());
    check_permutation(Ordering{perm}, layout.party_count());

    BipartiteSchmidt out;
    out.left_layout = layout.subset(l);
    out.right_layout = layout.subset(r);
    const Vec moved = permute_axes(state.amplitudes(), layout.dims(), perm);
    const Mat m = detail::as_matrix(moved, out.left_layout.total_dim(), out.right_layout.total_dim());
    auto f = detail::schmidt_factors(m);
    out.weights = std::move(f.weights);
    out.left_kets = std::move(f.left);
    out.right_kets = std::move(f.right);
    out.pruned_weight = f.pruned_weight;
    out.degenerate = f.degenerate;
    return out;
}

// --- compact decomposition -------------------------------------------------

namespace {

struct BuildContext {
    std::vector<std::size_t> dims;  // in ordering order
    double pruned = 0.0;
    bool degenerate = false;
};

std::vector<Branch> build_level(const Vec& coeffs, std::size_t level, double path_weight,
                                BuildContext& ctx) {
    const std::size_t n = ctx.dims.size();
    const std::size_t d = ctx.dims[level];
    const std::size_t rest = static_cast<std::size_t>(coeffs.size()) / d;
    auto f = detail::schmidt_factors(detail::as_matrix(coeffs, d, rest));
    ctx.degenerate = ctx.degenerate || f.degenerate;

    double kept = 0.0;
    for (const double w : f.weights) kept += w;
    ctx.pruned += path_weight * f.pruned_weight / (kept + f.pruned_weight);

    std::vector<Branch> branches;
    branches.reserve(f.weights.size());
    for (std::size_t i = 0; i < f.weights.size(); ++i) {
        const auto col = static_cast<Eigen::Index>(i);
        Branch b;
        b.weight = f.weights[i] / kept;
        b.ket = f.left.col(col);
        Vec right = f.right.col(col);
        right /= right.norm();
        if (level + 2 == n) {
            b.mate = std::move(right);
        } else {
            b.children = build_level(right, level + 1, path_weight * b.weight, ctx);
        }
        branches.push_back(std::move(b));
    }
    return branches;
}

// Vector over parties ordering[level..] represented by a list of branches.
Vec resum(const std::vector<Branch>& branches) {
    Vec out;
    for (const auto& b : branches) {
        Vec below = b.children.empty() ? b.mate : resum(b.children);
        const Vec pair[] = {b.ket, below};
        Vec term = std::sqrt(b.weight) * kron(pair);
        if (out.size() == 0) {
            out = std::move(term);
        } else {
            out += term;
        }
    }
    return out;
}

void collect_leaves(const std::vector<Branch>& branches, double weight, std::vector<Vec>& path,
                    const Ordering& ordering, std::vector<LeafPath>& out) {
    for (const auto& b : branches) {
        path.push_back(b.ket);
        if (b.children.empty()) {
            path.push_back(b.mate);
            LeafPath leaf;
            leaf.weight = weight * b.weight;
            leaf.kets.resize(ordering.parties.size());
            for (std::size_t k = 0; k < path.size(); ++k) {
                leaf.kets[ordering.parties[k]] = path[k];
            }
            out.push_back(std::move(leaf));
            path.pop_back();
        } else {
            collect_leaves(b.children, weight * b.weight, path, ordering, out);
        }
        path.pop_back();
    }
}

double gram_residual(const std::vector<Vec>& vectors) {
    double worst = 0.0;
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        for (std::size_t j = 0; j < vectors.size(); ++j) {
            const cplx g = vectors[i].dot(vectors[j]);
            const cplx target = i == j ? cplx(1.0, 0.0) : cplx(0.0, 0.0);
            worst = std::max(worst, std::abs(g - target));
        }
    }
    return worst;
}

void check_level(const std::vector<Branch>& siblings, TreeReport& report) {
    std::vector<Vec> kets;
    std::vector<Vec> mates;
    double total = 0.0;
    for (const auto& b : siblings) {
        kets.push_back(b.ket);
        mates.push_back(b.children.empty() ? b.mate : resum(b.children));
        total += b.weight;
        report.min_weight = std::min(report.min_weight, b.weight);
    }
    report.orthonormality_residual = std::max(report.orthonormality_residual, gram_residual(kets));
    report.mate_residual = std::max(report.mate_residual, gram_residual(mates));
    report.probability_residual = std::max(report.probability_residual, std::abs(total - 1.0));
    for (const auto& b : siblings) {
        if (!b.children.empty()) {
            check_level(b.children, report);
        }
    }
}

}  // namespace

DecompositionTree compact_decomposition(const PureState& state, const Ordering& ordering) {
    const auto& layout = state.layout();
    if (layout.party_count() < 2) {
        throw std::invalid_argument("compact_decomposition: need at least two parties");
    }
    check_permutation(ordering, layout.party_count());

    BuildContext ctx;
    for (const auto p : ordering.parties) {
        ctx.dims.push_back(layout.dim(p));
    }
    Vec coeffs = permute_axes(state.amplitudes(), layout.dims(), ordering.parties);
    coeffs /= coeffs.norm();

    DecompositionTree tree;
    tree.layout = layout;
    tree.ordering = ordering;
    tree.roots = build_level(coeffs, 0, 1.0, ctx);
    tree.pruned_weight = ctx.pruned;
    tree.degenerate = ctx.degenerate;
    return tree;
}

std::vector<LeafPath> DecompositionTree::leaves() const {
    std::vector<LeafPath> out;
    std::vector<Vec> path;
    collect_leaves(roots, 1.0, path, ordering, out);
    return out;
}

std::vector<double> DecompositionTree::leaf_weights() const {
    std::vector<double> out;
    for (const auto& leaf : leaves()) {
        out.push_back(leaf.weight);
    }
    return out;
}

std::size_t DecompositionTree::leaf_count() const {
    std::size_t count = 0;
    auto walk = [&count](const auto& self, const std::vector<Branch>& level) -> void {
        for (const auto& b : level) {
            if (b.children.empty()) {
                ++count;
            } else {
                self(self, b.children);
            }
        }
    };
    walk(walk, roots);
    return count;
}

std::size_t DecompositionTree::leaf_bound() const {
    const std::size_t n = ordering.parties.size();
    std::size_t bound = 1;
    for (std::size_t k = 0; k + 2 < n; ++k) {
        bound *= layout.dim(ordering.parties[k]);
    }
    return bound * std::min(layout.dim(ordering.parties[n - 2]), layout.dim(ordering.parties[n - 1]));
}

bool DecompositionTree::is_diagonal() const {
    auto walk = [](const auto& self, const std::vector<Branch>& level) -> bool {
        for (const auto& b : level) {
            if (b.children.empty()) continue;
            if (b.children.size() != 1 || !self(self, b.children)) return false;
        }
        return true;
    };
    return walk(walk, roots);
}

PureState reconstruct(const DecompositionTree& tree) {
    const auto& layout = tree.layout;
    const std::size_t n = layout.party_count();
    std::vector<std::size_t> ordered_dims;
    for (const auto p : tree.ordering.parties) {
        ordered_dims.push_back(layout.dim(p));
    }
    std::vector<std::size_t> inverse(n);
    for (std::size_t k = 0; k < n; ++k) {
        inverse[tree.ordering.parties[k]] = k;
    }
    Vec amps = tree.roots.empty() ? Vec::Zero(static_cast<Eigen::Index>(layout.total_dim()))
                                  : resum(tree.roots);
    return PureState(layout, permute_axes(amps, ordered_dims, inverse));
}

TreeReport verify_tree(const DecompositionTree& tree, const PureState& state) {
    TreeReport report;
    report.min_weight = 1.0;
    check_level(tree.roots, report);
    const PureState rec = reconstruct(tree);
    report.fidelity = std::norm(state.amplitudes().dot(rec.amplitudes()));
    report.leaf_count = tree.leaf_count();
    report.leaf_bound = tree.leaf_bound();
    return report;
}

// --- decohered state -------------------------------------------------------

Mat ProductMixture::density() const {
    const auto dim = static_cast<Eigen::Index>(layout.total_dim());
    Mat out = Mat::Zero(dim, dim);
    for (const auto& t : terms) {
        const Vec v = kron(t.kets);
        out.noalias() += t.weight * v * v.adjoint();
    }
    return out;
}

std::vector<double> ProductMixture::weights() const {
    std::vector<double> out;
    for (const auto& t : terms) out.push_back(t.weight);
    return out;
}

Mat ProductMixture::marginal(std::size_t party) const {
    const auto d = static_cast<Eigen::Index>(layout.dim(party));
    Mat out = Mat::Zero(d, d);
    for (const auto& t : terms) {
        out.noalias() += t.weight * t.kets[party] * t.kets[party].adjoint();
    }
    return out;
}

double ProductMixture::max_overlap() const {
    double worst = 0.0;
    for (std::size_t s = 0; s < terms.size(); ++s) {
        for (std::size_t t = s + 1; t < terms.size(); ++t) {
            double overlap = 1.0;
            for (std::size_t p = 0; p < layout.party_count(); ++p) {
                overlap *= std::norm(terms[s].kets[p].dot(terms[t].kets[p]));
            }
            worst = std::max(worst, overlap);
        }
    }
    return worst;
}

ProductMixture decohere(const DecompositionTree& tree) {
    ProductMixture out;
    out.layout = tree.layout;
    for (auto& leaf : tree.leaves()) {
        out.terms.push_back(ProductTerm{leaf.weight, std::move(leaf.kets)});
    }
    return out;
}

SchmidtDecomposability is_schmidt_decomposable(const PureState& state,
                                                const MarginalTolerances& tol) {
    SchmidtDecomposability out;
    out.n_ms = marginals(state, tol).n_ms;
    out.spectra_test = out.n_ms == 1;
    if (!out.spectra_test) {
        return out;
    }
    for (const auto& o : enumerate_orderings(state.layout())) {
        auto tree = compact_decomposition(state, o);
        if (tree.is_diagonal()) {
            out.decomposable = true;
            out.witness = std::move(tree);
            break;
        }
    }
    return out;
}

}  // namespace qcompact
