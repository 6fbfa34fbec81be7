#include "qcompact/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "linalg.hpp"

namespace qcompact {

namespace {

constexpr double kEigenClip = 1e-12;

std::vector<std::size_t> strides_of(std::span<const std::size_t> dims) {
    std::vector<std::size_t> strides(dims.size(), 1);
    for (std::size_t k = dims.size(); k-- > 1;) {
        strides[k - 1] = strides[k] * dims[k];
    }
    return strides;
}

std::vector<std::size_t> complement_of(std::span<const std::size_t> keep, std::size_t n) {
    std::vector<std::size_t> rest;
    for (std::size_t p = 0; p < n; ++p) {
        if (std::find(keep.begin(), keep.end(), p) == keep.end()) {
            rest.push_back(p);
        }
    }
    return rest;
}

std::vector<std::size_t> sorted_keep(std::span<const std::size_t> keep, std::size_t n) {
    if (keep.empty()) {
        throw std::invalid_argument("partial_trace: keep set is empty");
    }
    std::vector<std::size_t> out(keep.begin(), keep.end());
    std::sort(out.begin(), out.end());
    if (std::adjacent_find(out.begin(), out.end()) != out.end()) {
        throw std::invalid_argument("partial_trace: repeated party in keep set");
    }
    if (out.back() >= n) {
        throw std::invalid_argument("partial_trace: party index out of range");
    }
    return out;
}

std::vector<double> clipped_spectrum(const Mat& rho) {
    const detail::HermitianEigen eig = detail::hermitian_eigen(rho);
    std::vector<double> values(static_cast<std::size_t>(eig.values.size()));
    for (std::size_t k = 0; k < values.size(); ++k) {
        const double v = eig.values(static_cast<Eigen::Index>(k));
        values[k] = v < kEigenClip ? 0.0 : v;
    }
    return values;
}

}  // namespace

double log_in(double x, LogBase base) { return base == LogBase::Two ? std::log2(x) : std::log(x); }

// --- SubsystemLayout -------------------------------------------------------

SubsystemLayout::SubsystemLayout(std::vector<std::size_t> dims, std::vector<std::string> labels)
    : dims_(std::move(dims)), labels_(std::move(labels)) {
    if (dims_.empty()) {
        throw std::invalid_argument("layout needs at least one party");
    }
    for (const auto d : dims_) {
        if (d == 0) {
            throw std::invalid_argument("layout dimensions must be positive");
        }
    }
    if (labels_.empty()) {
        for (std::size_t k = 0; k < dims_.size(); ++k) {
            labels_.push_back(k < 26 ? std::string(1, static_cast<char>('A' + k))
                                     : "P" + std::to_string(k));
        }
    }
    if (labels_.size() != dims_.size()) {
        throw std::invalid_argument("layout has " + std::to_string(dims_.size()) +
                                    " dims but " + std::to_string(labels_.size()) + " labels");
    }
    auto sorted = labels_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw std::invalid_argument("layout labels must be distinct");
    }
    total_ = std::accumulate(dims_.begin(), dims_.end(), std::size_t{1}, std::multiplies<>());
}

std::size_t SubsystemLayout::index_of(const std::string& label) const {
    const auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) {
        throw std::invalid_argument("unknown party label '" + label + "'");
    }
    return static_cast<std::size_t>(it - labels_.begin());
}

SubsystemLayout SubsystemLayout::subset(std::span<const std::size_t> parties) const {
    const auto keep = sorted_keep(parties, party_count());
    std::vector<std::size_t> dims;
    std::vector<std::string> labels;
    for (const auto p : keep) {
        dims.push_back(dims_[p]);
        labels.push_back(labels_[p]);
    }
    return SubsystemLayout(std::move(dims), std::move(labels));
}

// --- states ----------------------------------------------------------------

PureState::PureState(SubsystemLayout layout, Vec amplitudes)
    : layout_(std::move(layout)), amplitudes_(std::move(amplitudes)) {
    if (static_cast<std::size_t>(amplitudes_.size()) != layout_.total_dim()) {
        throw ShapeError("amplitude count " + std::to_string(amplitudes_.size()) +
                         " does not match total dimension " +
                         std::to_string(layout_.total_dim()));
    }
}

Mat PureState::projector() const { return amplitudes_ * amplitudes_.adjoint(); }

PureState PureState::normalized() const {
    return PureState(layout_, amplitudes_ / amplitudes_.norm());
}

DensityMatrix::DensityMatrix(SubsystemLayout layout, Mat entries)
    : layout_(std::move(layout)), entries_(std::move(entries)) {
    const auto n = static_cast<Eigen::Index>(layout_.total_dim());
    if (entries_.rows() != n || entries_.cols() != n) {
        throw ShapeError("density matrix is " + std::to_string(entries_.rows()) + "x" +
                         std::to_string(entries_.cols()) + ", expected " + std::to_string(n) +
                         "x" + std::to_string(n));
    }
}

DensityMatrix::DensityMatrix(const PureState& state)
    : layout_(state.layout()), entries_(state.projector()) {}

// --- validation ------------------------------------------------------------

ValidationReport validate_state(const PureState& state, const ValidationTolerances& tol) {
    ValidationReport r;
    r.is_pure = true;
    r.norm_residual = std::abs(state.amplitudes().squaredNorm() - 1.0);
    r.norm_ok = r.norm_residual <= tol.norm;
    r.trace_residual = r.norm_residual;
    r.trace_ok = r.norm_ok;
    r.min_eigenvalue = 0.0;
    return r;
}

ValidationReport validate_state(const DensityMatrix& rho, const ValidationTolerances& tol) {
    ValidationReport r;
    const Mat& m = rho.entries();
    r.hermiticity_residual = detail::max_abs_diff(m, m.adjoint());
    r.hermitian_ok = r.hermiticity_residual <= tol.hermiticity;
    r.min_eigenvalue = detail::hermitian_eigen(m).values.minCoeff();
    r.positive_ok = r.min_eigenvalue >= tol.min_eigenvalue;
    r.trace_residual = std::abs(m.trace() - cplx(1.0, 0.0));
    r.trace_ok = r.trace_residual <= tol.trace;
    return r;
}

// --- tensor reshuffles -----------------------------------------------------

Vec permute_axes(const Vec& amplitudes, std::span<const std::size_t> dims,
                 std::span<const std::size_t> perm) {
    const std::size_t n = dims.size();
    if (perm.size() != n) {
        throw std::invalid_argument("permute_axes: permutation size mismatch");
    }
    const auto in_strides = strides_of(dims);
    std::vector<std::size_t> out_dims(n);
    std::vector<std::size_t> step(n);
    for (std::size_t k = 0; k < n; ++k) {
        out_dims[k] = dims[perm[k]];
        step[k] = in_strides[perm[k]];
    }
    Vec out(amplitudes.size());
    std::vector<std::size_t> digit(n, 0);
    std::size_t src = 0;
    for (Eigen::Index dst = 0; dst < out.size(); ++dst) {
        out(dst) = amplitudes(static_cast<Eigen::Index>(src));
        for (std::size_t k = n; k-- > 0;) {
            if (++digit[k] < out_dims[k]) {
                src += step[k];
                break;
            }
            src -= step[k] * (out_dims[k] - 1);
            digit[k] = 0;
        }
    }
    return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const std::size_t> keep) {
    const auto& layout = rho.layout();
    const auto kept = sorted_keep(keep, layout.party_count());
    const auto traced = complement_of(kept, layout.party_count());
    const auto strides = strides_of(layout.dims());

    std::size_t dk = 1;
    for (const auto p : kept) dk *= layout.dim(p);
    std::size_t dt = 1;
    for (const auto p : traced) dt *= layout.dim(p);

    // full index of (kept multi-index a, traced multi-index t)
    std::vector<std::size_t> index(dk * dt);
    for (std::size_t a = 0; a < dk; ++a) {
        std::size_t base = 0;
        std::size_t rem = a;
        for (std::size_t j = kept.size(); j-- > 0;) {
            base += (rem % layout.dim(kept[j])) * strides[kept[j]];
            rem /= layout.dim(kept[j]);
        }
        for (std::size_t t = 0; t < dt; ++t) {
            std::size_t off = 0;
            std::size_t r = t;
            for (std::size_t j = traced.size(); j-- > 0;) {
                off += (r % layout.dim(traced[j])) * strides[traced[j]];
                r /= layout.dim(traced[j]);
            }
            index[a * dt + t] = base + off;
        }
    }

    const Mat& m = rho.entries();
    Mat out = Mat::Zero(static_cast<Eigen::Index>(dk), static_cast<Eigen::Index>(dk));
    for (std::size_t t = 0; t < dt; ++t) {
        for (std::size_t a = 0; a < dk; ++a) {
            const auto i = static_cast<Eigen::Index>(index[a * dt + t]);
            for (std::size_t b = 0; b < dk; ++b) {
                out(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) +=
                    m(i, static_cast<Eigen::Index>(index[b * dt + t]));
            }
        }
    }
    return DensityMatrix(layout.subset(kept), std::move(out));
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<std::string>& keep_labels) {
    std::vector<std::size_t> keep;
    for (const auto& label : keep_labels) {
        keep.push_back(rho.layout().index_of(label));
    }
    return partial_trace(rho, keep);
}

DensityMatrix partial_trace(const PureState& state, std::span<const std::size_t> keep) {
    const auto& layout = state.layout();
    const auto kept = sorted_keep(keep, layout.party_count());
    const auto traced = complement_of(kept, layout.party_count());
    std::vector<std::size_t> perm(kept);
    perm.insert(perm.end(), traced.begin(), traced.end());
    std::size_t dk = 1;
    for (const auto p : kept) dk *= layout.dim(p);
    const Vec moved = permute_axes(state.amplitudes(), layout.dims(), perm);
    const Mat m = detail::as_matrix(moved, dk, layout.total_dim() / dk);
    return DensityMatrix(layout.subset(kept), m * m.adjoint());
}

// --- marginals -------------------------------------------------------------

bool spectra_equal(std::span<const double> a, std::span<const double> b, double tol) {
    const std::size_t n = std::max(a.size(), b.size());
    for (std::size_t k = 0; k < n; ++k) {
        const double x = k < a.size() ? a[k] : 0.0;
        const double y = k < b.size() ? b[k] : 0.0;
        if (std::abs(x - y) > tol) {
            return false;
        }
    }
    return true;
}

namespace {

MarginalSet summarize(std::vector<DensityMatrix> parts, const MarginalTolerances& tol) {
    MarginalSet out;
    out.marginals = std::move(parts);
    std::vector<std::size_t> representatives;
    for (std::size_t p = 0; p < out.marginals.size(); ++p) {
        const detail::HermitianEigen eig = detail::hermitian_eigen(out.marginals[p].entries());
        std::vector<double> spectrum(eig.values.data(), eig.values.data() + eig.values.size());
        const double largest = spectrum.empty() ? 0.0 : spectrum.front();
        std::size_t rank = 0;
        for (const double v : spectrum) {
            if (v > tol.rank_threshold * largest) ++rank;
        }
        out.ranks.push_back(rank);

        std::size_t cls = representatives.size();
        for (std::size_t c = 0; c < representatives.size(); ++c) {
            if (spectra_equal(spectrum, out.spectra[representatives[c]], tol.spectrum_equality)) {
                cls = c;
                break;
            }
        }
        if (cls == representatives.size()) {
            representatives.push_back(p);
        }
        out.spectrum_class.push_back(cls);
        out.spectra.push_back(std::move(spectrum));
    }
    out.n_ms = representatives.size();
    return out;
}

}  // namespace

MarginalSet marginals(const PureState& state, const MarginalTolerances& tol) {
    std::vector<DensityMatrix> parts;
    for (std::size_t p = 0; p < state.party_count(); ++p) {
        const std::size_t keep[] = {p};
        parts.push_back(partial_trace(state, keep));
    }
    return summarize(std::move(parts), tol);
}

MarginalSet marginals(const DensityMatrix& rho, const MarginalTolerances& tol) {
    std::vector<DensityMatrix> parts;
    for (std::size_t p = 0; p < rho.party_count(); ++p) {
        const std::size_t keep[] = {p};
        parts.push_back(partial_trace(rho, keep));
    }
    return summarize(std::move(parts), tol);
}

Mat kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

Vec kron(std::span<const Vec> factors) {
    Vec out = Vec::Ones(1);
    for (const auto& f : factors) {
        Vec next(out.size() * f.size());
        for (Eigen::Index i = 0; i < out.size(); ++i) {
            next.segment(i * f.size(), f.size()) = out(i) * f;
        }
        out = std::move(next);
    }
    return out;
}

DensityMatrix uncorrelated_product(const MarginalSet& m, const SubsystemLayout& layout) {
    if (m.marginals.size() != layout.party_count()) {
        throw std::invalid_argument("uncorrelated_product: marginal count does not match layout");
    }
    Mat out = Mat::Ones(1, 1);
    for (const auto& part : m.marginals) {
        out = kron(out, part.entries());
    }
    return DensityMatrix(layout, std::move(out));
}

PureState product_state(const SubsystemLayout& layout, std::span<const Vec> kets) {
    if (kets.size() != layout.party_count()) {
        throw std::invalid_argument("product_state: one ket per party required");
    }
    for (std::size_t p = 0; p < kets.size(); ++p) {
        if (static_cast<std::size_t>(kets[p].size()) != layout.dim(p)) {
            throw ShapeError("product_state: ket " + std::to_string(p) + " has wrong dimension");
        }
    }
    return PureState(layout, kron(kets));
}

// --- entropies -------------------------------------------------------------

double shannon_entropy(std::span<const double> probabilities, LogBase base) {
    double h = 0.0;
    for (const double p : probabilities) {
        if (p >= kEigenClip) {
            h -= p * log_in(p, base);
        }
    }
    return h;
}

double von_neumann_entropy(const Mat& rho, LogBase base) {
    const auto spectrum = clipped_spectrum(rho);
    return shannon_entropy(spectrum, base);
}

double von_neumann_entropy(const DensityMatrix& rho, LogBase base) {
    return von_neumann_entropy(rho.entries(), base);
}

double relative_entropy(const Mat& rho, const Mat& sigma, LogBase base) {
    if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols()) {
        throw ShapeError("relative_entropy: operand sizes differ");
    }
    const detail::HermitianEigen eig = detail::hermitian_eigen(sigma);
    double leak = 0.0;
    double cross = 0.0;  // tr rho log sigma on the support of sigma
    for (Eigen::Index k = 0; k < eig.values.size(); ++k) {
        const auto e = eig.vectors.col(k);
        const double overlap = std::real(e.dot(rho * e));
        if (eig.values(k) <= kEigenClip) {
            leak += overlap;
        } else {
            cross += overlap * log_in(eig.values(k), base);
        }
    }
    if (leak > 1e-10) {
        return kInfinity;
    }
    return -von_neumann_entropy(rho, base) - cross;
}

double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma, LogBase base) {
    if (!(rho.layout() == sigma.layout())) {
        throw std::invalid_argument("relative_entropy: layouts differ");
    }
    return relative_entropy(rho.entries(), sigma.entries(), base);
}

// --- local unitaries -------------------------------------------------------

PureState apply_local_unitary(const PureState& state, std::span<const Mat> unitaries,
                              double unitarity_tol) {
    const auto& layout = state.layout();
    if (unitaries.size() != layout.party_count()) {
        throw std::invalid_argument("apply_local_unitary: need one unitary per party");
    }
    Vec amps = state.amplitudes();
    std::size_t left = 1;
    for (std::size_t p = 0; p < layout.party_count(); ++p) {
        const Mat& u = unitaries[p];
        const auto d = static_cast<Eigen::Index>(layout.dim(p));
        if (u.rows() != d || u.cols() != d) {
            throw ShapeError("apply_local_unitary: unitary for party " + layout.label(p) +
                             " has wrong size");
        }
        const double residual = detail::max_abs_diff(u.adjoint() * u, Mat::Identity(d, d));
        if (residual > unitarity_tol) {
            throw std::invalid_argument("apply_local_unitary: matrix for party " +
                                        layout.label(p) + " is not unitary");
        }
        const std::size_t right = layout.total_dim() / (left * layout.dim(p));
        Vec next = Vec::Zero(amps.size());
        for (std::size_t l = 0; l < left; ++l) {
            for (Eigen::Index i = 0; i < d; ++i) {
                for (Eigen::Index j = 0; j < d; ++j) {
                    const cplx uij = u(i, j);
                    if (uij == cplx(0.0, 0.0)) continue;
                    const auto dst = static_cast<Eigen::Index>((l * layout.dim(p) + i) * right);
                    const auto src = static_cast<Eigen::Index>((l * layout.dim(p) + j) * right);
                    next.segment(dst, static_cast<Eigen::Index>(right)) +=
                        uij * amps.segment(src, static_cast<Eigen::Index>(right));
                }
            }
        }
        amps = std::move(next);
        left *= layout.dim(p);
    }
    return PureState(layout, std::move(amps));
}

}  // namespace qcompact
