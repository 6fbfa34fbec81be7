#pragma once

// State representation for N-party systems: layouts, pure states, density
// matrices, marginals and entropies.
//
// Index convention: amplitude index i maps to the multi-index (i_1, ..., i_N)
// row-major, the first party being the most significant digit.

#include <complex>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qcompact {

using cplx = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;

/// Thrown when an amplitude vector or operator does not match its layout.
class ShapeError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

enum class LogBase { Two, E };

/// log in the requested base; natural log for LogBase::E.
double log_in(double x, LogBase base);

class SubsystemLayout {
  public:
    SubsystemLayout() = default;
    /// Labels default to "A", "B", ... when empty.
    explicit SubsystemLayout(std::vector<std::size_t> dims, std::vector<std::string> labels = {});

    std::size_t party_count() const { return dims_.size(); }
    std::size_t total_dim() const { return total_; }
    std::size_t dim(std::size_t party) const { return dims_.at(party); }
    const std::vector<std::size_t>& dims() const { return dims_; }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::string& label(std::size_t party) const { return labels_.at(party); }

    /// Party index of a label; throws std::invalid_argument for unknown labels.
    std::size_t index_of(const std::string& label) const;

    /// Layout restricted to the given parties, kept in layout order.
    SubsystemLayout subset(std::span<const std::size_t> parties) const;

    bool operator==(const SubsystemLayout&) const = default;

  private:
    std::vector<std::size_t> dims_;
    std::vector<std::string> labels_;
    std::size_t total_ = 0;
};

class PureState {
  public:
    PureState() = default;
    /// Throws ShapeError when amplitudes.size() != layout.total_dim(). Norm is
    /// not enforced here; see validate_state.
    PureState(SubsystemLayout layout, Vec amplitudes);

    const SubsystemLayout& layout() const { return layout_; }
    const Vec& amplitudes() const { return amplitudes_; }
    std::size_t party_count() const { return layout_.party_count(); }

    /// |psi><psi|
    Mat projector() const;
    PureState normalized() const;

  private:
    SubsystemLayout layout_;
    Vec amplitudes_;
};

class DensityMatrix {
  public:
    DensityMatrix() = default;
    /// Throws ShapeError unless entries is total_dim x total_dim.
    DensityMatrix(SubsystemLayout layout, Mat entries);
    explicit DensityMatrix(const PureState& state);

    const SubsystemLayout& layout() const { return layout_; }
    const Mat& entries() const { return entries_; }
    std::size_t party_count() const { return layout_.party_count(); }

  private:
    SubsystemLayout layout_;
    Mat entries_;
};

struct ValidationTolerances {
    double norm = 1e-12;
    double hermiticity = 1e-12;
    double min_eigenvalue = -1e-10;
    double trace = 1e-12;
};

struct ValidationReport {
    bool is_pure = false;
    double norm_residual = 0.0;         // |<psi|psi> - 1|, pure states only
    double hermiticity_residual = 0.0;  // max |rho - rho^dagger|
    double min_eigenvalue = 0.0;
    double trace_residual = 0.0;        // |tr rho - 1|
    bool norm_ok = true;
    bool hermitian_ok = true;
    bool positive_ok = true;
    bool trace_ok = true;

    bool ok() const { return norm_ok && hermitian_ok && positive_ok && trace_ok; }
};

ValidationReport validate_state(const PureState& state, const ValidationTolerances& tol = {});
ValidationReport validate_state(const DensityMatrix& rho, const ValidationTolerances& tol = {});

/// Reorders tensor axes: output axis k is input axis perm[k].
Vec permute_axes(const Vec& amplitudes, std::span<const std::size_t> dims,
                 std::span<const std::size_t> perm);

/// Reduced operator on `keep` (party indices; the result lists them in layout order).
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const std::size_t> keep);
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<std::string>& keep_labels);
DensityMatrix partial_trace(const PureState& state, std::span<const std::size_t> keep);

struct MarginalTolerances {
    double spectrum_equality = 1e-9;  // elementwise, after descending sort
    double rank_threshold = 1e-10;    // relative to the largest eigenvalue
};

struct MarginalSet {
    std::vector<DensityMatrix> marginals;       // one per party, layout order
    std::vector<std::vector<double>> spectra;   // descending
    std::vector<std::size_t> ranks;
    /// Party -> index of its spectrum class (classes numbered in first-seen order).
    std::vector<std::size_t> spectrum_class;
    std::size_t n_ms = 0;
};

MarginalSet marginals(const PureState& state, const MarginalTolerances& tol = {});
MarginalSet marginals(const DensityMatrix& rho, const MarginalTolerances& tol = {});

/// Whether two spectra coincide elementwise (shorter one zero-padded).
bool spectra_equal(std::span<const double> a, std::span<const double> b, double tol);

/// rho^A (x) rho^B (x) ... over the full layout.
DensityMatrix uncorrelated_product(const MarginalSet& m, const SubsystemLayout& layout);

/// Shannon entropy of a probability vector; entries below 1e-12 count as 0.
double shannon_entropy(std::span<const double> probabilities, LogBase base = LogBase::Two);
double von_neumann_entropy(const DensityMatrix& rho, LogBase base = LogBase::Two);
double von_neumann_entropy(const Mat& rho, LogBase base = LogBase::Two);

/// S(rho||sigma); +infinity when the support of rho leaks out of sigma's.
double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma,
                        LogBase base = LogBase::Two);
double relative_entropy(const Mat& rho, const Mat& sigma, LogBase base = LogBase::Two);

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Applies U_1 (x) ... (x) U_N. Throws on dimension mismatch or a unitarity
/// residual above `unitarity_tol`.
PureState apply_local_unitary(const PureState& state, std::span<const Mat> unitaries,
                              double unitarity_tol = 1e-10);

/// Kronecker product of a list of vectors (first is most significant).
Vec kron(std::span<const Vec> factors);
Mat kron(const Mat& a, const Mat& b);

/// Computational-basis product state of the given local kets.
PureState product_state(const SubsystemLayout& layout, std::span<const Vec> kets);

}  // namespace qcompact
