// Upper-bound estimate of the relative entropy of entanglement by local
// minimization of S(rho||sigma) over mixtures of product pure states.

#include <algorithm>
#include <cmath>
#include <limits>

#include <ceres/gradient_problem.h>
#include <ceres/gradient_problem_solver.h>

#include "linalg.hpp"
#include "qcompact/measures.hpp"
#include "qcompact/random.hpp"

namespace qcompact {

namespace {

constexpr double kEigenFloor = 1e-15;

// Parameter block per term: [logit, re/im of the unnormalized ket per party].
class ProductMixtureModel {
  public:
    ProductMixtureModel(SubsystemLayout layout, std::size_t components)
        : layout_(std::move(layout)), components_(components) {
        stride_ = 1;
        for (const auto d : layout_.dims()) stride_ += 2 * d;
    }

    int size() const { return static_cast<int>(components_ * stride_); }
    std::size_t components() const { return components_; }

    ProductMixture decode(const double* x) const {
        ProductMixture out;
        out.layout = layout_;
        const auto w = softmax(x);
        for (std::size_t k = 0; k < components_; ++k) {
            ProductTerm t;
            t.weight = w[k];
            t.kets = kets(x, k);
            out.terms.push_back(std::move(t));
        }
        return out;
    }

    std::vector<double> softmax(const double* x) const {
        std::vector<double> w(components_);
        double top = -std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < components_; ++k) top = std::max(top, x[k * stride_]);
        double total = 0.0;
        for (std::size_t k = 0; k < components_; ++k) {
            w[k] = std::exp(x[k * stride_] - top);
            total += w[k];
        }
        for (auto& v : w) v /= total;
        return w;
    }

    std::vector<Vec> raw_kets(const double* x, std::size_t k) const {
        std::vector<Vec> out;
        std::size_t off = k * stride_ + 1;
        for (const auto d : layout_.dims()) {
            Vec u(static_cast<Eigen::Index>(d));
            for (std::size_t i = 0; i < d; ++i) {
                u(static_cast<Eigen::Index>(i)) = cplx(x[off + 2 * i], x[off + 2 * i + 1]);
            }
            out.push_back(std::move(u));
            off += 2 * d;
        }
        return out;
    }

    std::vector<Vec> kets(const double* x, std::size_t k) const {
        auto out = raw_kets(x, k);
        for (auto& v : out) v /= v.norm();
        return out;
    }

    void encode(const ProductMixture& m, double* x) const {
        for (std::size_t k = 0; k < components_; ++k) {
            const auto& t = m.terms[k];
            x[k * stride_] = std::log(std::max(t.weight, 1e-300));
            std::size_t off = k * stride_ + 1;
            for (std::size_t p = 0; p < layout_.party_count(); ++p) {
                for (Eigen::Index i = 0; i < t.kets[p].size(); ++i) {
                    x[off + 2 * i] = t.kets[p](i).real();
                    x[off + 2 * i + 1] = t.kets[p](i).imag();
                }
                off += 2 * layout_.dim(p);
            }
        }
    }

    const SubsystemLayout& layout() const { return layout_; }
    std::size_t stride() const { return stride_; }

  private:
    SubsystemLayout layout_;
    std::size_t components_;
    std::size_t stride_;
};

// Contracts a full vector with conj(v_j) on every party except `keep`.
Vec contract_except(const Vec& full, const std::vector<Vec>& kets, std::size_t keep,
                    const SubsystemLayout& layout) {
    const std::size_t n = layout.party_count();
    Vec out = Vec::Zero(static_cast<Eigen::Index>(layout.dim(keep)));
    std::vector<std::size_t> digit(n, 0);
    for (Eigen::Index idx = 0; idx < full.size(); ++idx) {
        cplx factor = full(idx);
        for (std::size_t j = 0; j < n; ++j) {
            if (j != keep) factor *= std::conj(kets[j](static_cast<Eigen::Index>(digit[j])));
        }
        out(static_cast<Eigen::Index>(digit[keep])) += factor;
        for (std::size_t j = n; j-- > 0;) {
            if (++digit[j] < layout.dim(j)) break;
            digit[j] = 0;
        }
    }
    return out;
}

class RelativeEntropyObjective final : public ceres::FirstOrderFunction {
  public:
    RelativeEntropyObjective(const ProductMixtureModel& model, Mat rho, double entropy_rho,
                             LogBase base)
        : model_(model), rho_(std::move(rho)), entropy_rho_(entropy_rho), base_(base) {}

    int NumParameters() const override { return model_.size(); }

    bool Evaluate(const double* x, double* cost, double* gradient) const override {
        const std::size_t k_count = model_.components();
        const auto w = model_.softmax(x);
        std::vector<std::vector<Vec>> kets(k_count);
        std::vector<Vec> phis(k_count);
        const auto dim = static_cast<Eigen::Index>(model_.layout().total_dim());
        Mat sigma = Mat::Zero(dim, dim);
        for (std::size_t k = 0; k < k_count; ++k) {
            kets[k] = model_.kets(x, k);
            for (const auto& v : kets[k]) {
                if (!std::isfinite(v.norm())) return false;
            }
            phis[k] = kron(kets[k]);
            sigma.noalias() += w[k] * phis[k] * phis[k].adjoint();
        }
        const detail::HermitianEigen eig = detail::hermitian_eigen(sigma);
        const double scale = base_ == LogBase::Two ? 1.0 / std::log(2.0) : 1.0;
        Eigen::VectorXd mu = eig.values.cwiseMax(kEigenFloor);
        Eigen::VectorXd logmu(mu.size());
        for (Eigen::Index i = 0; i < mu.size(); ++i) logmu(i) = std::log(mu(i)) * scale;

        const Mat rho_e = eig.vectors.adjoint() * rho_ * eig.vectors;
        double cross = 0.0;
        for (Eigen::Index i = 0; i < mu.size(); ++i) cross += rho_e(i, i).real() * logmu(i);
        *cost = -entropy_rho_ - cross;
        if (!std::isfinite(*cost)) return false;
        if (gradient == nullptr) return true;

        // Frechet derivative of log at sigma (divided differences).
        Mat loewner(mu.size(), mu.size());
        for (Eigen::Index i = 0; i < mu.size(); ++i) {
            for (Eigen::Index j = 0; j < mu.size(); ++j) {
                const double gap = mu(i) - mu(j);
                loewner(i, j) = std::abs(gap) > 1e-12 * std::max(mu(i), mu(j))
                                    ? (logmu(i) - logmu(j)) / gap
                                    : scale / mu(i);
            }
        }
        const Mat g = -(eig.vectors * loewner.cwiseProduct(rho_e) * eig.vectors.adjoint());

        std::vector<double> gw(k_count);
        std::vector<Vec> gphi(k_count);
        double mean = 0.0;
        for (std::size_t k = 0; k < k_count; ++k) {
            gphi[k] = g * phis[k];
            gw[k] = std::real(phis[k].dot(gphi[k]));
            mean += w[k] * gw[k];
        }
        const std::size_t stride = model_.stride();
        for (std::size_t k = 0; k < k_count; ++k) {
            gradient[k * stride] = w[k] * (gw[k] - mean);
            const auto raw = model_.raw_kets(x, k);
            std::size_t off = k * stride + 1;
            for (std::size_t p = 0; p < kets[k].size(); ++p) {
                const Vec h = contract_except(gphi[k], kets[k], p, model_.layout());
                const Vec& v = kets[k][p];
                const double norm_u = raw[p].norm();
                const Vec c = (h - std::real(h.dot(v)) * v) / norm_u;
                for (Eigen::Index i = 0; i < c.size(); ++i) {
                    gradient[off + 2 * i] = 2.0 * w[k] * c(i).real();
                    gradient[off + 2 * i + 1] = 2.0 * w[k] * c(i).imag();
                }
                off += 2 * model_.layout().dim(p);
            }
        }
        return true;
    }

  private:
    const ProductMixtureModel& model_;
    Mat rho_;
    double entropy_rho_;
    LogBase base_;
};

ProductMixture product_of_marginals(const DensityMatrix& rho) {
    const MarginalSet m = marginals(rho);
    std::vector<detail::HermitianEigen> eigs;
    for (const auto& part : m.marginals) eigs.push_back(detail::hermitian_eigen(part.entries()));
    ProductMixture out;
    out.layout = rho.layout();
    const std::size_t n = rho.party_count();
    std::vector<std::size_t> digit(n, 0);
    for (std::size_t idx = 0; idx < rho.layout().total_dim(); ++idx) {
        ProductTerm t;
        t.weight = 1.0;
        for (std::size_t p = 0; p < n; ++p) {
            const auto i = static_cast<Eigen::Index>(digit[p]);
            t.weight *= std::max(eigs[p].values(i), 0.0);
            t.kets.push_back(eigs[p].vectors.col(i));
        }
        if (t.weight > 1e-14) out.terms.push_back(std::move(t));
        for (std::size_t p = n; p-- > 0;) {
            if (++digit[p] < rho.layout().dim(p)) break;
            digit[p] = 0;
        }
    }
    double total = 0.0;
    for (const auto& t : out.terms) total += t.weight;
    for (auto& t : out.terms) t.weight /= total;
    return out;
}

// Pads a mixture with random low-weight terms up to `components` entries.
ProductMixture padded(const ProductMixture& m, std::size_t components, Rng& rng) {
    ProductMixture out = m;
    while (out.terms.size() < components) {
        ProductTerm t;
        t.weight = 1e-9;
        for (const auto d : m.layout.dims()) {
            Vec v = ginibre(d, 1, rng).col(0);
            t.kets.push_back(v / v.norm());
        }
        out.terms.push_back(std::move(t));
    }
    return out;
}

ProductMixture random_mixture(const SubsystemLayout& layout, std::size_t components, Rng& rng) {
    ProductMixture out;
    out.layout = layout;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double total = 0.0;
    for (std::size_t k = 0; k < components; ++k) {
        ProductTerm t;
        t.weight = -std::log(1.0 - unit(rng));  // flat Dirichlet
        total += t.weight;
        for (const auto d : layout.dims()) {
            Vec v = ginibre(d, 1, rng).col(0);
            t.kets.push_back(v / v.norm());
        }
        out.terms.push_back(std::move(t));
    }
    for (auto& t : out.terms) t.weight /= total;
    return out;
}

struct Candidate {
    double value = kInfinity;
    ProductMixture mixture;
};

}  // namespace

RelativeEntropyEstimate relative_entropy_of_entanglement_estimate(
    const DensityMatrix& rho, const RelativeEntropyEstimateConfig& config) {
    const auto& layout = rho.layout();
    if (layout.total_dim() > kDenseDimensionCap) {
        throw std::invalid_argument("relative_entropy_of_entanglement_estimate: total dimension " +
                                    std::to_string(layout.total_dim()) + " exceeds cap " +
                                    std::to_string(kDenseDimensionCap));
    }
    const std::size_t components =
        config.components == 0 ? 2 * layout.total_dim() : config.components;
    const double entropy_rho = von_neumann_entropy(rho, config.base);

    RelativeEntropyEstimate out;
    Candidate best;
    auto consider = [&](const ProductMixture& m) {
        ProductMixture cleaned;
        cleaned.layout = m.layout;
        double total = 0.0;
        for (const auto& t : m.terms) {
            if (t.weight > 1e-14) {
                cleaned.terms.push_back(t);
                total += t.weight;
            }
        }
        for (auto& t : cleaned.terms) t.weight /= total;
        const double v = relative_entropy(rho.entries(), cleaned.density(), config.base);
        if (v < best.value) {
            best.value = v;
            best.mixture = std::move(cleaned);
        }
        return v;
    };

    std::vector<ProductMixture> starts;
    const bool pure = std::abs(rho.entries().squaredNorm() - 1.0) < 1e-10 && layout.party_count() >= 2;
    if (pure) {
        const detail::HermitianEigen eig = detail::hermitian_eigen(rho.entries());
        const PureState psi(layout, eig.vectors.col(0));
        const auto measure = entanglement_pure(psi, config.base);
        out.compact_seed_value = consider(measure.sigma);
        starts.push_back(measure.sigma);
    } else {
        out.compact_seed_value = kInfinity;
    }
    const ProductMixture marg = product_of_marginals(rho);
    consider(marg);
    if (!pure) starts.push_back(marg);

    Rng rng(config.seed);
    std::vector<ProductMixture> seeded;
    for (const auto& s : starts) {
        if (s.terms.size() <= components) seeded.push_back(padded(s, components, rng));
    }
    for (std::size_t r = 0; r < config.restarts; ++r) {
        seeded.push_back(random_mixture(layout, components, rng));
    }

    ProductMixtureModel model(layout, components);
    ceres::GradientProblemSolver::Options options;
    options.line_search_direction_type = ceres::LBFGS;
    options.max_num_iterations = static_cast<int>(config.max_iters);
    options.function_tolerance = config.tol;
    options.gradient_tolerance = 1e-12;
    options.parameter_tolerance = 1e-14;
    options.logging_type = ceres::SILENT;
    options.minimizer_progress_to_stdout = false;

    for (const auto& start : seeded) {
        std::vector<double> x(static_cast<std::size_t>(model.size()));
        model.encode(start, x.data());
        ceres::GradientProblem problem(
            new RelativeEntropyObjective(model, rho.entries(), entropy_rho, config.base));
        ceres::GradientProblemSolver::Summary summary;
        ceres::Solve(options, problem, x.data(), &summary);
        out.converged = out.converged || summary.termination_type == ceres::CONVERGENCE;
        out.restart_values.push_back(consider(model.decode(x.data())));
    }

    out.value = best.value;
    out.witness = std::move(best.mixture);
    return out;
}

RelativeEntropyEstimate relative_entropy_of_entanglement_estimate(
    const PureState& state, const RelativeEntropyEstimateConfig& config) {
    return relative_entropy_of_entanglement_estimate(DensityMatrix(state), config);
}

namespace detail {

// Exposed for the gradient test.
double relative_entropy_objective_for_test(const DensityMatrix& rho, std::size_t components,
                                           const std::vector<double>& x,
                                           std::vector<double>* gradient) {
    ProductMixtureModel model(rho.layout(), components);
    RelativeEntropyObjective f(model, rho.entries(), von_neumann_entropy(rho), LogBase::Two);
    double cost = 0.0;
    if (gradient) gradient->assign(x.size(), 0.0);
    f.Evaluate(x.data(), &cost, gradient ? gradient->data() : nullptr);
    return cost;
}

}  // namespace detail

}  // namespace qcompact
