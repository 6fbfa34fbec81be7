#include "qcompact/convex_roof.hpp"

#include <algorithm>
#include <cmath>
#include <future>

#include <ceres/gradient_problem.h>
#include <ceres/gradient_problem_solver.h>

#include "linalg.hpp"
#include "qcompact/random.hpp"

namespace qcompact {

namespace {

constexpr double kMemberPrune = 1e-10;
constexpr double kRankThreshold = 1e-10;
constexpr double kFiniteDifferenceStep = 1e-6;

struct ScaledEigenbasis {
    Mat scaled;  // D x r, columns sqrt(mu_k) e_k
    std::size_t rank = 0;
};

ScaledEigenbasis scaled_eigenbasis(const DensityMatrix& rho) {
    const detail::HermitianEigen eig = detail::hermitian_eigen(rho.entries());
    const double largest = std::max(eig.values(0), 0.0);
    ScaledEigenbasis out;
    for (Eigen::Index k = 0; k < eig.values.size(); ++k) {
        if (eig.values(k) > kRankThreshold * largest) ++out.rank;
    }
    const auto r = static_cast<Eigen::Index>(out.rank);
    out.scaled = eig.vectors.leftCols(r);
    for (Eigen::Index k = 0; k < r; ++k) {
        out.scaled.col(k) *= std::sqrt(eig.values(k));
    }
    return out;
}

// Polar retraction onto the orthonormal-column matrices.
Mat polar_isometry(const Mat& z) {
    Eigen::JacobiSVD<Mat> svd(z, Eigen::ComputeThinU | Eigen::ComputeThinV);
    return svd.matrixU() * svd.matrixV().adjoint();
}

Mat unpack(const double* x, Eigen::Index m, Eigen::Index r) {
    Mat z(m, r);
    for (Eigen::Index j = 0; j < r; ++j) {
        for (Eigen::Index i = 0; i < m; ++i) {
            const auto k = 2 * (j * m + i);
            z(i, j) = cplx(x[k], x[k + 1]);
        }
    }
    return z;
}

void pack(const Mat& z, double* x) {
    for (Eigen::Index j = 0; j < z.cols(); ++j) {
        for (Eigen::Index i = 0; i < z.rows(); ++i) {
            const auto k = 2 * (j * z.rows() + i);
            x[k] = z(i, j).real();
            x[k + 1] = z(i, j).imag();
        }
    }
}

EnsembleDecomposition build_ensemble(const ScaledEigenbasis& basis, const SubsystemLayout& layout,
                                     const Mat& isometry) {
    EnsembleDecomposition out;
    out.isometry = isometry;
    // Row a of V gives psi~_a = sum_k V_ak sqrt(mu_k) e_k.
    const Mat members = basis.scaled * isometry.transpose();
    for (Eigen::Index a = 0; a < members.cols(); ++a) {
        const double w = members.col(a).squaredNorm();
        if (w < kMemberPrune) continue;
        out.weights.push_back(w);
        out.states.emplace_back(layout, members.col(a) / std::sqrt(w));
    }
    return out;
}

class EnsembleObjective {
  public:
    EnsembleObjective(const ScaledEigenbasis& basis, SubsystemLayout layout, std::size_t m,
                      LogBase base)
        : basis_(basis), layout_(std::move(layout)), m_(m), base_(base),
          orderings_(enumerate_orderings(layout_)) {}

    double value_of_isometry(const Mat& v) const {
        const Mat members = basis_.scaled * v.transpose();
        double total = 0.0;
        for (Eigen::Index a = 0; a < members.cols(); ++a) {
            const double w = members.col(a).squaredNorm();
            if (w < kMemberPrune) continue;
            const PureState psi(layout_, members.col(a) / std::sqrt(w));
            double best = kInfinity;
            for (const auto& o : orderings_) {
                best = std::min(best, shannon_entropy(compact_decomposition(psi, o).leaf_weights(), base_));
            }
            total += w * best;
        }
        return total;
    }

    double operator()(const double* x) const {
        const auto r = static_cast<Eigen::Index>(basis_.rank);
        return value_of_isometry(polar_isometry(unpack(x, static_cast<Eigen::Index>(m_), r)));
    }

    int size() const { return static_cast<int>(2 * m_ * basis_.rank); }

  private:
    const ScaledEigenbasis& basis_;
    SubsystemLayout layout_;
    std::size_t m_;
    LogBase base_;
    std::vector<Ordering> orderings_;
};

class CentralDifferenceFunction final : public ceres::FirstOrderFunction {
  public:
    explicit CentralDifferenceFunction(const EnsembleObjective& f) : f_(f) {}

    int NumParameters() const override { return f_.size(); }

    bool Evaluate(const double* x, double* cost, double* gradient) const override {
        *cost = f_(x);
        if (!std::isfinite(*cost)) return false;
        if (gradient == nullptr) return true;
        std::vector<double> probe(x, x + f_.size());
        for (int i = 0; i < f_.size(); ++i) {
            const double keep = probe[static_cast<std::size_t>(i)];
            probe[static_cast<std::size_t>(i)] = keep + kFiniteDifferenceStep;
            const double up = f_(probe.data());
            probe[static_cast<std::size_t>(i)] = keep - kFiniteDifferenceStep;
            const double down = f_(probe.data());
            probe[static_cast<std::size_t>(i)] = keep;
            gradient[i] = (up - down) / (2.0 * kFiniteDifferenceStep);
        }
        return true;
    }

  private:
    const EnsembleObjective& f_;
};

class TraceCallback final : public ceres::IterationCallback {
  public:
    explicit TraceCallback(std::vector<double>& trace) : trace_(trace) {}

    ceres::CallbackReturnType operator()(const ceres::IterationSummary& summary) override {
        const double best = trace_.empty() ? summary.cost : std::min(trace_.back(), summary.cost);
        trace_.push_back(best);
        return ceres::SOLVER_CONTINUE;
    }

  private:
    std::vector<double>& trace_;
};

struct RestartOutcome {
    RoofRestart info;
    Mat isometry;
};

RestartOutcome run_restart(const EnsembleObjective& objective, const Mat& start,
                           const RoofConfig& config) {
    RestartOutcome out;
    std::vector<double> x(static_cast<std::size_t>(objective.size()));
    pack(start, x.data());
    out.info.start_value = objective.value_of_isometry(start);

    ceres::GradientProblemSolver::Options options;
    options.line_search_direction_type = ceres::LBFGS;
    options.max_num_iterations = static_cast<int>(config.max_iters);
    options.function_tolerance = config.tol;
    options.gradient_tolerance = 1e-10;
    options.parameter_tolerance = 1e-12;
    options.logging_type = ceres::SILENT;
    options.minimizer_progress_to_stdout = false;
    TraceCallback callback(out.info.trace);
    options.callbacks.push_back(&callback);

    ceres::GradientProblem problem(new CentralDifferenceFunction(objective));
    ceres::GradientProblemSolver::Summary summary;
    ceres::Solve(options, problem, x.data(), &summary);

    out.info.converged = summary.termination_type == ceres::CONVERGENCE;
    out.info.iterations = summary.iterations.size();
    const Mat end = polar_isometry(unpack(x.data(), start.rows(), start.cols()));
    const double end_value = objective.value_of_isometry(end);
    if (end_value <= out.info.start_value) {
        out.isometry = end;
        out.info.value = end_value;
    } else {
        out.isometry = start;
        out.info.value = out.info.start_value;
    }
    return out;
}

}  // namespace

Mat EnsembleDecomposition::assemble() const {
    if (states.empty()) return Mat();
    const auto dim = states.front().amplitudes().size();
    Mat out = Mat::Zero(dim, dim);
    for (std::size_t a = 0; a < states.size(); ++a) {
        out.noalias() += weights[a] * states[a].projector();
    }
    return out;
}

std::size_t ensemble_rank(const DensityMatrix& rho) { return scaled_eigenbasis(rho).rank; }

EnsembleDecomposition ensemble_from_isometry(const DensityMatrix& rho, const Mat& isometry) {
    const ScaledEigenbasis basis = scaled_eigenbasis(rho);
    const auto r = static_cast<Eigen::Index>(basis.rank);
    if (isometry.cols() != r) {
        throw std::invalid_argument("ensemble_from_isometry: isometry has " +
                                    std::to_string(isometry.cols()) + " columns, rank is " +
                                    std::to_string(r));
    }
    if (isometry.rows() < r) {
        throw std::invalid_argument("ensemble_from_isometry: ensemble size below rank");
    }
    if (detail::max_abs_diff(isometry.adjoint() * isometry, Mat::Identity(r, r)) > 1e-10) {
        throw std::invalid_argument("ensemble_from_isometry: columns are not orthonormal");
    }
    return build_ensemble(basis, rho.layout(), isometry);
}

double ensemble_average(const EnsembleDecomposition& ensemble, LogBase base) {
    double total = 0.0;
    for (std::size_t a = 0; a < ensemble.states.size(); ++a) {
        total += ensemble.weights[a] * entanglement_value(ensemble.states[a], base);
    }
    return total;
}

void RoofConfig::validate() const {
    if (restarts < 1) throw std::invalid_argument("roof: restarts must be >= 1");
    if (max_iters < 1) throw std::invalid_argument("roof: max_iters must be >= 1");
    if (!(tol > 0.0)) throw std::invalid_argument("roof: tol must be positive");
    if (threads < 1) throw std::invalid_argument("roof: threads must be >= 1");
}

std::vector<bool> RoofResult::converged_flags() const {
    std::vector<bool> out;
    for (const auto& r : restarts) out.push_back(r.converged);
    return out;
}

RoofResult roof_minimize(const DensityMatrix& rho, const RoofConfig& config) {
    config.validate();
    const auto& layout = rho.layout();
    if (layout.total_dim() > kDenseDimensionCap) {
        throw std::invalid_argument("roof_minimize: total dimension " +
                                    std::to_string(layout.total_dim()) + " exceeds cap " +
                                    std::to_string(kDenseDimensionCap));
    }
    if (layout.party_count() < 2) {
        throw std::invalid_argument("roof_minimize: need at least two parties");
    }
    const ScaledEigenbasis basis = scaled_eigenbasis(rho);
    const std::size_t r = basis.rank;
    const std::size_t m = config.ensemble_size == 0 ? 2 * r : config.ensemble_size;
    if (m < r) {
        throw std::invalid_argument("roof_minimize: ensemble size " + std::to_string(m) +
                                    " below rank " + std::to_string(r));
    }

    const EnsembleObjective objective(basis, layout, m, config.base);

    std::vector<Mat> starts;
    starts.push_back(Mat::Identity(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(r)));
    Rng rng(config.seed);
    for (std::size_t k = 1; k < config.restarts; ++k) {
        starts.push_back(polar_isometry(ginibre(m, r, rng)));
    }

    std::vector<RestartOutcome> outcomes(starts.size());
    for (std::size_t first = 0; first < starts.size(); first += config.threads) {
        const std::size_t last = std::min(starts.size(), first + config.threads);
        std::vector<std::future<RestartOutcome>> batch;
        for (std::size_t k = first; k < last; ++k) {
            batch.push_back(std::async(config.threads > 1 ? std::launch::async : std::launch::deferred,
                                       [&, k] { return run_restart(objective, starts[k], config); }));
        }
        for (std::size_t k = first; k < last; ++k) {
            outcomes[k] = batch[k - first].get();
        }
    }

    RoofResult out;
    out.base = config.base;
    out.ensemble_size = m;
    out.rank = r;
    out.restarts_used = outcomes.size();
    out.eigen_ensemble_value = outcomes.front().info.start_value;
    std::size_t best = 0;
    for (std::size_t k = 0; k < outcomes.size(); ++k) {
        if (outcomes[k].info.value < outcomes[best].info.value) best = k;
        out.restarts.push_back(outcomes[k].info);
    }
    out.best_restart = best;
    out.value = outcomes[best].info.value;
    out.best_ensemble = build_ensemble(basis, layout, outcomes[best].isometry);
    return out;
}

double concurrence(const DensityMatrix& rho) {
    if (rho.layout().dims() != std::vector<std::size_t>{2, 2}) {
        throw std::invalid_argument("concurrence: layout must be two qubits [2,2]");
    }
    Mat sy(2, 2);
    sy << 0.0, cplx(0.0, -1.0), cplx(0.0, 1.0), 0.0;
    const Mat yy = kron(sy, sy);
    const Mat& r = rho.entries();
    const Mat tilde = yy * r.conjugate() * yy;

    const detail::HermitianEigen er = detail::hermitian_eigen(r);
    Eigen::VectorXd root = er.values.cwiseMax(0.0).cwiseSqrt();
    const Mat sqrt_rho = er.vectors * root.asDiagonal() * er.vectors.adjoint();
    const detail::HermitianEigen e = detail::hermitian_eigen(sqrt_rho * tilde * sqrt_rho);
    Eigen::VectorXd l = e.values.cwiseMax(0.0).cwiseSqrt();  // descending
    return std::max(0.0, l(0) - l(1) - l(2) - l(3));
}

double wootters_ef(const DensityMatrix& rho, LogBase base) {
    const double c = concurrence(rho);
    const double x = 0.5 * (1.0 + std::sqrt(std::max(0.0, 1.0 - c * c)));
    const double probs[] = {x, 1.0 - x};
    return shannon_entropy(probs, base);
}

}  // namespace qcompact
