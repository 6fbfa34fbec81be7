#include "cli.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "qcompact/convex_roof.hpp"
#include "qcompact/measures.hpp"
#include "qcompact/random.hpp"
#include "qcompact/schmidt_tree.hpp"
#include "qcompact/state_io.hpp"
#include "qcompact/three_qubit.hpp"

namespace qcompact::cli {

namespace {

struct BadInput : std::runtime_error {
    using std::runtime_error::runtime_error;
};

const ValidationTolerances kInputTolerances{1e-9, 1e-9, -1e-9, 1e-9};

AnyState load_input(const RunConfig& config) {
    if (config.inputs.empty()) throw BadInput("missing input: no state file given");
    AnyState state = load_state(config.inputs.front());
    const ValidationReport v = std::visit(
        [](const auto& s) { return validate_state(s, kInputTolerances); }, state);
    if (!v.ok()) {
        std::ostringstream msg;
        msg << "invalid state: norm residual " << v.norm_residual << ", hermiticity residual "
            << v.hermiticity_residual << ", min eigenvalue " << v.min_eigenvalue
            << ", trace residual " << v.trace_residual;
        throw BadInput(msg.str());
    }
    return state;
}

PureState require_pure(const AnyState& state, const std::string& what) {
    if (const auto* p = std::get_if<PureState>(&state)) return p->normalized();
    throw BadInput(what + " expects a pure state (\"amplitudes\"), got a density matrix");
}

void require_dense_cap(const SubsystemLayout& layout, const std::string& what) {
    if (layout.total_dim() > kDenseDimensionCap) {
        throw BadInput("dimension cap: " + what + " needs total dimension <= " +
                       std::to_string(kDenseDimensionCap) + ", got " +
                       std::to_string(layout.total_dim()));
    }
}

std::vector<Ordering> selected_orderings(const RunConfig& config, const SubsystemLayout& layout) {
    if (layout.party_count() < 2) throw BadInput("need at least two parties");
    if (config.ordering) return {Ordering::parse(*config.ordering, layout)};
    return enumerate_orderings(layout);
}

void emit(const RunConfig& config, const std::string& text, std::ostream& out) {
    if (!config.output) {
        out << text;
        return;
    }
    std::ofstream file(*config.output);
    if (!file) throw BadInput("cannot write output file: " + config.output->string());
    file << text;
}

json tolerances(const RunConfig& config) {
    json t{{"invariant", config.tol},
           {"input_validation", kInputTolerances.norm},
           {"schmidt_prune", 1e-12},
           {"degeneracy", 1e-10},
           {"entropy_clip", 1e-12},
           {"spectrum_equality", MarginalTolerances{}.spectrum_equality},
           {"rank_threshold", MarginalTolerances{}.rank_threshold}};
    if (config.subcommand == Subcommand::Roof) {
        t["roof_tol"] = config.roof_tol;
        t["ensemble_member_prune"] = 1e-10;
    }
    return t;
}

std::string fmt(double x) {
    std::ostringstream s;
    s << std::setprecision(10) << x;
    return s.str();
}

int decompose(const RunConfig& config, std::ostream& out, std::ostream& err) {
    const PureState psi = require_pure(load_input(config), "decompose");
    bool ok = true;
    json trees = json::array();
    std::ostringstream text;
    for (const auto& o : selected_orderings(config, psi.layout())) {
        const DecompositionTree tree = compact_decomposition(psi, o);
        const TreeReport report = verify_tree(tree, psi);
        ok = ok && report.ok(config.tol);
        trees.push_back({{"tree", to_json(tree)}, {"report", to_json(report)}});
        text << o.to_string(psi.layout()) << ": leaves " << report.leaf_count << "/"
             << report.leaf_bound << ", fidelity " << fmt(report.fidelity) << ", weights";
        for (double w : tree.leaf_weights()) text << " " << fmt(w);
        text << (tree.degenerate ? " (degenerate)" : "") << "\n";
    }
    json doc{{"base", to_string(config.base)}, {"tolerances", tolerances(config)}, {"trees", trees}};
    emit(config, config.format == Format::Json ? dump(doc) : text.str(), out);
    if (!ok) {
        err << "invariant failure: tree report exceeds tolerance " << config.tol << "\n";
        return kInvariantFailure;
    }
    return kOk;
}

int measure(const RunConfig& config, std::ostream& out) {
    const PureState psi = require_pure(load_input(config), "measure");
    const auto orderings = selected_orderings(config, psi.layout());
    const PureMeasureResult r = entanglement_pure(psi, orderings, config.base);
    json doc = to_json(r, config.with_tree);
    doc["tolerances"] = tolerances(config);
    std::ostringstream text;
    text << "E^c = " << fmt(r.value) << (config.base == LogBase::Two ? " bits" : " nats")
         << " (argmin " << r.argmin_ordering.to_string(psi.layout()) << ")\n";
    for (const auto& o : r.per_ordering) {
        text << "  " << o.ordering.to_string(psi.layout()) << " " << fmt(o.entropy) << "\n";
    }
    if (config.relative_entropy) {
        require_dense_cap(psi.layout(), "relative entropy estimate");
        RelativeEntropyEstimateConfig rc;
        rc.seed = config.seed;
        rc.base = config.base;
        const RelativeEntropyEstimate e = relative_entropy_of_entanglement_estimate(psi, rc);
        doc["relative_entropy_estimate"] = to_json(e);
        text << "E_R <= " << fmt(e.value) << "\n";
    }
    emit(config, config.format == Format::Json ? dump(doc) : text.str(), out);
    return kOk;
}

int classify_cmd(const RunConfig& config, std::ostream& out, std::ostream& err) {
    const PureState psi = require_pure(load_input(config), "classify");
    if (psi.layout().dims() != std::vector<std::size_t>{2, 2, 2}) {
        throw BadInput("classify needs three qubits (dims [2,2,2])");
    }
    const Ordering ordering =
        config.ordering ? Ordering::parse(*config.ordering, psi.layout()) : Ordering::identity(3);
    const ThreeQubitClass cls = classify(psi);
    const StandardForm3Q sf = standard_form(psi, ordering);
    const PureMeasureResult m = entanglement_pure(psi, config.base);
    const PureState back = reconstruct_input(sf, psi.layout());
    const double fidelity = std::norm(psi.amplitudes().dot(back.amplitudes()));
    const ConstraintCheck check = verify_constraint(sf);

    const double bits = config.base == LogBase::Two ? m.value : m.value / std::log(2.0);
    json doc = to_json(cls, psi.layout());
    doc["p"] = sf.p;
    doc["alpha"] = sf.alpha;
    doc["beta"] = sf.beta;
    doc["theta_b"] = sf.theta_b;
    doc["theta_c"] = sf.theta_c;
    doc["Ec_bits"] = bits;
    doc["argmin_ordering"] = m.argmin_ordering.to_string(psi.layout());
    doc["standard_form"] = to_json(sf, psi.layout());
    doc["reconstruction_fidelity"] = fidelity;
    doc["tolerances"] = tolerances(config);

    std::ostringstream text;
    text << "class " << to_string(cls.label) << ", n_ms " << cls.n_ms << ", ranks "
         << cls.marginal_ranks[0] << cls.marginal_ranks[1] << cls.marginal_ranks[2] << "\n"
         << "p " << fmt(sf.p[0]) << " " << fmt(sf.p[1]) << " " << fmt(sf.p[2]) << " "
         << fmt(sf.p[3]) << ", alpha " << fmt(sf.alpha) << ", beta " << fmt(sf.beta)
         << ", theta_b " << fmt(sf.theta_b) << ", theta_c " << fmt(sf.theta_c) << "\n"
         << "E^c " << fmt(bits) << " bits\n";
    emit(config, config.format == Format::Json ? dump(doc) : text.str(), out);

    if (1.0 - fidelity > config.tol || (!check.singular && check.residual > config.tol)) {
        err << "invariant failure: standard form reconstruction " << 1.0 - fidelity
            << ", constraint residual " << check.residual << "\n";
        return kInvariantFailure;
    }
    return kOk;
}

int verify(const RunConfig& config, std::ostream& out, std::ostream& err) {
    const PureState psi = require_pure(load_input(config), "verify");
    require_dense_cap(psi.layout(), "verify");
    bool ok = true;
    json reports = json::array();
    std::ostringstream text;
    for (const auto& o : selected_orderings(config, psi.layout())) {
        const DecompositionTree tree = compact_decomposition(psi, o);
        const MembershipReport r = verify_membership(psi, decohere(tree), config.base);
        ok = ok && r.within(config.tol);
        json j = to_json(r);
        j["ordering"] = o.to_string(psi.layout());
        reports.push_back(std::move(j));
        text << o.to_string(psi.layout()) << ": marginal " << fmt(r.marginal_residual)
             << ", contrast " << fmt(r.contrast_line_residual) << ", additivity "
             << fmt(r.additivity_residual) << ", S(rho||sigma) " << fmt(r.rel_rho_sigma) << "\n";
    }
    json doc{{"base", to_string(config.base)},
             {"tolerances", tolerances(config)},
             {"reports", reports}};
    emit(config, config.format == Format::Json ? dump(doc) : text.str(), out);
    if (!ok) {
        err << "invariant failure: membership residual exceeds tolerance " << config.tol << "\n";
        return kInvariantFailure;
    }
    return kOk;
}

int roof(const RunConfig& config, std::ostream& out) {
    const AnyState input = load_input(config);
    const DensityMatrix rho = std::visit(
        [](const auto& s) {
            if constexpr (std::is_same_v<std::decay_t<decltype(s)>, PureState>) {
                return DensityMatrix(s.normalized());
            } else {
                return s;
            }
        },
        input);
    require_dense_cap(rho.layout(), "roof");
    RoofConfig rc;
    rc.ensemble_size = config.ensemble_size;
    rc.restarts = config.restarts;
    rc.max_iters = config.max_iters;
    rc.seed = config.seed;
    rc.tol = config.roof_tol;
    rc.threads = config.threads;
    rc.base = config.base;
    const RoofResult r = roof_minimize(rho, rc);
    json doc = to_json(r);
    doc["tolerances"] = tolerances(config);
    std::ostringstream text;
    text << "roof E^c <= " << fmt(r.value) << " (eigen-ensemble " << fmt(r.eigen_ensemble_value)
         << ", m " << r.ensemble_size << ", rank " << r.rank << ", best restart "
         << r.best_restart << ")\n";
    if (rho.layout().dims() == std::vector<std::size_t>{2, 2}) {
        const double ef = wootters_ef(rho, config.base);
        doc["wootters_ef"] = ef;
        text << "Wootters E_F " << fmt(ef) << "\n";
    }
    emit(config, config.format == Format::Json ? dump(doc) : text.str(), out);
    return kOk;
}

int random_cmd(const RunConfig& config, std::ostream& out) {
    if (config.dims.empty()) throw BadInput("random needs --dims");
    const SubsystemLayout layout(config.dims);
    Rng rng(config.seed);
    json doc;
    if (config.rank == 0) {
        doc = to_json(haar_random_state(layout, rng));
    } else {
        require_dense_cap(layout, "random density");
        if (config.rank > layout.total_dim()) {
            throw BadInput("rank " + std::to_string(config.rank) + " exceeds total dimension " +
                           std::to_string(layout.total_dim()));
        }
        doc = to_json(haar_random_density(layout, config.rank, rng));
    }
    emit(config, dump(doc), out);
    return kOk;
}

int named(const RunConfig& config, std::ostream& out) {
    const PureState psi = make_named_state(parse_named_state(config.name), config.parties);
    emit(config, dump(to_json(psi)), out);
    return kOk;
}

}  // namespace

std::string to_string(Subcommand s) {
    switch (s) {
    case Subcommand::Decompose: return "decompose";
    case Subcommand::Measure: return "measure";
    case Subcommand::Classify: return "classify";
    case Subcommand::Verify: return "verify";
    case Subcommand::Roof: return "roof";
    case Subcommand::Random: return "random";
    case Subcommand::Named: return "named";
    }
    return "?";
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        switch (config.subcommand) {
        case Subcommand::Decompose: return decompose(config, out, err);
        case Subcommand::Measure: return measure(config, out);
        case Subcommand::Classify: return classify_cmd(config, out, err);
        case Subcommand::Verify: return verify(config, out, err);
        case Subcommand::Roof: return roof(config, out);
        case Subcommand::Random: return random_cmd(config, out);
        case Subcommand::Named: return named(config, out);
        }
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return kBadInput;
    } catch (const BadInput& e) {
        err << "error: " << e.what() << "\n";
        return kBadInput;
    } catch (const std::invalid_argument& e) {
        err << "error: invalid argument: " << e.what() << "\n";
        return kBadInput;
    }
    return kBadInput;
}

}  // namespace qcompact::cli
