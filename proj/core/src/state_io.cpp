#include "qcompact/state_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace qcompact {

namespace {

[[noreturn]] void malformed(const std::string& what) {
    throw InputError(InputErrorKind::Malformed, "malformed state: " + what);
}

cplx read_complex(const json& j, const std::string& where) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        malformed(where + " is not a [re, im] pair");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

SubsystemLayout read_layout(const json& doc) {
    if (!doc.contains("dims") || !doc["dims"].is_array() || doc["dims"].empty()) {
        malformed("\"dims\" must be a non-empty array");
    }
    std::vector<std::size_t> dims;
    for (const auto& d : doc["dims"]) {
        if (!d.is_number_integer() || d.get<long long>() < 1) {
            malformed("\"dims\" entries must be positive integers");
        }
        dims.push_back(d.get<std::size_t>());
    }
    std::vector<std::string> labels;
    if (doc.contains("labels")) {
        if (!doc["labels"].is_array()) malformed("\"labels\" must be an array of strings");
        for (const auto& l : doc["labels"]) {
            if (!l.is_string()) malformed("\"labels\" must be an array of strings");
            labels.push_back(l.get<std::string>());
        }
        if (labels.size() != dims.size()) malformed("\"labels\" and \"dims\" differ in length");
    }
    try {
        return SubsystemLayout(std::move(dims), std::move(labels));
    } catch (const std::invalid_argument& e) {
        malformed(e.what());
    }
}

json layout_json(const SubsystemLayout& layout) {
    return {{"dims", layout.dims()}, {"labels", layout.labels()}};
}

json product_mixture_json(const ProductMixture& mixture) {
    json terms = json::array();
    for (const auto& t : mixture.terms) {
        json kets = json::array();
        for (const auto& k : t.kets) kets.push_back(vector_json(k));
        terms.push_back({{"weight", number_json(t.weight)}, {"kets", kets}});
    }
    return terms;
}

json node_json(const std::vector<Branch>& branches, const DecompositionTree& tree,
               std::size_t level) {
    const auto& layout = tree.layout;
    const auto& order = tree.ordering.parties;
    json node;
    node["party"] = layout.label(order[level]);
    const bool leaf_level = level + 2 == order.size();
    if (leaf_level) node["mate_party"] = layout.label(order[level + 1]);
    json out = json::array();
    for (const auto& b : branches) {
        json bj{{"weight", number_json(b.weight)}, {"ket", vector_json(b.ket)}};
        if (leaf_level) {
            bj["mate_ket"] = vector_json(b.mate);
        } else {
            bj["children"] = node_json(b.children, tree, level + 1);
        }
        out.push_back(std::move(bj));
    }
    node["branches"] = std::move(out);
    return node;
}

}  // namespace

json number_json(double x) {
    if (!std::isfinite(x)) return nullptr;
    return x;
}

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

json vector_json(const Vec& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_json(v(i)));
    return out;
}

json matrix_json(const Mat& m) {
    json out = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(vector_json(m.row(r).transpose()));
    return out;
}

std::string to_string(LogBase base) { return base == LogBase::Two ? "2" : "e"; }

AnyState state_from_json(const json& doc) {
    if (!doc.is_object()) malformed("top level must be an object");
    const SubsystemLayout layout = read_layout(doc);
    const bool has_amps = doc.contains("amplitudes");
    const bool has_matrix = doc.contains("matrix");
    if (has_amps == has_matrix) malformed("exactly one of \"amplitudes\" or \"matrix\" is required");
    const auto n = static_cast<Eigen::Index>(layout.total_dim());
    if (has_amps) {
        const json& a = doc["amplitudes"];
        if (!a.is_array()) malformed("\"amplitudes\" must be an array");
        if (a.size() != layout.total_dim()) {
            malformed("expected " + std::to_string(layout.total_dim()) + " amplitudes, got " +
                      std::to_string(a.size()));
        }
        Vec v(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            v(i) = read_complex(a[static_cast<std::size_t>(i)], "amplitude " + std::to_string(i));
        }
        return PureState(layout, std::move(v));
    }
    const json& m = doc["matrix"];
    if (!m.is_array() || m.size() != layout.total_dim()) {
        malformed("\"matrix\" must have " + std::to_string(layout.total_dim()) + " rows");
    }
    Mat rho(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
        const json& row = m[static_cast<std::size_t>(r)];
        if (!row.is_array() || row.size() != layout.total_dim()) {
            malformed("matrix row " + std::to_string(r) + " has the wrong length");
        }
        for (Eigen::Index c = 0; c < n; ++c) {
            rho(r, c) = read_complex(row[static_cast<std::size_t>(c)],
                                     "matrix entry (" + std::to_string(r) + "," + std::to_string(c) + ")");
        }
    }
    return DensityMatrix(layout, std::move(rho));
}

AnyState parse_state(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(InputErrorKind::Parse, std::string("parse error: ") + e.what());
    }
    return state_from_json(doc);
}

AnyState load_state(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError(InputErrorKind::FileNotFound, "file not found: " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_state(buffer.str());
}

json to_json(const PureState& state) {
    json out = layout_json(state.layout());
    out["amplitudes"] = vector_json(state.amplitudes());
    return out;
}

json to_json(const DensityMatrix& rho) {
    json out = layout_json(rho.layout());
    out["matrix"] = matrix_json(rho.entries());
    return out;
}

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

json to_json(const DecompositionTree& tree) {
    json out;
    out["ordering"] = tree.ordering.to_string(tree.layout);
    out["layout"] = layout_json(tree.layout);
    out["pruned_weight"] = tree.pruned_weight;
    out["degenerate"] = tree.degenerate;
    out["leaf_count"] = tree.leaf_count();
    out["leaf_bound"] = tree.leaf_bound();
    out["diagonal"] = tree.is_diagonal();
    out["root"] = node_json(tree.roots, tree, 0);
    return out;
}

json to_json(const TreeReport& r) {
    return {{"orthonormality_residual", r.orthonormality_residual},
            {"mate_residual", r.mate_residual},
            {"probability_residual", r.probability_residual},
            {"min_weight", r.min_weight},
            {"fidelity", r.fidelity},
            {"leaf_count", r.leaf_count},
            {"leaf_bound", r.leaf_bound},
            {"ok", r.ok()}};
}

json to_json(const MembershipReport& r) {
    json out{{"base", to_string(r.base)},
             {"separable_by_construction", r.separable_by_construction},
             {"support_ok", r.support_ok},
             {"marginal_residual", number_json(r.marginal_residual)},
             {"contrast_line_residual", number_json(r.contrast_line_residual)},
             {"additivity_residual", number_json(r.additivity_residual)},
             {"entropy_gap_residual", number_json(r.entropy_gap_residual)},
             {"entropy_rho", r.entropy_rho},
             {"entropy_sigma", r.entropy_sigma},
             {"entropy_product", r.entropy_product},
             {"rel_rho_sigma", number_json(r.rel_rho_sigma)},
             {"rel_sigma_product", number_json(r.rel_sigma_product)},
             {"rel_rho_product", number_json(r.rel_rho_product)}};
    if (!std::isfinite(r.rel_rho_sigma)) out["rel_rho_sigma_finite"] = false;
    return out;
}

json to_json(const PureMeasureResult& r, bool include_tree) {
    const auto& layout = r.tree.layout;
    json per = json::array();
    for (const auto& o : r.per_ordering) {
        per.push_back({{"ordering", o.ordering.to_string(layout)}, {"entropy", o.entropy}});
    }
    const double bits = r.base == LogBase::Two ? r.value : r.value / std::log(2.0);
    json out{{"base", to_string(r.base)},
             {"value", r.value},
             {"Ec_bits", bits},
             {"argmin_ordering", r.argmin_ordering.to_string(layout)},
             {"per_ordering", per},
             {"correlation_rho", r.correlation_rho},
             {"correlation_sigma", r.correlation_sigma},
             {"nested_terms", nested_entropy_terms(r.tree, r.base)},
             {"sigma_weights", r.sigma.weights()},
             {"degenerate", r.degenerate}};
    if (include_tree) out["tree"] = to_json(r.tree);
    return out;
}

json to_json(const StandardForm3Q& sf, const SubsystemLayout& layout) {
    const ConstraintCheck check = verify_constraint(sf);
    json unitaries = json::array();
    for (const auto& u : sf.local_unitaries) unitaries.push_back(matrix_json(u));
    return {{"ordering", sf.ordering.to_string(layout)},
            {"p", sf.p},
            {"alpha", sf.alpha},
            {"beta", sf.beta},
            {"theta_b", sf.theta_b},
            {"theta_c", sf.theta_c},
            {"degenerate_parameters", sf.degenerate_parameters},
            {"constraint_residual", check.residual},
            {"constraint_singular", check.singular},
            {"local_unitaries", unitaries}};
}

json to_json(const ThreeQubitClass& cls, const SubsystemLayout& layout) {
    json out{{"class", to_string(cls.label)},
             {"ranks", cls.marginal_ranks},
             {"n_ms", cls.n_ms},
             {"spectra", cls.spectra}};
    if (cls.schmidt_witness) out["schmidt_witness"] = *cls.schmidt_witness;
    if (cls.thetas_equal) out["thetas_equal"] = *cls.thetas_equal;
    if (cls.check_ordering) out["check_ordering"] = cls.check_ordering->to_string(layout);
    return out;
}

json to_json(const RoofResult& r) {
    json restarts = json::array();
    for (const auto& s : r.restarts) {
        restarts.push_back({{"start_value", s.start_value},
                            {"value", s.value},
                            {"converged", s.converged},
                            {"iterations", s.iterations},
                            {"trace", s.trace}});
    }
    json states = json::array();
    for (const auto& s : r.best_ensemble.states) states.push_back(vector_json(s.amplitudes()));
    return {{"base", to_string(r.base)},
            {"value", r.value},
            {"upper_bound", true},
            {"ensemble_size", r.ensemble_size},
            {"rank", r.rank},
            {"restarts_used", r.restarts_used},
            {"best_restart", r.best_restart},
            {"eigen_ensemble_value", r.eigen_ensemble_value},
            {"converged", r.converged_flags()},
            {"restarts", restarts},
            {"best_ensemble",
             {{"weights", r.best_ensemble.weights},
              {"states", states},
              {"isometry", matrix_json(r.best_ensemble.isometry)}}}};
}

json to_json(const RelativeEntropyEstimate& e) {
    return {{"value", number_json(e.value)},
            {"upper_bound", true},
            {"compact_seed_value", number_json(e.compact_seed_value)},
            {"restart_values", e.restart_values},
            {"converged", e.converged},
            {"witness", product_mixture_json(e.witness)}};
}

}  // namespace qcompact
