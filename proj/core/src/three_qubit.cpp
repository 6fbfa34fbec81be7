#include "qcompact/three_qubit.hpp"

#include <cmath>
#include <numbers>

#include "linalg.hpp"

namespace qcompact {

namespace {

constexpr double kTiny = 1e-12;

Vec plus_ket() {
    Vec v(2);
    v << 1.0, 1.0;
    return v / std::sqrt(2.0);
}

Vec minus_ket() {
    Vec v(2);
    v << 1.0, -1.0;
    return v / std::sqrt(2.0);
}

Vec theta_plus(double theta) {
    return std::cos(theta / 2) * plus_ket() + std::sin(theta / 2) * minus_ket();
}

Vec theta_minus(double theta) {
    return std::sin(theta / 2) * plus_ket() - std::cos(theta / 2) * minus_ket();
}

double wrap_phase(double phi) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double out = std::fmod(phi, two_pi);
    if (out < 0.0) out += two_pi;
    if (out >= two_pi - 1e-15) out = 0.0;
    return out;
}

void require_three_qubits(const SubsystemLayout& layout, const char* what) {
    if (layout.dims() != std::vector<std::size_t>{2, 2, 2}) {
        throw std::invalid_argument(std::string(what) + ": layout must be three qubits [2,2,2]");
    }
}

// Kets of one leaf slot; missing slots are filled with complements.
struct Slot {
    Vec b;
    Vec c;
    double weight = 0.0;
};

// Frame rotation for one of the last two parties. `first` and `second` are
// the branch-1 kets sent to |+> and |->; `plus_in` is the branch-2 ket
// that becomes |theta+>.
struct PartyFrame {
    double theta = 0.0;
    double phi = 0.0;   // phase on the |-> image
    double xi = 0.0;    // phase of the |theta+> image
    double zeta = 0.0;  // phase of the |theta-> image
    Mat unitary;
};

PartyFrame frame_for(const Vec& first, const Vec& second, const Vec& plus_in,
                     const Vec& minus_in) {
    PartyFrame f;
    const cplx x = first.dot(plus_in);
    const cplx y = second.dot(plus_in);
    f.theta = 2.0 * std::atan2(std::abs(y), std::abs(x));
    if (std::abs(y) < kTiny) {
        f.phi = 0.0;
    } else if (std::abs(x) < kTiny) {
        f.phi = -std::arg(y);
    } else {
        f.phi = std::arg(x) - std::arg(y);
    }
    const cplx rot = std::polar(1.0, f.phi);
    f.unitary = plus_ket() * first.adjoint() + rot * minus_ket() * second.adjoint();
    f.xi = std::abs(x) >= kTiny ? std::arg(x) : std::arg(rot * y);
    const Vec mapped_minus = f.unitary * minus_in;
    f.zeta = std::arg(theta_minus(f.theta).dot(mapped_minus));
    return f;
}

}  // namespace

PureState make_standard_form(const std::array<double, 4>& p, double alpha, double beta,
                             double theta_b, double theta_c) {
    const Vec pp = plus_ket();
    const Vec mm = minus_ket();
    const Vec t1[] = {pp, pp, pp};
    const Vec t2[] = {pp, mm, mm};
    const Vec t3[] = {mm, theta_plus(theta_b), theta_plus(theta_c)};
    const Vec t4[] = {mm, theta_minus(theta_b), theta_minus(theta_c)};
    Vec amps = std::sqrt(p[0]) * kron(t1) + std::sqrt(p[1]) * std::polar(1.0, alpha) * kron(t2) +
               std::sqrt(p[2]) * kron(t3) + std::sqrt(p[3]) * std::polar(1.0, beta) * kron(t4);
    return PureState(SubsystemLayout({2, 2, 2}), std::move(amps));
}

StandardForm3Q standard_form(const PureState& state) {
    return standard_form(state, Ordering::identity(3));
}

StandardForm3Q standard_form(const PureState& state, const Ordering& ordering) {
    require_three_qubits(state.layout(), "standard_form");
    const DecompositionTree tree = compact_decomposition(state, ordering);

    StandardForm3Q sf;
    sf.ordering = ordering;

    const Branch& root1 = tree.roots.at(0);
    const Vec a1 = root1.ket;
    const Vec a2 = tree.roots.size() > 1 ? tree.roots[1].ket : detail::qubit_complement(a1);
    const double lambda1 = root1.weight;
    const double lambda2 = tree.roots.size() > 1 ? tree.roots[1].weight : 0.0;

    Slot s1{root1.children.at(0).ket, root1.children.at(0).mate, root1.children.at(0).weight};
    Slot s2;
    if (root1.children.size() > 1) {
        s2 = Slot{root1.children[1].ket, root1.children[1].mate, root1.children[1].weight};
    } else {
        s2 = Slot{detail::qubit_complement(s1.b), detail::qubit_complement(s1.c), 0.0};
    }

    sf.p[0] = lambda1 * s1.weight;
    sf.p[1] = lambda1 * s2.weight;

    if (tree.roots.size() < 2) {
        // Second root branch vanishes: p3 = p4 = 0, angles by convention.
        sf.degenerate_parameters = true;
        const Mat ua = plus_ket() * a1.adjoint() + minus_ket() * a2.adjoint();
        const Mat ub = plus_ket() * s1.b.adjoint() + minus_ket() * s2.b.adjoint();
        const Mat uc = plus_ket() * s1.c.adjoint() + minus_ket() * s2.c.adjoint();
        sf.local_unitaries[ordering.parties[0]] = ua;
        sf.local_unitaries[ordering.parties[1]] = ub;
        sf.local_unitaries[ordering.parties[2]] = uc;
        // ub, uc send the branch-1 leaves to |++> and |-->, so alpha = 0.
        sf.alpha = 0.0;
        return sf;
    }

    const Branch& root2 = tree.roots[1];
    Slot plus_slot;
    Slot minus_slot;
    if (root2.children.size() > 1) {
        plus_slot = Slot{root2.children[0].ket, root2.children[0].mate, root2.children[0].weight};
        minus_slot = Slot{root2.children[1].ket, root2.children[1].mate, root2.children[1].weight};
    } else {
        // A single leaf goes to the p4 slot.
        minus_slot = Slot{root2.children[0].ket, root2.children[0].mate, root2.children[0].weight};
        plus_slot = Slot{detail::qubit_complement(minus_slot.b),
                         detail::qubit_complement(minus_slot.c), 0.0};
    }
    sf.p[2] = lambda2 * plus_slot.weight;
    sf.p[3] = lambda2 * minus_slot.weight;

    const PartyFrame fb = frame_for(s1.b, s2.b, plus_slot.b, minus_slot.b);
    const PartyFrame fc = frame_for(s1.c, s2.c, plus_slot.c, minus_slot.c);
    sf.theta_b = fb.theta;
    sf.theta_c = fc.theta;

    const double phi_a = -(fb.xi + fc.xi);
    const Mat ua = plus_ket() * a1.adjoint() + std::polar(1.0, phi_a) * minus_ket() * a2.adjoint();
    sf.local_unitaries[ordering.parties[0]] = ua;
    sf.local_unitaries[ordering.parties[1]] = fb.unitary;
    sf.local_unitaries[ordering.parties[2]] = fc.unitary;

    sf.alpha = sf.p[1] > kTiny ? wrap_phase(fb.phi + fc.phi) : 0.0;
    sf.beta = sf.p[3] > kTiny ? wrap_phase(fb.zeta + fc.zeta - fb.xi - fc.xi) : 0.0;
    sf.degenerate_parameters = sf.p[1] <= kTiny || sf.p[2] <= kTiny || sf.p[3] <= kTiny;
    return sf;
}

PureState standard_form_state(const StandardForm3Q& sf, const SubsystemLayout& layout) {
    require_three_qubits(layout, "standard_form_state");
    const PureState roles = make_standard_form(sf.p, sf.alpha, sf.beta, sf.theta_b, sf.theta_c);
    std::vector<std::size_t> inverse(3);
    for (std::size_t k = 0; k < 3; ++k) inverse[sf.ordering.parties[k]] = k;
    const std::vector<std::size_t> dims{2, 2, 2};
    return PureState(layout, permute_axes(roles.amplitudes(), dims, inverse));
}

PureState reconstruct_input(const StandardForm3Q& sf, const SubsystemLayout& layout) {
    const PureState standard = standard_form_state(sf, layout);
    std::vector<Mat> inverse;
    for (const auto& u : sf.local_unitaries) inverse.push_back(u.adjoint());
    return apply_local_unitary(standard, inverse, 1e-8);
}

ConstraintCheck verify_constraint(const StandardForm3Q& sf) {
    const auto& p = sf.p;
    ConstraintCheck out;
    out.numerator = std::sqrt(p[0] * p[2]) + std::sqrt(p[1] * p[3]) * std::polar(1.0, sf.beta - sf.alpha);
    out.denominator = std::sqrt(p[0] * p[3]) * std::polar(1.0, sf.beta) +
                      std::sqrt(p[1] * p[2]) * std::polar(1.0, -sf.alpha);
    const double sb = std::sin(sf.theta_b / 2);
    const double cb = std::cos(sf.theta_b / 2);
    const double sc = std::sin(sf.theta_c / 2);
    const double cc = std::cos(sf.theta_c / 2);
    out.residual = std::abs(sb * sc * out.denominator + cb * cc * out.numerator);
    out.singular = std::abs(out.denominator) < kTiny || std::abs(cb * cc) < kTiny;
    return out;
}

std::string to_string(ThreeQubitLabel label) {
    switch (label) {
        case ThreeQubitLabel::I: return "I";
        case ThreeQubitLabel::II: return "II";
        case ThreeQubitLabel::IIIa: return "III-a";
        case ThreeQubitLabel::IIIb: return "III-b";
        case ThreeQubitLabel::IIIc: return "III-c";
    }
    return "?";
}

ThreeQubitClass classify(const PureState& state, const MarginalTolerances& tol) {
    require_three_qubits(state.layout(), "classify");
    const MarginalSet m = marginals(state, tol);
    ThreeQubitClass out;
    out.n_ms = m.n_ms;
    std::size_t pure_parties = 0;
    for (std::size_t p = 0; p < 3; ++p) {
        out.marginal_ranks[p] = m.ranks[p];
        out.spectra[p] = m.spectra[p];
        if (m.ranks[p] == 1) ++pure_parties;
    }
    if (pure_parties >= 2) {
        out.label = ThreeQubitLabel::I;
    } else if (pure_parties == 1) {
        out.label = ThreeQubitLabel::II;
    } else if (m.n_ms == 1) {
        out.label = ThreeQubitLabel::IIIa;
        out.schmidt_witness = is_schmidt_decomposable(state, tol).decomposable;
    } else if (m.n_ms == 2) {
        out.label = ThreeQubitLabel::IIIb;
        std::size_t odd = 0;
        for (std::size_t p = 0; p < 3; ++p) {
            std::size_t same = 0;
            for (std::size_t q = 0; q < 3; ++q) {
                if (m.spectrum_class[q] == m.spectrum_class[p]) ++same;
            }
            if (same == 1) odd = p;
        }
        Ordering o;
        o.parties.push_back(odd);
        for (std::size_t p = 0; p < 3; ++p) {
            if (p != odd) o.parties.push_back(p);
        }
        const StandardForm3Q sf = standard_form(state, o);
        out.thetas_equal = std::abs(sf.theta_b - sf.theta_c) <= 1e-8;
        out.check_ordering = o;
    } else {
        out.label = ThreeQubitLabel::IIIc;
    }
    return out;
}

NamedState parse_named_state(const std::string& name) {
    if (name == "ghz") return NamedState::Ghz;
    if (name == "w") return NamedState::W;
    if (name == "eq8_max") return NamedState::Eq8Max;
    if (name == "product") return NamedState::Product;
    if (name == "bell_times_pure") return NamedState::BellTimesPure;
    throw std::invalid_argument("unknown named state '" + name +
                                "' (expected ghz, w, eq8_max, product, bell_times_pure)");
}

std::string to_string(NamedState name) {
    switch (name) {
        case NamedState::Ghz: return "ghz";
        case NamedState::W: return "w";
        case NamedState::Eq8Max: return "eq8_max";
        case NamedState::Product: return "product";
        case NamedState::BellTimesPure: return "bell_times_pure";
    }
    return "?";
}

PureState make_named_state(NamedState name, std::size_t parties) {
    if (parties < 2 && name != NamedState::Product) {
        throw std::invalid_argument("make_named_state: need at least two parties");
    }
    if (parties < 1) {
        throw std::invalid_argument("make_named_state: need at least one party");
    }
    switch (name) {
        case NamedState::Ghz: {
            const std::vector<Vec> plus(parties, plus_ket());
            const std::vector<Vec> minus(parties, minus_ket());
            Vec amps = (kron(plus) + kron(minus)) / std::sqrt(2.0);
            return PureState(SubsystemLayout(std::vector<std::size_t>(parties, 2)), std::move(amps));
        }
        case NamedState::W: {
            const SubsystemLayout layout(std::vector<std::size_t>(parties, 2));
            Vec amps = Vec::Zero(static_cast<Eigen::Index>(layout.total_dim()));
            for (std::size_t k = 0; k < parties; ++k) {
                amps(Eigen::Index{1} << (parties - 1 - k)) = 1.0 / std::sqrt(double(parties));
            }
            return PureState(layout, std::move(amps));
        }
        case NamedState::Eq8Max: {
            const Vec pp = plus_ket();
            const Vec mm = minus_ket();
            const Vec t1[] = {pp, pp, pp};
            const Vec t2[] = {pp, mm, mm};
            const Vec t3[] = {mm, pp, mm};
            const Vec t4[] = {mm, mm, pp};
            Vec amps = 0.5 * (kron(t1) + kron(t2) + kron(t3) + kron(t4));
            return PureState(SubsystemLayout({2, 2, 2}), std::move(amps));
        }
        case NamedState::Product: {
            const std::vector<Vec> plus(parties, plus_ket());
            return PureState(SubsystemLayout(std::vector<std::size_t>(parties, 2)), kron(plus));
        }
        case NamedState::BellTimesPure: {
            Vec bell = Vec::Zero(4);
            bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
            const Vec parts[] = {plus_ket(), bell};
            return PureState(SubsystemLayout({2, 2, 2}), kron(parts));
        }
    }
    throw std::invalid_argument("make_named_state: unknown name");
}

}  // namespace qcompact
