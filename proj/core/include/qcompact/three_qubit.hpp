#pragma once

// Three-qubit pure states: the four-term local-unitary standard form
//
//   sqrt(p1)|+++> + sqrt(p2) e^{i alpha}|+-->
//     + sqrt(p3)|-,tb+,tc+> + sqrt(p4) e^{i beta}|-,tb-,tc->,
//
// with |t+> = cos(t/2)|+> + sin(t/2)|->, |t-> = sin(t/2)|+> - cos(t/2)|->,
// its phase constraint, and the classification by marginal ranks and the
// number of distinct marginal spectra.

#include <array>
#include <optional>
#include <string>

#include "qcompact/measures.hpp"
#include "qcompact/schmidt_tree.hpp"
#include "qcompact/tensor.hpp"

namespace qcompact {

struct StandardForm3Q {
    std::array<double, 4> p{};
    double alpha = 0.0;    // [0, 2 pi)
    double beta = 0.0;     // [0, 2 pi)
    double theta_b = 0.0;  // [0, pi]
    double theta_c = 0.0;  // [0, pi]
    /// Role order: roles A', B', C' of the formula are parties ordering[0..2].
    Ordering ordering;
    /// Per party in layout order; applying them maps the input onto the form.
    std::array<Mat, 3> local_unitaries;
    /// Some parameters were fixed by convention (vanishing branches).
    bool degenerate_parameters = false;
};

/// Throws std::invalid_argument unless the layout is three qubits.
StandardForm3Q standard_form(const PureState& state);
StandardForm3Q standard_form(const PureState& state, const Ordering& ordering);

/// The standard-form vector itself (roles mapped back onto layout parties).
PureState standard_form_state(const StandardForm3Q& sf, const SubsystemLayout& layout);

/// Applies the inverse local unitaries to standard_form_state.
PureState reconstruct_input(const StandardForm3Q& sf, const SubsystemLayout& layout);

/// Builds the state directly from parameters in ABC role order on |+>,|-> kets.
PureState make_standard_form(const std::array<double, 4>& p, double alpha, double beta,
                             double theta_b, double theta_c);

struct ConstraintCheck {
    /// |sin(tb/2) sin(tc/2) D + cos(tb/2) cos(tc/2) N| with N, D the numerator
    /// and denominator of the tan-product relation.
    double residual = 0.0;
    /// The ratio form is undefined (|D| or cos(tb/2)cos(tc/2) below 1e-12).
    bool singular = false;
    cplx numerator;
    cplx denominator;
};

ConstraintCheck verify_constraint(const StandardForm3Q& sf);

enum class ThreeQubitLabel { I, II, IIIa, IIIb, IIIc };

std::string to_string(ThreeQubitLabel label);

struct ThreeQubitClass {
    ThreeQubitLabel label = ThreeQubitLabel::I;
    std::array<std::size_t, 3> marginal_ranks{};
    std::size_t n_ms = 0;
    std::array<std::vector<double>, 3> spectra;
    /// III-a only: a diagonal compact tree exists.
    std::optional<bool> schmidt_witness;
    /// III-b only: theta_b == theta_c within 1e-8 in the ordering that puts
    /// the party with the unmatched spectrum first.
    std::optional<bool> thetas_equal;
    std::optional<Ordering> check_ordering;
};

ThreeQubitClass classify(const PureState& state, const MarginalTolerances& tol = {});

enum class NamedState { Ghz, W, Eq8Max, Product, BellTimesPure };

/// Throws std::invalid_argument for unknown names.
NamedState parse_named_state(const std::string& name);
std::string to_string(NamedState name);

/// ghz: (|+..+> + |-..->)/sqrt2; w: one excitation spread evenly; eq8_max:
/// (|+>(|++>+|-->) + |->(|+->+|-+>))/2; product: |+..+>; bell_times_pure:
/// |+> (x) (|00>+|11>)/sqrt2. `parties` applies to ghz, w, product.
PureState make_named_state(NamedState name, std::size_t parties = 3);

}  // namespace qcompact
