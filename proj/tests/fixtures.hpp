#pragma once

// Standard-form representatives of the three-qubit classes.

#include <array>
#include <cmath>
#include <numbers>

#include "qcompact/three_qubit.hpp"

namespace qtest {

struct ClassFixture {
    const char* name;
    qcompact::ThreeQubitLabel expected;
    std::array<double, 4> p;
    double alpha, beta, theta_b, theta_c;

    qcompact::PureState state() const {
        return qcompact::make_standard_form(p, alpha, beta, theta_b, theta_c);
    }
};

// ratio appearing in tan(tb/2) tan(tc/2) for alpha = 0, beta = pi
inline double tan_product(const std::array<double, 4>& p) {
    return (std::sqrt(p[0] * p[2]) - std::sqrt(p[1] * p[3])) /
           (std::sqrt(p[0] * p[3]) - std::sqrt(p[1] * p[2]));
}

inline std::array<ClassFixture, 5> class_fixtures() {
    using L = qcompact::ThreeQubitLabel;
    constexpr double pi = std::numbers::pi;

    const std::array<double, 4> pb{0.5, 0.1, 0.25, 0.15};
    const double tb = 2.0 * std::atan(std::sqrt(tan_product(pb)));

    const std::array<double, 4> pc{0.45, 0.05, 0.3, 0.2};
    const double tc_b = 1.1;
    const double tc_c = 2.0 * std::atan(tan_product(pc) / std::tan(tc_b / 2.0));

    return {{
        {"product", L::I, {1.0, 0.0, 0.0, 0.0}, 0.0, 0.0, 0.0, 0.0},
        {"pure first party", L::II, {0.7, 0.3, 0.0, 0.0}, 0.0, 0.0, 0.0, 0.0},
        {"schmidt decomposable", L::IIIa, {0.6, 0.0, 0.0, 0.4}, 0.0, 0.0, 0.0, 0.0},
        {"two equal spectra", L::IIIb, pb, 0.0, pi, tb, tb},
        {"generic", L::IIIc, pc, 0.0, pi, tc_b, tc_c},
    }};
}

}  // namespace qtest
