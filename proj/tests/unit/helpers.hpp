#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "qcompact/tensor.hpp"

namespace qtest {

using qcompact::cplx;
using qcompact::Mat;
using qcompact::Vec;

// Computational-basis ket from a bit string like "011".
inline Vec basis_ket(const std::string& bits) {
    std::size_t index = 0;
    for (char c : bits) index = 2 * index + (c == '1' ? 1 : 0);
    Vec v = Vec::Zero(Eigen::Index{1} << bits.size());
    v(static_cast<Eigen::Index>(index)) = 1.0;
    return v;
}

inline qcompact::PureState qubits(const Vec& amps) {
    const auto n = static_cast<std::size_t>(std::lround(std::log2(static_cast<double>(amps.size()))));
    return qcompact::PureState(qcompact::SubsystemLayout(std::vector<std::size_t>(n, 2)),
                               amps.normalized());
}

// Partial trace by explicit summation over multi-indices.
inline Mat brute_partial_trace(const Mat& rho, const std::vector<std::size_t>& dims,
                               const std::vector<std::size_t>& keep) {
    const std::size_t n = dims.size();
    std::vector<bool> kept(n, false);
    for (auto k : keep) kept[k] = true;
    std::size_t dk = 1;
    for (auto k : keep) dk *= dims[k];
    const auto total = static_cast<std::size_t>(rho.rows());
    auto digits = [&](std::size_t idx) {
        std::vector<std::size_t> d(n);
        for (std::size_t p = n; p-- > 0;) {
            d[p] = idx % dims[p];
            idx /= dims[p];
        }
        return d;
    };
    Mat out = Mat::Zero(static_cast<Eigen::Index>(dk), static_cast<Eigen::Index>(dk));
    for (std::size_t i = 0; i < total; ++i) {
        const auto di = digits(i);
        for (std::size_t j = 0; j < total; ++j) {
            const auto dj = digits(j);
            bool traced_match = true;
            for (std::size_t p = 0; p < n; ++p) {
                if (!kept[p] && di[p] != dj[p]) traced_match = false;
            }
            if (!traced_match) continue;
            std::size_t ri = 0, rj = 0;
            for (std::size_t p = 0; p < n; ++p) {
                if (!kept[p]) continue;
                ri = ri * dims[p] + di[p];
                rj = rj * dims[p] + dj[p];
            }
            out(static_cast<Eigen::Index>(ri), static_cast<Eigen::Index>(rj)) +=
                rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        }
    }
    return out;
}

inline double max_diff(const Mat& a, const Mat& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace qtest
