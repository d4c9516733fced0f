#pragma once

#include "ascg/common.hpp"

#include <algorithm>
#include <random>
#include <vector>

namespace testing_helpers {

inline ascg::Vector vec(std::initializer_list<double> v) {
    ascg::Vector out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) out(i++) = x;
    return out;
}

inline ascg::Matrix gaussian(Eigen::Index r, Eigen::Index c, std::mt19937_64& rng) {
    std::normal_distribution<double> n;
    ascg::Matrix M(r, c);
    for (Eigen::Index i = 0; i < r; ++i) {
        for (Eigen::Index j = 0; j < c; ++j) M(i, j) = n(rng);
    }
    return M;
}

inline bool same_point_set(std::vector<ascg::Vector> a, std::vector<ascg::Vector> b, double tol = 1e-9) {
    if (a.size() != b.size()) return false;
    for (const auto& x : a) {
        auto it = std::find_if(b.begin(), b.end(), [&](const ascg::Vector& y) {
            return y.size() == x.size() && (x - y).cwiseAbs().maxCoeff() <= tol;
        });
        if (it == b.end()) return false;
        b.erase(it);
    }
    return true;
}

} // namespace testing_helpers
