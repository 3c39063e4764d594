#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "maxmono/operators.hpp"
#include "maxmono/random.hpp"

namespace maxmono::fixtures {

/// G^T G / n for a Gaussian G, with an exact zero eigenvalue when rank < n.
inline Matrix<double> random_psd(Eigen::Index n, Rng& rng, Eigen::Index rank = -1) {
    if (rank < 0) rank = n;
    Matrix<double> g(rank, n);
    for (Eigen::Index i = 0; i < rank; ++i)
        for (Eigen::Index j = 0; j < n; ++j) g(i, j) = rng.normal();
    Matrix<double> a = g.transpose() * g / static_cast<double>(n);
    return 0.5 * (a + a.transpose());
}

/// g(x) = 1 + sin(2 pi x)^2 >= 0 on the interior nodes of (0,1).
inline Vector<double> nonnegative_samples(Eigen::Index n) {
    Vector<double> g(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const double x = grid_spacing(n) * static_cast<double>(j + 1);
        g[j] = 1.0 + std::pow(std::sin(2.0 * std::numbers::pi * x), 2);
    }
    return g;
}

/// g(x) = cos(2 pi x), which changes sign.
inline Vector<double> sign_changing_samples(Eigen::Index n) {
    Vector<double> g(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        g[j] = std::cos(2.0 * std::numbers::pi * grid_spacing(n) * static_cast<double>(j + 1));
    }
    return g;
}

/// Every monotone kind at desk scale.
inline std::vector<OperatorSpec> monotone_catalog(std::uint64_t seed = 1) {
    Rng rng(seed);
    return {
        OperatorSpec::spd_matrix(random_psd(20, rng)),
        OperatorSpec::spd_matrix(random_psd(12, rng, 6)),
        OperatorSpec::diagonal_default(50),
        OperatorSpec::multiplication(nonnegative_samples(40)),
        OperatorSpec::laplacian_1d(99),
        OperatorSpec::laplacian_2d(15, 15),
    };
}

/// Monotone kinds plus the non-monotone ones.
inline std::vector<OperatorSpec> full_catalog(std::uint64_t seed = 1) {
    auto ops = monotone_catalog(seed);
    ops.push_back(OperatorSpec::right_shift(30));
    ops.push_back(OperatorSpec::multiplication(sign_changing_samples(33)));
    return ops;
}

}  // namespace maxmono::fixtures
