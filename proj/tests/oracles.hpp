#pragma once

// Independent reference computations for the test suites. Nothing here calls
// into the library's solvers, so agreement is a genuine cross-check.

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace maxmono::oracle {

/// Gaussian elimination with partial pivoting on a copy of (a | b).
inline Eigen::VectorXd gauss_solve(Eigen::MatrixXd a, Eigen::VectorXd b) {
    const Eigen::Index n = a.rows();
    for (Eigen::Index k = 0; k < n; ++k) {
        Eigen::Index p = k;
        for (Eigen::Index i = k + 1; i < n; ++i) {
            if (std::abs(a(i, k)) > std::abs(a(p, k))) p = i;
        }
        if (p != k) {
            a.row(k).swap(a.row(p));
            std::swap(b[k], b[p]);
        }
        for (Eigen::Index i = k + 1; i < n; ++i) {
            const double m = a(i, k) / a(k, k);
            for (Eigen::Index j = k; j < n; ++j) a(i, j) -= m * a(k, j);
            b[i] -= m * b[k];
        }
    }
    Eigen::VectorXd x(n);
    for (Eigen::Index i = n - 1; i >= 0; --i) {
        double s = b[i];
        for (Eigen::Index j = i + 1; j < n; ++j) s -= a(i, j) * x[j];
        x[i] = s / a(i, i);
    }
    return x;
}

/// Rank of the matrix whose rows are `rows`, by row reduction to echelon
/// form with partial pivoting. Pivots below tol * max|entry| count as zero.
inline int row_reduction_rank(std::vector<std::vector<double>> rows, double tol = 1e-9) {
    if (rows.empty()) return 0;
    const std::size_t cols = rows.front().size();
    double scale = 0.0;
    for (const auto& r : rows)
        for (double v : r) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) return 0;
    int rank = 0;
    std::size_t pivot_row = 0;
    for (std::size_t c = 0; c < cols && pivot_row < rows.size(); ++c) {
        std::size_t best = pivot_row;
        for (std::size_t i = pivot_row + 1; i < rows.size(); ++i) {
            if (std::abs(rows[i][c]) > std::abs(rows[best][c])) best = i;
        }
        if (std::abs(rows[best][c]) <= tol * scale) continue;
        std::swap(rows[pivot_row], rows[best]);
        for (std::size_t i = pivot_row + 1; i < rows.size(); ++i) {
            const double m = rows[i][c] / rows[pivot_row][c];
            for (std::size_t j = c; j < cols; ++j) rows[i][j] -= m * rows[pivot_row][j];
        }
        ++pivot_row;
        ++rank;
    }
    return rank;
}

/// Tridiagonal matrix realized densely, entry by entry.
inline Eigen::MatrixXd dense_tridiagonal(const Eigen::VectorXd& sub, const Eigen::VectorXd& diag,
                                         const Eigen::VectorXd& sup) {
    const Eigen::Index n = diag.size();
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        m(i, i) = diag[i];
        if (i > 0) m(i, i - 1) = sub[i - 1];
        if (i + 1 < n) m(i, i + 1) = sup[i];
    }
    return m;
}

}  // namespace maxmono::oracle
