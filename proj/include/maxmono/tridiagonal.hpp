#pragma once

#include <cmath>
#include <string>

#include "maxmono/hvector.hpp"

namespace maxmono {

/// Tridiagonal matrix with sub-diagonal `sub` (n-1), diagonal `diag` (n) and
/// super-diagonal `sup` (n-1). Construction enforces strict row diagonal
/// dominance, which makes the Thomas sweep pivot-free and stable.
template <typename Scalar>
class BasicTridiagonalSystem {
public:
    BasicTridiagonalSystem(Vector<Scalar> sub, Vector<Scalar> diag, Vector<Scalar> sup)
        : sub_(std::move(sub)), diag_(std::move(diag)), sup_(std::move(sup)) {
        const Eigen::Index n = diag_.size();
        if (n < 1) throw UsageError("TridiagonalSystem: empty diagonal");
        if (sub_.size() != n - 1 || sup_.size() != n - 1) {
            throw UsageError("TridiagonalSystem: off-diagonals must have length n-1");
        }
        if (!sub_.allFinite() || !diag_.allFinite() || !sup_.allFinite()) {
            throw UsageError("TridiagonalSystem: entries must be finite");
        }
        for (Eigen::Index j = 0; j < n; ++j) {
            const Scalar off = (j > 0 ? std::abs(sub_[j - 1]) : Scalar(0)) +
                               (j + 1 < n ? std::abs(sup_[j]) : Scalar(0));
            if (!(std::abs(diag_[j]) > off)) {
                throw UsageError("TridiagonalSystem: row " + std::to_string(j) +
                                 " is not strictly diagonally dominant");
            }
        }
    }

    Eigen::Index dim() const { return diag_.size(); }
    const Vector<Scalar>& sub() const { return sub_; }
    const Vector<Scalar>& diag() const { return diag_; }
    const Vector<Scalar>& sup() const { return sup_; }

    Vector<Scalar> multiply(const Vector<Scalar>& u) const {
        if (u.size() != dim()) throw UsageError("TridiagonalSystem: dimension mismatch");
        const Eigen::Index n = dim();
        Vector<Scalar> out = diag_.cwiseProduct(u);
        if (n > 1) {
            out.head(n - 1) += sup_.cwiseProduct(u.tail(n - 1));
            out.tail(n - 1) += sub_.cwiseProduct(u.head(n - 1));
        }
        return out;
    }

    Matrix<Scalar> to_dense() const {
        const Eigen::Index n = dim();
        Matrix<Scalar> m = Matrix<Scalar>::Zero(n, n);
        m.diagonal() = diag_;
        if (n > 1) {
            m.diagonal(-1) = sub_;
            m.diagonal(1) = sup_;
        }
        return m;
    }

    /// Thomas algorithm. Throws NumericalError on a vanishing pivot.
    Vector<Scalar> solve(const Vector<Scalar>& rhs) const {
        const Eigen::Index n = dim();
        if (rhs.size() != n) throw UsageError("solve_tridiagonal: dimension mismatch");
        Vector<Scalar> c(n);
        Vector<Scalar> x(n);
        Scalar pivot = diag_[0];
        if (pivot == Scalar(0)) throw NumericalError("solve_tridiagonal: zero pivot at row 0");
        c[0] = n > 1 ? sup_[0] / pivot : Scalar(0);
        x[0] = rhs[0] / pivot;
        for (Eigen::Index j = 1; j < n; ++j) {
            pivot = diag_[j] - sub_[j - 1] * c[j - 1];
            if (pivot == Scalar(0)) {
                throw NumericalError("solve_tridiagonal: zero pivot at row " + std::to_string(j));
            }
            c[j] = j + 1 < n ? sup_[j] / pivot : Scalar(0);
            x[j] = (rhs[j] - sub_[j - 1] * x[j - 1]) / pivot;
        }
        for (Eigen::Index j = n - 2; j >= 0; --j) x[j] -= c[j] * x[j + 1];
        return x;
    }

private:
    Vector<Scalar> sub_;
    Vector<Scalar> diag_;
    Vector<Scalar> sup_;
};

using TridiagonalSystem = BasicTridiagonalSystem<double>;

template <typename Scalar>
BasicHVector<Scalar> solve_tridiagonal(const BasicTridiagonalSystem<Scalar>& sys,
                                       const BasicHVector<Scalar>& f) {
    if (sys.dim() != f.dim()) throw UsageError("solve_tridiagonal: dimension mismatch");
    return f.with_coeffs(sys.solve(f.coeffs()));
}

}  // namespace maxmono
