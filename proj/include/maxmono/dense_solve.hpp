#pragma once

#include <algorithm>

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include "maxmono/hvector.hpp"

namespace maxmono {

inline constexpr double kSymmetryTolerance = 1e-12;

template <typename Derived>
bool is_symmetric(const Eigen::MatrixBase<Derived>& m, double tol = kSymmetryTolerance) {
    if (m.rows() != m.cols()) return false;
    const double scale = std::max(1.0, static_cast<double>(m.cwiseAbs().maxCoeff()));
    return static_cast<double>((m - m.transpose()).cwiseAbs().maxCoeff()) <= tol * scale;
}

/// Cholesky factorization of a symmetric positive definite matrix, kept for
/// repeated solves.
template <typename Scalar>
class SpdSolver {
public:
    explicit SpdSolver(const Matrix<Scalar>& m) {
        if (m.rows() != m.cols()) throw UsageError("solve_spd: matrix must be square");
        if (!is_symmetric(m)) throw UsageError("solve_spd: matrix is not symmetric");
        llt_.compute(m);
        if (llt_.info() != Eigen::Success) {
            throw NumericalError("solve_spd: Cholesky breakdown, matrix is not positive definite");
        }
    }

    Eigen::Index dim() const { return llt_.rows(); }

    template <typename Rhs>
    typename Rhs::PlainObject solve(const Eigen::MatrixBase<Rhs>& rhs) const {
        if (rhs.rows() != dim()) throw UsageError("solve_spd: dimension mismatch");
        return llt_.solve(rhs);
    }

private:
    Eigen::LLT<Matrix<Scalar>> llt_;
};

/// Partial-pivot LU for the non-symmetric shifted systems (right shift,
/// non-symmetric user matrices).
template <typename Scalar>
class GeneralSolver {
public:
    explicit GeneralSolver(const Matrix<Scalar>& m) {
        if (m.rows() != m.cols()) throw UsageError("dense solve: matrix must be square");
        lu_.compute(m);
        const auto& u = lu_.matrixLU();
        const Scalar scale = std::max(Scalar(1), m.cwiseAbs().maxCoeff());
        for (Eigen::Index j = 0; j < u.rows(); ++j) {
            if (std::abs(u(j, j)) <= Scalar(1e-14) * scale) {
                throw NumericalError("dense solve: matrix is singular to working precision");
            }
        }
    }

    Eigen::Index dim() const { return lu_.rows(); }

    template <typename Rhs>
    typename Rhs::PlainObject solve(const Eigen::MatrixBase<Rhs>& rhs) const {
        if (rhs.rows() != dim()) throw UsageError("dense solve: dimension mismatch");
        return lu_.solve(rhs);
    }

private:
    Eigen::PartialPivLU<Matrix<Scalar>> lu_;
};

template <typename Scalar>
BasicHVector<Scalar> solve_spd(const Matrix<Scalar>& m, const BasicHVector<Scalar>& f) {
    const SpdSolver<Scalar> solver(m);
    return f.with_coeffs(solver.solve(f.coeffs()));
}

}  // namespace maxmono
