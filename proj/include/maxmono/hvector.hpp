#pragma once

#include <cmath>
#include <initializer_list>
#include <string>

#include <Eigen/Dense>

#include "maxmono/errors.hpp"

namespace maxmono {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Element of a discretized Hilbert space.
///
/// The inner product is `weight * sum_j u_j v_j`. A weight of 1 models a
/// truncation of l^2; a weight equal to the mesh width h models a grid
/// function in L^2(0,1) sampled at interior nodes. 2D grids use hx*hy.
template <typename Scalar>
class BasicHVector {
public:
    using scalar_type = Scalar;
    using coeffs_type = Vector<Scalar>;

    BasicHVector(coeffs_type coeffs, Scalar weight = Scalar(1))
        : coeffs_(std::move(coeffs)), weight_(weight) {
        if (coeffs_.size() < 1) {
            throw UsageError("HVector: dimension must be at least 1");
        }
        if (!(weight_ > Scalar(0)) || !std::isfinite(static_cast<double>(weight_))) {
            throw UsageError("HVector: weight must be positive and finite");
        }
        if (!coeffs_.allFinite()) {
            throw UsageError("HVector: coefficients must be finite");
        }
    }

    BasicHVector(std::initializer_list<Scalar> values, Scalar weight = Scalar(1))
        : BasicHVector(from_list(values), weight) {}

    static BasicHVector zero(Eigen::Index n, Scalar weight = Scalar(1)) {
        return BasicHVector(coeffs_type::Zero(n), weight);
    }

    static BasicHVector basis(Eigen::Index n, Eigen::Index j, Scalar weight = Scalar(1)) {
        if (j < 0 || j >= n) throw UsageError("HVector::basis: index out of range");
        return BasicHVector(coeffs_type::Unit(n, j), weight);
    }

    Eigen::Index dim() const { return coeffs_.size(); }
    Scalar weight() const { return weight_; }
    const coeffs_type& coeffs() const { return coeffs_; }
    Scalar operator[](Eigen::Index j) const { return coeffs_[j]; }

    /// Same dimension and weight; required for every binary operation.
    bool compatible(const BasicHVector& other) const {
        if (dim() != other.dim()) return false;
        const Scalar scale = std::max(weight_, other.weight_);
        return std::abs(weight_ - other.weight_) <= Scalar(1e-14) * scale;
    }

    /// New vector in the same space with different coefficients.
    BasicHVector with_coeffs(coeffs_type coeffs) const {
        if (coeffs.size() != dim()) throw UsageError("HVector: dimension mismatch");
        return BasicHVector(std::move(coeffs), weight_);
    }

private:
    static coeffs_type from_list(std::initializer_list<Scalar> values) {
        coeffs_type c(static_cast<Eigen::Index>(values.size()));
        Eigen::Index j = 0;
        for (Scalar v : values) c[j++] = v;
        return c;
    }

    coeffs_type coeffs_;
    Scalar weight_;
};

using HVector = BasicHVector<double>;

template <typename Scalar>
void require_compatible(const BasicHVector<Scalar>& u, const BasicHVector<Scalar>& v,
                        const char* what) {
    if (u.dim() != v.dim()) {
        throw UsageError(std::string(what) + ": dimension mismatch (" + std::to_string(u.dim()) +
                         " vs " + std::to_string(v.dim()) + ")");
    }
    if (!u.compatible(v)) throw UsageError(std::string(what) + ": inner-product weight mismatch");
}

template <typename Scalar>
Scalar inner_product(const BasicHVector<Scalar>& u, const BasicHVector<Scalar>& v) {
    require_compatible(u, v, "inner_product");
    return u.weight() * u.coeffs().dot(v.coeffs());
}

template <typename Scalar>
Scalar norm(const BasicHVector<Scalar>& u) {
    return std::sqrt(u.weight()) * u.coeffs().norm();
}

template <typename Scalar>
BasicHVector<Scalar> operator+(const BasicHVector<Scalar>& u, const BasicHVector<Scalar>& v) {
    require_compatible(u, v, "operator+");
    return u.with_coeffs(u.coeffs() + v.coeffs());
}

template <typename Scalar>
BasicHVector<Scalar> operator-(const BasicHVector<Scalar>& u, const BasicHVector<Scalar>& v) {
    require_compatible(u, v, "operator-");
    return u.with_coeffs(u.coeffs() - v.coeffs());
}

template <typename Scalar>
BasicHVector<Scalar> operator*(Scalar a, const BasicHVector<Scalar>& u) {
    return u.with_coeffs(a * u.coeffs());
}

template <typename Scalar>
BasicHVector<Scalar> operator*(const BasicHVector<Scalar>& u, Scalar a) {
    return a * u;
}

/// a*u + b*v in one pass.
template <typename Scalar>
BasicHVector<Scalar> linear_combination(Scalar a, const BasicHVector<Scalar>& u, Scalar b,
                                        const BasicHVector<Scalar>& v) {
    require_compatible(u, v, "linear_combination");
    return u.with_coeffs(a * u.coeffs() + b * v.coeffs());
}

template <typename Scalar>
Scalar distance(const BasicHVector<Scalar>& u, const BasicHVector<Scalar>& v) {
    require_compatible(u, v, "distance");
    return std::sqrt(u.weight()) * (u.coeffs() - v.coeffs()).norm();
}

}  // namespace maxmono
