#pragma once

#include <vector>

#include "maxmono/hvector.hpp"

namespace maxmono {

/// Vectors drop out of a basis once their projected norm falls below this.
inline constexpr double kRankTolerance = 1e-10;

/// Finite list of vectors spanning a subspace M. All members share one
/// dimension and one inner-product weight.
template <typename Scalar>
class BasicSubspaceBasis {
public:
    explicit BasicSubspaceBasis(std::vector<BasicHVector<Scalar>> vectors)
        : vectors_(std::move(vectors)) {
        for (std::size_t i = 1; i < vectors_.size(); ++i) {
            require_compatible(vectors_.front(), vectors_[i], "SubspaceBasis");
        }
    }

    const std::vector<BasicHVector<Scalar>>& vectors() const { return vectors_; }
    std::size_t size() const { return vectors_.size(); }
    bool empty() const { return vectors_.empty(); }

private:
    std::vector<BasicHVector<Scalar>> vectors_;
};

using SubspaceBasis = BasicSubspaceBasis<double>;

/// Modified Gram-Schmidt with one re-orthogonalization pass. Members whose
/// residual after projection is below kRankTolerance are dropped, so the
/// result size is the numerical rank.
template <typename Scalar>
BasicSubspaceBasis<Scalar> orthonormalize(const BasicSubspaceBasis<Scalar>& basis) {
    if (basis.empty()) throw UsageError("orthonormalize: empty basis");
    std::vector<BasicHVector<Scalar>> out;
    for (const auto& v : basis.vectors()) {
        Vector<Scalar> w = v.coeffs();
        const Scalar weight = v.weight();
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& q : out) {
                w -= (weight * q.coeffs().dot(w)) * q.coeffs();
            }
        }
        const Scalar len = std::sqrt(weight) * w.norm();
        if (len < Scalar(kRankTolerance)) continue;
        out.emplace_back(w / len, weight);
    }
    return BasicSubspaceBasis<Scalar>(std::move(out));
}

/// Orthogonal projection of f onto span(basis); `basis` must be orthonormal.
template <typename Scalar>
BasicHVector<Scalar> project(const BasicSubspaceBasis<Scalar>& orthonormal,
                             const BasicHVector<Scalar>& f) {
    Vector<Scalar> p = Vector<Scalar>::Zero(f.dim());
    for (const auto& q : orthonormal.vectors()) {
        p += inner_product(q, f) * q.coeffs();
    }
    return f.with_coeffs(std::move(p));
}

/// Dimension of the orthogonal complement of span(basis). Zero exactly when
/// the span is the whole ambient space, the finite-dimensional form of
/// density.
template <typename Scalar>
Eigen::Index complement_dimension(const BasicSubspaceBasis<Scalar>& basis, Eigen::Index ambient_dim) {
    if (basis.empty()) return ambient_dim;
    if (basis.vectors().front().dim() != ambient_dim) {
        throw UsageError("complement_dimension: basis vectors do not live in the ambient space");
    }
    const auto rank = static_cast<Eigen::Index>(orthonormalize(basis).size());
    return ambient_dim - rank;
}

}  // namespace maxmono
