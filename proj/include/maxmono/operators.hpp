#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "maxmono/hvector.hpp"
#include "maxmono/tridiagonal.hpp"

namespace maxmono {

// Operator kinds. Unbounded operators of l^2 and L^2(0,1) are represented by
// their n-dimensional truncations, so every domain is the whole space.

/// Dense square matrix. Monotone when symmetric positive semidefinite.
struct SpdMatrix {
    Matrix<double> entries;
};

/// (Tx)_n = w_n x_n on l^2. The default family has w_n = n.
struct Diagonal {
    Vector<double> weights;
};

/// (Tf)(x_j) = g(x_j) f(x_j) on the interior nodes x_j = j/(n+1) of (0,1).
struct Multiplication {
    Vector<double> samples;
};

/// S(x_1, ..., x_n) = (0, x_1, ..., x_{n-1}); the last coordinate falls off.
struct RightShift {
    Eigen::Index n;
};

/// -u'' on (0,1) with zero Dirichlet data: (-u_{j-1} + 2u_j - u_{j+1}) / h^2.
struct Laplacian1D {
    Eigen::Index n;
};

/// 5-point -Laplacian on the unit square, nx*ny interior nodes, x fastest.
struct Laplacian2D {
    Eigen::Index nx;
    Eigen::Index ny;
};

class OperatorSpec {
public:
    using Kind = std::variant<SpdMatrix, Diagonal, Multiplication, RightShift, Laplacian1D, Laplacian2D>;

    static OperatorSpec spd_matrix(Matrix<double> entries);
    static OperatorSpec diagonal(Vector<double> weights);
    /// w_n = n for n = 1..dim.
    static OperatorSpec diagonal_default(Eigen::Index dim);
    static OperatorSpec multiplication(Vector<double> samples);
    static OperatorSpec right_shift(Eigen::Index n);
    static OperatorSpec laplacian_1d(Eigen::Index n);
    static OperatorSpec laplacian_2d(Eigen::Index nx, Eigen::Index ny);

    const Kind& kind() const { return kind_; }
    Eigen::Index dim() const { return dim_; }
    bool monotone_expected() const { return monotone_expected_; }
    /// Symmetric with respect to the weighted inner product.
    bool symmetric() const { return symmetric_; }
    /// Inner-product weight of the space the operator acts on.
    double weight() const { return weight_; }
    std::string kind_name() const;

    template <typename T>
    const T* as() const { return std::get_if<T>(&kind_); }

    HVector zero() const { return HVector::zero(dim_, weight_); }
    HVector make_vector(Vector<double> coeffs) const;

private:
    OperatorSpec(Kind kind, Eigen::Index dim, double weight, bool monotone, bool symmetric);

    Kind kind_;
    Eigen::Index dim_;
    double weight_;
    bool monotone_expected_;
    bool symmetric_;
};

/// Interior mesh width of the 1D grid with n nodes.
inline double grid_spacing(Eigen::Index n) { return 1.0 / static_cast<double>(n + 1); }

HVector apply(const OperatorSpec& op, const HVector& u);
HVector apply_adjoint(const OperatorSpec& op, const HVector& u);

/// Dense matrix of the operator in the coefficient basis.
Matrix<double> to_dense(const OperatorSpec& op);

// The concrete linear system I + lambda*A, in whichever form is cheapest to
// solve.

struct DiagonalSystem {
    Vector<double> diag;
};

struct DenseSystem {
    Matrix<double> matrix;
    bool symmetric;
};

using ShiftedSystem = std::variant<DiagonalSystem, TridiagonalSystem, DenseSystem>;

ShiftedSystem assemble_shifted(const OperatorSpec& op, double lambda);

Vector<double> multiply(const ShiftedSystem& sys, const Vector<double>& u);

/// Outcome of a property sweep over sampled vectors.
struct CertificateReport {
    std::string property;
    int samples = 0;
    double worst_value = 0.0;
    HVector witness;
    bool pass = false;
    /// Resolvent parameter at which the witness was found, if any.
    std::optional<double> lambda;
};

/// <Au, u> / <u, u>; u must be nonzero.
double rayleigh_quotient(const OperatorSpec& op, const HVector& u);

/// Minimum Rayleigh quotient over `samples` seeded Gaussian unit vectors plus
/// every canonical basis vector. Passes iff the minimum is >= -1e-12.
CertificateReport monotonicity_certificate(const OperatorSpec& op, int samples, std::uint64_t seed);

inline constexpr double kMonotonicityTolerance = 1e-12;

/// Power iteration on A^T A. Returns a lower bound on ||A|| that is
/// nondecreasing in `iters`.
double operator_norm_estimate(const OperatorSpec& op, int iters);

struct ProbeRow {
    Eigen::Index n;
    double ratio;
};

/// ||T e_n|| / ||e_n|| for the default diagonal family, n = 1..max_n.
std::vector<ProbeRow> unboundedness_probe(Eigen::Index max_n);

struct Eigenpair {
    HVector vector;
    double value;
};

/// v_j = sin(mode*pi*j*h), mu = (2 - 2cos(mode*pi*h)) / h^2, 1 <= mode <= n.
Eigenpair laplacian_eigenpair(Eigen::Index n, Eigen::Index mode);

}  // namespace maxmono
