#include "maxmono/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "maxmono/dense_solve.hpp"
#include "maxmono/random.hpp"

namespace maxmono {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_positive_dim(Eigen::Index n, const char* what) {
    if (n < 1) throw UsageError(std::string(what) + ": dimension must be at least 1");
}

bool is_psd(const Matrix<double>& m) {
    const Eigen::SelfAdjointEigenSolver<Matrix<double>> eig(m, Eigen::EigenvaluesOnly);
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    return eig.eigenvalues().minCoeff() >= -1e-12 * scale;
}

double inv_h2(Eigen::Index n) {
    const double inv = static_cast<double>(n + 1);
    return inv * inv;
}

void check_weight(const OperatorSpec& op, const HVector& u, const char* what) {
    if (u.dim() != op.dim()) {
        throw UsageError(std::string(what) + ": dimension mismatch (operator " +
                         std::to_string(op.dim()) + ", vector " + std::to_string(u.dim()) + ")");
    }
    const bool grid_kind = op.as<Laplacian1D>() || op.as<Laplacian2D>();
    if (grid_kind && std::abs(u.weight() - op.weight()) > 1e-14 * op.weight()) {
        throw UsageError(std::string(what) + ": grid vector weight does not match mesh size");
    }
}

Vector<double> stencil_1d(const Vector<double>& u) {
    const Eigen::Index n = u.size();
    Vector<double> out = 2.0 * u;
    if (n > 1) {
        out.head(n - 1) -= u.tail(n - 1);
        out.tail(n - 1) -= u.head(n - 1);
    }
    return out * inv_h2(n);
}

Vector<double> stencil_2d(const Laplacian2D& lap, const Vector<double>& u) {
    const double cx = inv_h2(lap.nx);
    const double cy = inv_h2(lap.ny);
    Vector<double> out(u.size());
    for (Eigen::Index j = 0; j < lap.ny; ++j) {
        for (Eigen::Index i = 0; i < lap.nx; ++i) {
            const Eigen::Index k = i + lap.nx * j;
            const double c = u[k];
            const double w = i > 0 ? u[k - 1] : 0.0;
            const double e = i + 1 < lap.nx ? u[k + 1] : 0.0;
            const double s = j > 0 ? u[k - lap.nx] : 0.0;
            const double north = j + 1 < lap.ny ? u[k + lap.nx] : 0.0;
            out[k] = cx * (2.0 * c - w - e) + cy * (2.0 * c - s - north);
        }
    }
    return out;
}

}  // namespace

OperatorSpec::OperatorSpec(Kind kind, Eigen::Index dim, double weight, bool monotone, bool symmetric)
    : kind_(std::move(kind)), dim_(dim), weight_(weight), monotone_expected_(monotone), symmetric_(symmetric) {}

OperatorSpec OperatorSpec::spd_matrix(Matrix<double> entries) {
    if (entries.rows() != entries.cols()) throw UsageError("spd_matrix: matrix must be square");
    require_positive_dim(entries.rows(), "spd_matrix");
    if (!entries.allFinite()) throw UsageError("spd_matrix: entries must be finite");
    const Eigen::Index n = entries.rows();
    const bool sym = is_symmetric(entries);
    const bool monotone = sym && is_psd(entries);
    return OperatorSpec(SpdMatrix{std::move(entries)}, n, 1.0, monotone, sym);
}

OperatorSpec OperatorSpec::diagonal(Vector<double> weights) {
    require_positive_dim(weights.size(), "diagonal");
    if (!weights.allFinite()) throw UsageError("diagonal: weights must be finite");
    const Eigen::Index n = weights.size();
    const bool monotone = weights.minCoeff() >= 0.0;
    return OperatorSpec(Diagonal{std::move(weights)}, n, 1.0, monotone, true);
}

OperatorSpec OperatorSpec::diagonal_default(Eigen::Index dim) {
    require_positive_dim(dim, "diagonal");
    return diagonal(Vector<double>::LinSpaced(dim, 1.0, static_cast<double>(dim)));
}

OperatorSpec OperatorSpec::multiplication(Vector<double> samples) {
    require_positive_dim(samples.size(), "multiplication");
    if (!samples.allFinite()) throw UsageError("multiplication: samples must be finite");
    const Eigen::Index n = samples.size();
    const bool monotone = samples.minCoeff() >= 0.0;
    return OperatorSpec(Multiplication{std::move(samples)}, n, grid_spacing(n), monotone, true);
}

OperatorSpec OperatorSpec::right_shift(Eigen::Index n) {
    require_positive_dim(n, "right_shift");
    // n = 1 truncates S to the zero map, which is trivially monotone.
    return OperatorSpec(RightShift{n}, n, 1.0, n == 1, n == 1);
}

OperatorSpec OperatorSpec::laplacian_1d(Eigen::Index n) {
    require_positive_dim(n, "laplacian_1d");
    return OperatorSpec(Laplacian1D{n}, n, grid_spacing(n), true, true);
}

OperatorSpec OperatorSpec::laplacian_2d(Eigen::Index nx, Eigen::Index ny) {
    require_positive_dim(nx, "laplacian_2d");
    require_positive_dim(ny, "laplacian_2d");
    return OperatorSpec(Laplacian2D{nx, ny}, nx * ny, grid_spacing(nx) * grid_spacing(ny), true, true);
}

std::string OperatorSpec::kind_name() const {
    return std::visit(overloaded{
                          [](const SpdMatrix&) { return std::string("spd_matrix"); },
                          [](const Diagonal&) { return std::string("diagonal"); },
                          [](const Multiplication&) { return std::string("multiplication"); },
                          [](const RightShift&) { return std::string("right_shift"); },
                          [](const Laplacian1D&) { return std::string("laplacian_1d"); },
                          [](const Laplacian2D&) { return std::string("laplacian_2d"); },
                      },
                      kind_);
}

HVector OperatorSpec::make_vector(Vector<double> coeffs) const {
    if (coeffs.size() != dim_) throw UsageError("make_vector: dimension mismatch");
    return HVector(std::move(coeffs), weight_);
}

HVector apply(const OperatorSpec& op, const HVector& u) {
    check_weight(op, u, "apply");
    const Vector<double>& x = u.coeffs();
    Vector<double> y = std::visit(
        overloaded{
            [&](const SpdMatrix& m) -> Vector<double> { return m.entries * x; },
            [&](const Diagonal& d) -> Vector<double> { return d.weights.cwiseProduct(x); },
            [&](const Multiplication& g) -> Vector<double> { return g.samples.cwiseProduct(x); },
            [&](const RightShift& s) -> Vector<double> {
                Vector<double> out = Vector<double>::Zero(s.n);
                if (s.n > 1) out.tail(s.n - 1) = x.head(s.n - 1);
                return out;
            },
            [&](const Laplacian1D&) -> Vector<double> { return stencil_1d(x); },
            [&](const Laplacian2D& lap) -> Vector<double> { return stencil_2d(lap, x); },
        },
        op.kind());
    return u.with_coeffs(std::move(y));
}

HVector apply_adjoint(const OperatorSpec& op, const HVector& u) {
    if (const auto* m = op.as<SpdMatrix>()) {
        check_weight(op, u, "apply_adjoint");
        return u.with_coeffs(m->entries.transpose() * u.coeffs());
    }
    if (const auto* s = op.as<RightShift>()) {
        check_weight(op, u, "apply_adjoint");
        Vector<double> out = Vector<double>::Zero(s->n);
        if (s->n > 1) out.head(s->n - 1) = u.coeffs().tail(s->n - 1);
        return u.with_coeffs(std::move(out));
    }
    return apply(op, u);
}

Matrix<double> to_dense(const OperatorSpec& op) {
    const Eigen::Index n = op.dim();
    Matrix<double> m(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        m.col(j) = apply(op, HVector::basis(n, j, op.weight())).coeffs();
    }
    return m;
}

ShiftedSystem assemble_shifted(const OperatorSpec& op, double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw UsageError("assemble_shifted: lambda must be positive and finite");
    }
    const Eigen::Index n = op.dim();
    return std::visit(
        overloaded{
            [&](const SpdMatrix& m) -> ShiftedSystem {
                Matrix<double> out = lambda * m.entries;
                out.diagonal().array() += 1.0;
                return DenseSystem{std::move(out), op.symmetric()};
            },
            [&](const Diagonal& d) -> ShiftedSystem {
                return DiagonalSystem{(1.0 + lambda * d.weights.array()).matrix()};
            },
            [&](const Multiplication& g) -> ShiftedSystem {
                return DiagonalSystem{(1.0 + lambda * g.samples.array()).matrix()};
            },
            [&](const RightShift&) -> ShiftedSystem {
                Matrix<double> out = Matrix<double>::Identity(n, n);
                if (n > 1) out.diagonal(-1).setConstant(lambda);
                return DenseSystem{std::move(out), n == 1};
            },
            [&](const Laplacian1D&) -> ShiftedSystem {
                const double c = lambda * inv_h2(n);
                return TridiagonalSystem(Vector<double>::Constant(n - 1, -c),
                                         Vector<double>::Constant(n, 1.0 + 2.0 * c),
                                         Vector<double>::Constant(n - 1, -c));
            },
            [&](const Laplacian2D&) -> ShiftedSystem {
                Matrix<double> out = lambda * to_dense(op);
                out.diagonal().array() += 1.0;
                // The stencil is symmetric by construction; remove rounding asymmetry.
                out = 0.5 * (out + out.transpose()).eval();
                return DenseSystem{std::move(out), true};
            },
        },
        op.kind());
}

Vector<double> multiply(const ShiftedSystem& sys, const Vector<double>& u) {
    return std::visit(overloaded{
                          [&](const DiagonalSystem& d) -> Vector<double> {
                              if (d.diag.size() != u.size()) throw UsageError("multiply: dimension mismatch");
                              return d.diag.cwiseProduct(u);
                          },
                          [&](const TridiagonalSystem& t) -> Vector<double> { return t.multiply(u); },
                          [&](const DenseSystem& m) -> Vector<double> {
                              if (m.matrix.cols() != u.size()) throw UsageError("multiply: dimension mismatch");
                              return m.matrix * u;
                          },
                      },
                      sys);
}

double rayleigh_quotient(const OperatorSpec& op, const HVector& u) {
    const double uu = inner_product(u, u);
    if (uu == 0.0) throw UsageError("rayleigh_quotient: zero vector");
    return inner_product(apply(op, u), u) / uu;
}

CertificateReport monotonicity_certificate(const OperatorSpec& op, int samples, std::uint64_t seed) {
    if (samples < 1) throw UsageError("monotonicity_certificate: samples must be at least 1");
    const Eigen::Index n = op.dim();
    Rng rng(seed);

    double worst = std::numeric_limits<double>::infinity();
    HVector witness = HVector::basis(n, 0, op.weight());
    auto consider = [&](HVector u) {
        const double q = rayleigh_quotient(op, u);
        if (q < worst) {
            worst = q;
            witness = std::move(u);
        }
    };
    for (Eigen::Index j = 0; j < n; ++j) consider(HVector::basis(n, j, op.weight()));
    for (int s = 0; s < samples; ++s) consider(rng.unit(n, op.weight()));

    return CertificateReport{
        .property = "monotone",
        .samples = samples + static_cast<int>(n),
        .worst_value = worst,
        .witness = std::move(witness),
        .pass = worst >= -kMonotonicityTolerance,
        .lambda = std::nullopt,
    };
}

double operator_norm_estimate(const OperatorSpec& op, int iters) {
    if (iters < 1) throw UsageError("operator_norm_estimate: iters must be at least 1");
    // Fixed start vector, generic with respect to every eigenbasis in the catalog.
    Rng rng(0x5eedULL);
    HVector x = rng.unit(op.dim(), op.weight());
    double best = 0.0;
    for (int k = 0; k < iters; ++k) {
        const HVector y = apply(op, x);
        best = std::max(best, norm(y));
        HVector z = apply_adjoint(op, y);
        const double len = norm(z);
        if (len == 0.0) break;
        x = (1.0 / len) * z;
    }
    return best;
}

std::vector<ProbeRow> unboundedness_probe(Eigen::Index max_n) {
    if (max_n < 1) throw UsageError("unboundedness_probe: max_n must be at least 1");
    const OperatorSpec op = OperatorSpec::diagonal_default(max_n);
    std::vector<ProbeRow> rows;
    rows.reserve(static_cast<std::size_t>(max_n));
    for (Eigen::Index n = 1; n <= max_n; ++n) {
        const HVector e = HVector::basis(max_n, n - 1);
        rows.push_back({n, norm(apply(op, e)) / norm(e)});
    }
    return rows;
}

Eigenpair laplacian_eigenpair(Eigen::Index n, Eigen::Index mode) {
    require_positive_dim(n, "laplacian_eigenpair");
    if (mode < 1 || mode > n) throw UsageError("laplacian_eigenpair: mode must lie in [1, n]");
    const double h = grid_spacing(n);
    const double theta = static_cast<double>(mode) * std::numbers::pi * h;
    Vector<double> v(n);
    for (Eigen::Index j = 0; j < n; ++j) v[j] = std::sin(theta * static_cast<double>(j + 1));
    // 2 - 2cos(t) written as 4 sin^2(t/2) to avoid cancellation for low modes.
    const double s = std::sin(0.5 * theta);
    return {HVector(std::move(v), h), 4.0 * s * s / (h * h)};
}

}  // namespace maxmono
