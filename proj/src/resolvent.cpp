#include "maxmono/resolvent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "maxmono/random.hpp"

namespace maxmono {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Intermediate stages are solved this much tighter than the outer tolerance.
constexpr double kInnerTightening = 0.1;
// The final residual ||u + lambda A u - f|| must sit within this multiple of
// tol * max(1, ||f||).
constexpr double kResidualSafety = 10.0;

double contraction_factor(double prev, double next) { return std::abs(1.0 - prev / next); }

void require_positive(double lambda, const char* what) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw UsageError(std::string(what) + ": lambda must be positive and finite");
    }
}

HVector flatten(const Matrix<double>& m) {
    return HVector(Eigen::Map<const Vector<double>>(m.data(), m.size()), 1.0);
}

Matrix<double> unflatten(const HVector& v, Eigen::Index n) {
    return Eigen::Map<const Matrix<double>>(v.coeffs().data(), n, n);
}

}  // namespace

void ResolventConfig::validate() const {
    require_positive(lambda, "ResolventConfig");
    require_positive(base_lambda, "ResolventConfig base");
    if (!(stage_ratio > 0.5 && stage_ratio < 1.0)) {
        throw UsageError("ResolventConfig: stage_ratio must lie strictly inside (1/2, 1)");
    }
    if (!(tol > 0.0)) throw UsageError("ResolventConfig: tol must be positive");
    if (max_iters < 1) throw UsageError("ResolventConfig: max_iters must be at least 1");
    if (upward_ratio && !(*upward_ratio > 1.0 && std::isfinite(*upward_ratio))) {
        throw UsageError("ResolventConfig: upward_ratio must exceed 1");
    }
}

DirectResolvent::DirectResolvent(const OperatorSpec& op, double lambda)
    : lambda_(lambda),
      dim_(op.dim()),
      weight_(op.weight()),
      factor_(std::visit(overloaded{
                             [](DiagonalSystem&& d) -> Factorization {
                                 if ((d.diag.array() == 0.0).any()) {
                                     throw NumericalError("resolve_direct: I + lambda A has a zero diagonal entry");
                                 }
                                 return Factorization(std::in_place_index<0>, std::move(d.diag));
                             },
                             [](TridiagonalSystem&& t) -> Factorization {
                                 return Factorization(std::in_place_index<1>, std::move(t));
                             },
                             [](DenseSystem&& m) -> Factorization {
                                 if (m.symmetric) return Factorization(std::in_place_index<2>, m.matrix);
                                 return Factorization(std::in_place_index<3>, m.matrix);
                             },
                         },
                         assemble_shifted(op, lambda))) {}

Matrix<double> DirectResolvent::solve(const Matrix<double>& rhs) const {
    if (rhs.rows() != dim_) throw UsageError("resolve_direct: dimension mismatch");
    return std::visit(overloaded{
                          [&](const Vector<double>& d) -> Matrix<double> {
                              return d.cwiseInverse().asDiagonal() * rhs;
                          },
                          [&](const TridiagonalSystem& t) -> Matrix<double> {
                              Matrix<double> out(rhs.rows(), rhs.cols());
                              for (Eigen::Index j = 0; j < rhs.cols(); ++j) out.col(j) = t.solve(rhs.col(j));
                              return out;
                          },
                          [&](const SpdSolver<double>& s) -> Matrix<double> { return s.solve(rhs); },
                          [&](const GeneralSolver<double>& s) -> Matrix<double> { return s.solve(rhs); },
                      },
                      factor_);
}

HVector DirectResolvent::solve(const HVector& f) const {
    if (f.dim() != dim_) throw UsageError("resolve_direct: dimension mismatch");
    if (f.coeffs().isZero(0.0)) return f;
    Vector<double> u = std::visit(overloaded{
                                      [&](const Vector<double>& d) -> Vector<double> {
                                          return f.coeffs().cwiseQuotient(d);
                                      },
                                      [&](const TridiagonalSystem& t) -> Vector<double> {
                                          return t.solve(f.coeffs());
                                      },
                                      [&](const SpdSolver<double>& s) -> Vector<double> {
                                          return s.solve(f.coeffs());
                                      },
                                      [&](const GeneralSolver<double>& s) -> Vector<double> {
                                          return s.solve(f.coeffs());
                                      },
                                  },
                                  factor_);
    if (!u.allFinite()) throw NumericalError("resolve_direct: solution is not finite");
    return f.with_coeffs(std::move(u));
}

HVector resolve_direct(const OperatorSpec& op, double lambda, const HVector& f) {
    require_positive(lambda, "resolve_direct");
    if (f.dim() != op.dim()) throw UsageError("resolve_direct: dimension mismatch");
    if (f.coeffs().isZero(0.0)) return f;
    return DirectResolvent(op, lambda).solve(f);
}

HVector bootstrap_map(const OperatorSpec& op, double base_lambda, double lambda, const HVector& f,
                      const HVector& u) {
    require_positive(base_lambda, "bootstrap_map base");
    require_positive(lambda, "bootstrap_map");
    const double c = base_lambda / lambda;
    return resolve_direct(op, base_lambda, linear_combination(c, f, 1.0 - c, u));
}

std::vector<double> stage_schedule(double base_lambda, double target_lambda, double ratio,
                                   std::optional<double> upward_ratio) {
    require_positive(base_lambda, "stage_schedule base");
    require_positive(target_lambda, "stage_schedule target");
    if (!(ratio > 0.5 && ratio < 1.0)) throw UsageError("stage_schedule: ratio must lie strictly inside (1/2, 1)");

    std::vector<double> stages;
    if (target_lambda >= base_lambda) {
        if (!upward_ratio) return {target_lambda};
        if (!(*upward_ratio > 1.0)) throw UsageError("stage_schedule: upward ratio must exceed 1");
        double current = base_lambda;
        while (current * *upward_ratio < target_lambda) {
            current *= *upward_ratio;
            stages.push_back(current);
        }
        stages.push_back(target_lambda);
        return stages;
    }

    double current = base_lambda;
    for (;;) {
        const double next = current * ratio;
        if (next <= target_lambda) {
            stages.push_back(target_lambda);
            break;
        }
        // One more geometric step would be the last before undershooting;
        // when the target is still reachable from here, go there directly.
        if (next * ratio < target_lambda && target_lambda > 0.5 * current) {
            stages.push_back(target_lambda);
            break;
        }
        stages.push_back(next);
        current = next;
    }
    return stages;
}

BootstrapResolvent::BootstrapResolvent(const OperatorSpec& op, const ResolventConfig& cfg)
    : op_(op), cfg_(cfg), root_(op, (cfg.validate(), cfg.base_lambda)) {
    if (!op.monotone_expected()) {
        throw UsageError("resolve_bootstrap: operator '" + op.kind_name() +
                         "' is not monotone; use the direct method");
    }
    schedule_ = stage_schedule(cfg.base_lambda, cfg.lambda, cfg.stage_ratio, cfg.upward_ratio);

    const double step_ratio = cfg.lambda < cfg.base_lambda ? cfg.stage_ratio : cfg.upward_ratio.value_or(1.0);
    double prev = cfg.base_lambda;
    for (double stage : schedule_) {
        const double geometric = prev * step_ratio;
        clamped_.push_back(std::abs(stage - geometric) > 1e-12 * geometric &&
                           contraction_factor(prev, stage) > contraction_factor(prev, geometric) + 1e-12);
        prev = stage;
    }

    const Eigen::Index n = op.dim();
    const double inner_tol = kInnerTightening * cfg.tol;
    prev = cfg.base_lambda;
    for (std::size_t s = 0; s + 1 < schedule_.size(); ++s) {
        const double stage = schedule_[s];
        const double factor = contraction_factor(prev, stage);
        const double c = prev / stage;
        const Matrix<double> identity = Matrix<double>::Identity(n, n);

        ContractionMap map{
            [&](const HVector& flat) {
                Matrix<double> arg = (1.0 - c) * unflatten(flat, n);
                arg.diagonal().array() += c;
                return flatten(apply_base(arg));
            },
            factor,
        };
        // Warm start at the previous stage resolvent.
        const HVector start = flatten(apply_base(identity));
        try {
            auto [solution, report] = iterate(map, start, inner_tol, cfg.max_iters);
            prepared_.push_back({stage, factor, clamped_[s], std::move(report)});
            penultimate_ = unflatten(solution, n);
        } catch (const NonConvergenceError& e) {
            throw BootstrapNonConvergenceError("resolve_bootstrap: stage " + std::to_string(s + 1) +
                                                   " did not converge: " + e.what(),
                                               e.report(), BootstrapTrace{prepared_});
        }
        prev = stage;
    }
}

Matrix<double> BootstrapResolvent::apply_base(const Matrix<double>& rhs) const {
    if (penultimate_) return *penultimate_ * rhs;
    return root_.solve(rhs);
}

Vector<double> BootstrapResolvent::apply_base(const Vector<double>& rhs) const {
    if (penultimate_) return *penultimate_ * rhs;
    return root_.solve(HVector(rhs, op_.weight())).coeffs();
}

std::pair<HVector, BootstrapTrace> BootstrapResolvent::solve(const HVector& f) const {
    if (f.dim() != op_.dim()) throw UsageError("resolve_bootstrap: dimension mismatch");
    const double target = schedule_.back();
    const double prev = schedule_.size() > 1 ? schedule_[schedule_.size() - 2] : cfg_.base_lambda;
    const double factor = contraction_factor(prev, target);
    const double c = prev / target;

    BootstrapTrace trace{prepared_};
    if (f.coeffs().isZero(0.0)) {
        IterationReport report;
        report.k_claimed = factor;
        report.converged = true;
        trace.stages.push_back({target, factor, clamped_.back(), std::move(report)});
        return {f, std::move(trace)};
    }

    const double scale = std::max(1.0, norm(f));
    const double residual_target = kResidualSafety * cfg_.tol * scale;
    ContractionMap map{
        [&](const HVector& u) {
            return f.with_coeffs(apply_base((c * f.coeffs() + (1.0 - c) * u.coeffs()).eval()));
        },
        factor,
    };
    const AcceptanceTest accept = [&](const HVector& u) {
        return resolvent_residual(op_, target, f, u) <= residual_target;
    };
    try {
        auto [u, report] = iterate(map, f.with_coeffs(Vector<double>::Zero(f.dim())), cfg_.tol * scale,
                                   cfg_.max_iters, accept);
        trace.stages.push_back({target, factor, clamped_.back(), std::move(report)});
        return {std::move(u), std::move(trace)};
    } catch (const NonConvergenceError& e) {
        trace.stages.push_back({target, factor, clamped_.back(), e.report()});
        throw BootstrapNonConvergenceError(std::string("resolve_bootstrap: final stage did not converge: ") + e.what(),
                                           e.report(), std::move(trace));
    }
}

std::pair<HVector, BootstrapTrace> resolve_bootstrap(const OperatorSpec& op, const HVector& f,
                                                     const ResolventConfig& cfg) {
    if (cfg.method != ResolventMethod::Bootstrap) {
        throw UsageError("resolve_bootstrap: configuration does not select the bootstrap method");
    }
    return BootstrapResolvent(op, cfg).solve(f);
}

Resolvent::Resolvent(const OperatorSpec& op, const ResolventConfig& cfg)
    : impl_(cfg.method == ResolventMethod::Direct
                ? std::variant<DirectResolvent, BootstrapResolvent>(
                      std::in_place_index<0>, op, (cfg.validate(), cfg.lambda))
                : std::variant<DirectResolvent, BootstrapResolvent>(std::in_place_index<1>, op, cfg)) {}

HVector Resolvent::solve(const HVector& f) const {
    return std::visit(overloaded{
                          [&](const DirectResolvent& d) { return d.solve(f); },
                          [&](const BootstrapResolvent& b) { return b.solve(f).first; },
                      },
                      impl_);
}

double resolvent_residual(const OperatorSpec& op, double lambda, const HVector& f, const HVector& u) {
    return norm(linear_combination(1.0, u, lambda, apply(op, u)) - f);
}

CertificateReport nonexpansiveness_certificate(const OperatorSpec& op, const std::vector<double>& lambdas,
                                               int samples, std::uint64_t seed) {
    if (!op.monotone_expected()) {
        throw UsageError("nonexpansiveness_certificate: operator '" + op.kind_name() + "' is not monotone");
    }
    if (lambdas.empty()) throw UsageError("nonexpansiveness_certificate: no lambda values");
    if (samples < 0) throw UsageError("nonexpansiveness_certificate: samples must be nonnegative");
    const Eigen::Index n = op.dim();
    Rng rng(seed);

    double worst = -std::numeric_limits<double>::infinity();
    HVector witness = HVector::basis(n, 0, op.weight());
    double witness_lambda = lambdas.front();
    int count = 0;
    for (double lambda : lambdas) {
        const DirectResolvent resolvent(op, lambda);
        auto consider = [&](HVector f) {
            const double ratio = norm(resolvent.solve(f)) / norm(f);
            ++count;
            if (ratio > worst) {
                worst = ratio;
                witness = std::move(f);
                witness_lambda = lambda;
            }
        };
        for (Eigen::Index j = 0; j < n; ++j) consider(HVector::basis(n, j, op.weight()));
        for (int s = 0; s < samples; ++s) consider(rng.unit(n, op.weight()));
    }
    return CertificateReport{
        .property = "nonexpansive",
        .samples = count,
        .worst_value = worst,
        .witness = std::move(witness),
        .pass = worst <= 1.0 + kNonexpansiveTolerance,
        .lambda = witness_lambda,
    };
}

}  // namespace maxmono
