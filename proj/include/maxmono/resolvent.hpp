#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "maxmono/dense_solve.hpp"
#include "maxmono/fixedpoint.hpp"
#include "maxmono/operators.hpp"

namespace maxmono {

enum class ResolventMethod { Direct, Bootstrap };

struct ResolventConfig {
    /// Target lambda of (I + lambda A)^{-1}.
    double lambda = 1.0;
    ResolventMethod method = ResolventMethod::Direct;
    /// lambda_0, the one parameter at which a direct solve is used.
    double base_lambda = 1.0;
    /// Geometric descent ratio, strictly inside (1/2, 1).
    double stage_ratio = 2.0 / 3.0;
    double tol = 1e-10;
    int max_iters = kDefaultMaxIters;
    /// Chain upward stages with this ratio (> 1) instead of one jump when
    /// lambda > base_lambda. 3/2 caps every upward factor at 1/3.
    std::optional<double> upward_ratio;

    void validate() const;
};

/// (I + lambda A)^{-1} by a direct factorization of the assembled system.
/// The factorization is computed once and reused across right-hand sides.
class DirectResolvent {
public:
    DirectResolvent(const OperatorSpec& op, double lambda);

    double lambda() const { return lambda_; }
    Eigen::Index dim() const { return dim_; }

    HVector solve(const HVector& f) const;
    /// Column-wise solve.
    Matrix<double> solve(const Matrix<double>& rhs) const;

private:
    using Factorization = std::variant<Vector<double>, TridiagonalSystem, SpdSolver<double>, GeneralSolver<double>>;

    double lambda_;
    Eigen::Index dim_;
    double weight_;
    Factorization factor_;
};

HVector resolve_direct(const OperatorSpec& op, double lambda, const HVector& f);

/// One exact application of
///   T(u) = (I + base A)^{-1} [ (base/lambda) f + (1 - base/lambda) u ],
/// whose fixed point is (I + lambda A)^{-1} f.
HVector bootstrap_map(const OperatorSpec& op, double base_lambda, double lambda, const HVector& f,
                      const HVector& u);

/// lambda values visited on the way from base to target. Each consecutive
/// pair (prev, next) satisfies next > prev/2, so every stage map contracts.
std::vector<double> stage_schedule(double base_lambda, double target_lambda, double ratio,
                                   std::optional<double> upward_ratio = std::nullopt);

struct BootstrapStage {
    double lambda;
    /// |1 - lambda_prev / lambda|, the Lipschitz constant of the stage map.
    double factor;
    /// True when lambda was pulled onto the target instead of following the
    /// geometric ratio.
    bool clamped;
    IterationReport report;
};

struct BootstrapTrace {
    std::vector<BootstrapStage> stages;
};

class BootstrapNonConvergenceError : public NonConvergenceError {
public:
    BootstrapNonConvergenceError(const std::string& what, IterationReport report, BootstrapTrace trace)
        : NonConvergenceError(what, std::move(report)), trace_(std::move(trace)) {}

    const BootstrapTrace& trace() const { return trace_; }

private:
    BootstrapTrace trace_;
};

/// (I + lambda A)^{-1} built from (I + lambda_0 A)^{-1} alone, by Banach
/// iteration along stage_schedule.
///
/// Intermediate stages are needed only as base operators for the next stage,
/// so each is computed once as a matrix: the stage map acts on operators as
/// U -> R_prev [c I + (1 - c) U] with the same Lipschitz constant, and is
/// iterated to the fixed point R_stage. The final stage iterates on f itself.
class BootstrapResolvent {
public:
    BootstrapResolvent(const OperatorSpec& op, const ResolventConfig& cfg);

    const ResolventConfig& config() const { return cfg_; }
    const std::vector<double>& schedule() const { return schedule_; }

    /// Solves (I + lambda A) u = f. The returned trace holds the prepared
    /// stages followed by the final stage, which ran on f.
    std::pair<HVector, BootstrapTrace> solve(const HVector& f) const;

private:
    Matrix<double> apply_base(const Matrix<double>& rhs) const;
    Vector<double> apply_base(const Vector<double>& rhs) const;

    OperatorSpec op_;
    ResolventConfig cfg_;
    std::vector<double> schedule_;
    std::vector<bool> clamped_;
    DirectResolvent root_;
    /// Resolvent at the second-to-last stage; empty when the final stage
    /// sits directly on the root.
    std::optional<Matrix<double>> penultimate_;
    std::vector<BootstrapStage> prepared_;
};

std::pair<HVector, BootstrapTrace> resolve_bootstrap(const OperatorSpec& op, const HVector& f,
                                                     const ResolventConfig& cfg);

/// Either method behind one interface; prepared once, applied many times.
class Resolvent {
public:
    Resolvent(const OperatorSpec& op, const ResolventConfig& cfg);
    HVector solve(const HVector& f) const;

private:
    std::variant<DirectResolvent, BootstrapResolvent> impl_;
};

/// ||u + lambda A u - f||.
double resolvent_residual(const OperatorSpec& op, double lambda, const HVector& f, const HVector& u);

/// Largest ||(I + lambda A)^{-1} f|| / ||f|| over seeded unit vectors f plus
/// every canonical basis vector, for each lambda. Passes iff <= 1 + 1e-10.
CertificateReport nonexpansiveness_certificate(const OperatorSpec& op, const std::vector<double>& lambdas,
                                               int samples, std::uint64_t seed);

inline constexpr double kNonexpansiveTolerance = 1e-10;

}  // namespace maxmono
