#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "maxmono/hvector.hpp"

namespace maxmono {

inline constexpr int kDefaultMaxIters = 10'000;
inline constexpr int kDefaultWarmup = 2;

/// Self-map of a fixed space together with its Lipschitz constant, if known.
struct ContractionMap {
    std::function<HVector(const HVector&)> eval;
    /// In [0, 1) when the caller can vouch for it.
    std::optional<double> k_claimed;
};

/// Trace of one Picard run x_{n+1} = T(x_n).
///
/// Entry m of `residual_history` is ||x_{m+1} - x_m||. Entry m of
/// `apriori_bounds` bounds ||x_{m+1} - x*|| by k^{m+1}/(1-k) ||x_1 - x_0||
/// and is only filled when k is known.
struct IterationReport {
    int iterations = 0;
    std::vector<double> residual_history;
    std::optional<double> k_claimed;
    std::optional<double> k_estimate;
    std::vector<double> apriori_bounds;
    bool converged = false;

    double final_residual() const { return residual_history.empty() ? 0.0 : residual_history.back(); }
};

class NonConvergenceError : public NumericalError {
public:
    NonConvergenceError(const std::string& what, IterationReport report)
        : NumericalError(what), report_(std::move(report)) {}

    const IterationReport& report() const { return report_; }

private:
    IterationReport report_;
};

/// k^n / (1-k) * d10: distance from the n-th iterate to the fixed point.
double apriori_bound(double k, double d10, int n);

/// Largest ratio residual[m+1] / residual[m] for m >= warmup.
/// Throws NumericalError when the window is empty or hits an exact zero.
double estimate_contraction(const IterationReport& report, int warmup = kDefaultWarmup);

/// Extra acceptance test applied once the residual rule is met. Returning
/// false continues the same Picard sequence.
using AcceptanceTest = std::function<bool(const HVector&)>;

/// Picard iteration from x0 until the successive-iterate residual certifies
/// ||T(x) - x|| <= tol.
///
/// With k known the run stops as soon as ||x_{m+1} - x_m|| <= tol*(1-k) or
/// the a-priori bound drops below tol, and the newest iterate is returned.
/// Without k the plain rule ||T(x) - x|| <= tol is used and the iterate the
/// residual was measured at is returned.
///
/// Throws NonConvergenceError (carrying the report) after max_iters.
std::pair<HVector, IterationReport> iterate(const ContractionMap& map, const HVector& x0, double tol,
                                            int max_iters = kDefaultMaxIters,
                                            const AcceptanceTest& accept = {});

}  // namespace maxmono
