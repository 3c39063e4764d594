#include "maxmono/fixedpoint.hpp"

#include <cmath>
#include <string>

namespace maxmono {

namespace {

constexpr double kDivergenceCeiling = 1e150;

std::optional<double> try_estimate(const IterationReport& report) {
    try {
        return estimate_contraction(report, kDefaultWarmup);
    } catch (const NumericalError&) {
        return std::nullopt;
    }
}

}  // namespace

double apriori_bound(double k, double d10, int n) {
    if (!(k >= 0.0 && k < 1.0)) throw UsageError("apriori_bound: k must lie in [0, 1)");
    if (d10 < 0.0) throw UsageError("apriori_bound: d10 must be nonnegative");
    if (n < 0) throw UsageError("apriori_bound: n must be nonnegative");
    return std::pow(k, n) * d10 / (1.0 - k);
}

double estimate_contraction(const IterationReport& report, int warmup) {
    if (warmup < 0) throw UsageError("estimate_contraction: warmup must be nonnegative");
    const auto& r = report.residual_history;
    const auto start = static_cast<std::size_t>(warmup);
    if (r.size() < start + 2) throw NumericalError("estimate_contraction: residual window too short");
    double worst = 0.0;
    for (std::size_t m = start; m + 1 < r.size(); ++m) {
        if (r[m] == 0.0) throw NumericalError("estimate_contraction: exact-zero residual in window");
        worst = std::max(worst, r[m + 1] / r[m]);
    }
    return worst;
}

std::pair<HVector, IterationReport> iterate(const ContractionMap& map, const HVector& x0, double tol,
                                            int max_iters, const AcceptanceTest& accept) {
    if (!(tol > 0.0)) throw UsageError("iterate: tol must be positive");
    if (max_iters < 1) throw UsageError("iterate: max_iters must be at least 1");
    if (!map.eval) throw UsageError("iterate: map has no evaluator");
    const std::optional<double> k = map.k_claimed;
    if (k && !(*k >= 0.0 && *k < 1.0)) throw UsageError("iterate: claimed k must lie in [0, 1)");

    IterationReport report;
    report.k_claimed = k;

    HVector x = x0;
    for (int n = 1; n <= max_iters; ++n) {
        HVector next = map.eval(x);
        if (!next.compatible(x)) throw UsageError("iterate: map does not preserve the space");
        const double r = distance(next, x);
        report.iterations = n;
        report.residual_history.push_back(r);

        bool stop = false;
        if (k) {
            const double bound = apriori_bound(*k, report.residual_history.front(), n);
            report.apriori_bounds.push_back(bound);
            stop = r <= tol * (1.0 - *k) || bound <= tol;
        } else {
            stop = r <= tol;
        }

        if (!(r <= kDivergenceCeiling)) {
            report.k_estimate = try_estimate(report);
            throw NonConvergenceError("iterate: iterates diverge after " + std::to_string(n) + " steps",
                                      std::move(report));
        }

        if (stop) {
            const HVector& candidate = k ? next : x;
            if (!accept || accept(candidate)) {
                report.converged = true;
                report.k_estimate = try_estimate(report);
                return {candidate, std::move(report)};
            }
            if (r == 0.0) {
                // Exactly stationary: further steps cannot change the answer.
                report.k_estimate = try_estimate(report);
                throw NonConvergenceError("iterate: stationary iterate rejected by acceptance test",
                                          std::move(report));
            }
        }
        x = std::move(next);
    }
    report.k_estimate = try_estimate(report);
    throw NonConvergenceError("iterate: residual above tolerance after " + std::to_string(max_iters) +
                                  " iterations",
                              std::move(report));
}

}  // namespace maxmono
