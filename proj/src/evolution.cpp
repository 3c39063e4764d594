#include "maxmono/evolution.hpp"

#include <cmath>
#include <numbers>

namespace maxmono {

namespace {

ResolventConfig step_config(const OperatorSpec& op, double tau, const ResolventConfig& cfg) {
    if (!(tau > 0.0) || !std::isfinite(tau)) throw UsageError("implicit Euler: tau must be positive");
    if (!op.monotone_expected()) {
        throw UsageError("implicit Euler: operator '" + op.kind_name() + "' is not monotone");
    }
    ResolventConfig out = cfg;
    out.lambda = tau;
    return out;
}

}  // namespace

void FlowConfig::validate() const {
    if (!(tau > 0.0) || !std::isfinite(tau)) throw UsageError("FlowConfig: tau must be positive");
    if (steps < 1) throw UsageError("FlowConfig: steps must be at least 1");
}

HVector implicit_euler_step(const OperatorSpec& op, double tau, const HVector& u, const ResolventConfig& cfg) {
    return Resolvent(op, step_config(op, tau, cfg)).solve(u);
}

Trajectory evolve(const OperatorSpec& op, const FlowConfig& flow, const HVector& u0) {
    flow.validate();
    if (u0.dim() != op.dim()) throw UsageError("evolve: dimension mismatch");
    const Resolvent step(op, step_config(op, flow.tau, flow.resolvent));

    Trajectory traj;
    traj.states.reserve(static_cast<std::size_t>(flow.steps) + 1);
    traj.states.push_back(u0);
    traj.norms.push_back(norm(u0));
    traj.times.push_back(0.0);
    for (int k = 1; k <= flow.steps; ++k) {
        traj.states.push_back(step.solve(traj.states.back()));
        traj.norms.push_back(norm(traj.states.back()));
        traj.times.push_back(static_cast<double>(k) * flow.tau);
    }
    return traj;
}

HVector spectral_exact_flow(Eigen::Index n, const HVector& u0, double t) {
    if (n < 1) throw UsageError("spectral_exact_flow: n must be at least 1");
    if (u0.dim() != n) throw UsageError("spectral_exact_flow: dimension mismatch");
    const double h = grid_spacing(n);
    if (std::abs(u0.weight() - h) > 1e-14 * h) throw UsageError("spectral_exact_flow: u0 is not a grid function");
    if (!(t >= 0.0)) throw UsageError("spectral_exact_flow: t must be nonnegative");

    // Sine matrix S_{jm} = sin(m pi j h), with S^2 = (n+1)/2 I.
    Matrix<double> s(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index m = 0; m < n; ++m) {
            s(j, m) = std::sin(std::numbers::pi * h * static_cast<double>((j + 1) * (m + 1)));
        }
    }
    Vector<double> coeffs = (2.0 * h) * (s.transpose() * u0.coeffs());
    for (Eigen::Index m = 0; m < n; ++m) {
        const double half = 0.5 * std::numbers::pi * h * static_cast<double>(m + 1);
        const double mu = 4.0 * std::sin(half) * std::sin(half) / (h * h);
        coeffs[m] *= std::exp(-t * mu);
    }
    return u0.with_coeffs(s * coeffs);
}

}  // namespace maxmono
