#pragma once

#include <vector>

#include "maxmono/resolvent.hpp"

namespace maxmono {

struct FlowConfig {
    double tau = 0.01;
    int steps = 1;
    /// Method and tolerances for each step; its lambda is replaced by tau.
    ResolventConfig resolvent;

    void validate() const;
};

struct Trajectory {
    std::vector<HVector> states;
    std::vector<double> norms;
    std::vector<double> times;
};

/// u_{k+1} = (I + tau A)^{-1} u_k.
HVector implicit_euler_step(const OperatorSpec& op, double tau, const HVector& u, const ResolventConfig& cfg);

/// Backward-Euler trajectory of u' + A u = 0 from u0; the step resolvent is
/// prepared once and reused.
Trajectory evolve(const OperatorSpec& op, const FlowConfig& flow, const HVector& u0);

/// exp(-t A_h) u0 for the 1D Dirichlet Laplacian on n nodes, via the discrete
/// sine eigenbasis.
HVector spectral_exact_flow(Eigen::Index n, const HVector& u0, double t);

}  // namespace maxmono
