#pragma once

#include <iosfwd>
#include <string>

#include "json.hpp"

#include "maxmono/evolution.hpp"
#include "maxmono/fixedpoint.hpp"
#include "maxmono/operators.hpp"
#include "maxmono/resolvent.hpp"

namespace maxmono {

using Json = nlohmann::ordered_json;

/// Shortest decimal string that parses back to the same double ('.' decimal,
/// no grouping).
std::string format_number(double x);

// HVector: {"weight": w, "coeffs": [...]}
Json to_json(const HVector& u);
HVector hvector_from_json(const Json& j);

// OperatorSpec: {"kind": name, "params": {...}}
//   spd_matrix      {"entries": [[...], ...]}
//   diagonal        {"weights": [...]} or {"n": N} for w_n = n
//   multiplication  {"samples": [...]}
//   right_shift     {"n": N}
//   laplacian_1d    {"n": N}
//   laplacian_2d    {"nx": NX, "ny": NY}
// Unknown keys are rejected.
Json to_json(const OperatorSpec& op);
OperatorSpec operator_from_json(const Json& j);

Json to_json(const CertificateReport& report);
Json to_json(const IterationReport& report);
Json to_json(const BootstrapTrace& trace);

/// iter,residual,apriori_bound; the bound column is empty when k is unknown.
void write_iteration_csv(std::ostream& out, const IterationReport& report);

/// stage,lambda,factor,clamped,iterations,final_residual,k_estimate
void write_trace_csv(std::ostream& out, const BootstrapTrace& trace);

/// stage,lambda,iter,residual,apriori_bound for every stage in order.
void write_trace_convergence_csv(std::ostream& out, const BootstrapTrace& trace);

/// step,time,norm
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);
Json trajectory_states_json(const Trajectory& traj);

}  // namespace maxmono
