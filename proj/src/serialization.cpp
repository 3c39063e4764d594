#include "maxmono/serialization.hpp"

#include <array>
#include <charconv>
#include <ostream>
#include <set>

namespace maxmono {

namespace {

void require_object(const Json& j, const char* what) {
    if (!j.is_object()) throw UsageError(std::string(what) + ": expected a JSON object");
}

void require_keys(const Json& j, const std::set<std::string>& allowed, const char* what) {
    for (const auto& [key, value] : j.items()) {
        if (!allowed.contains(key)) throw UsageError(std::string(what) + ": unknown field '" + key + "'");
    }
}

const Json& require_field(const Json& j, const char* key, const char* what) {
    auto it = j.find(key);
    if (it == j.end()) throw UsageError(std::string(what) + ": missing field '" + key + "'");
    return *it;
}

double read_number(const Json& j, const char* what) {
    if (!j.is_number()) throw UsageError(std::string(what) + ": expected a number");
    return j.get<double>();
}

Eigen::Index read_index(const Json& j, const char* what) {
    if (!j.is_number_integer()) throw UsageError(std::string(what) + ": expected an integer");
    const auto v = j.get<std::int64_t>();
    if (v < 1) throw UsageError(std::string(what) + ": must be at least 1");
    return static_cast<Eigen::Index>(v);
}

Vector<double> read_vector(const Json& j, const char* what) {
    if (!j.is_array()) throw UsageError(std::string(what) + ": expected an array");
    Vector<double> v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = read_number(j[i], what);
    return v;
}

Json vector_json(const Vector<double>& v) {
    Json arr = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
    return arr;
}

std::string optional_number(const std::optional<double>& x) { return x ? format_number(*x) : std::string(); }

}  // namespace

std::string format_number(double x) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), res.ptr);
}

Json to_json(const HVector& u) {
    Json j;
    j["weight"] = u.weight();
    j["coeffs"] = vector_json(u.coeffs());
    return j;
}

HVector hvector_from_json(const Json& j) {
    require_object(j, "HVector");
    require_keys(j, {"weight", "coeffs"}, "HVector");
    return HVector(read_vector(require_field(j, "coeffs", "HVector"), "HVector coeffs"),
                   read_number(require_field(j, "weight", "HVector"), "HVector weight"));
}

Json to_json(const OperatorSpec& op) {
    Json params = Json::object();
    if (const auto* m = op.as<SpdMatrix>()) {
        Json rows = Json::array();
        for (Eigen::Index i = 0; i < m->entries.rows(); ++i) rows.push_back(vector_json(m->entries.row(i).transpose()));
        params["entries"] = std::move(rows);
    } else if (const auto* d = op.as<Diagonal>()) {
        params["weights"] = vector_json(d->weights);
    } else if (const auto* g = op.as<Multiplication>()) {
        params["samples"] = vector_json(g->samples);
    } else if (const auto* s = op.as<RightShift>()) {
        params["n"] = s->n;
    } else if (const auto* l1 = op.as<Laplacian1D>()) {
        params["n"] = l1->n;
    } else if (const auto* l2 = op.as<Laplacian2D>()) {
        params["nx"] = l2->nx;
        params["ny"] = l2->ny;
    }
    Json j;
    j["kind"] = op.kind_name();
    j["params"] = std::move(params);
    return j;
}

OperatorSpec operator_from_json(const Json& j) {
    require_object(j, "operator");
    require_keys(j, {"kind", "params"}, "operator");
    const Json& kind_json = require_field(j, "kind", "operator");
    if (!kind_json.is_string()) throw UsageError("operator: 'kind' must be a string");
    const std::string kind = kind_json.get<std::string>();
    const Json params = j.contains("params") ? j.at("params") : Json::object();
    require_object(params, "operator params");

    if (kind == "spd_matrix") {
        require_keys(params, {"entries"}, "spd_matrix");
        const Json& rows = require_field(params, "entries", "spd_matrix");
        if (!rows.is_array() || rows.empty()) throw UsageError("spd_matrix: 'entries' must be a non-empty array");
        const auto n = static_cast<Eigen::Index>(rows.size());
        Matrix<double> m(n, n);
        for (Eigen::Index i = 0; i < n; ++i) {
            const Vector<double> row = read_vector(rows[static_cast<std::size_t>(i)], "spd_matrix row");
            if (row.size() != n) throw UsageError("spd_matrix: matrix must be square");
            m.row(i) = row.transpose();
        }
        return OperatorSpec::spd_matrix(std::move(m));
    }
    if (kind == "diagonal") {
        require_keys(params, {"weights", "n"}, "diagonal");
        const bool has_w = params.contains("weights");
        const bool has_n = params.contains("n");
        if (has_w == has_n) throw UsageError("diagonal: give exactly one of 'weights' or 'n'");
        if (has_n) return OperatorSpec::diagonal_default(read_index(params.at("n"), "diagonal n"));
        return OperatorSpec::diagonal(read_vector(params.at("weights"), "diagonal weights"));
    }
    if (kind == "multiplication") {
        require_keys(params, {"samples"}, "multiplication");
        return OperatorSpec::multiplication(
            read_vector(require_field(params, "samples", "multiplication"), "multiplication samples"));
    }
    if (kind == "right_shift") {
        require_keys(params, {"n"}, "right_shift");
        return OperatorSpec::right_shift(read_index(require_field(params, "n", "right_shift"), "right_shift n"));
    }
    if (kind == "laplacian_1d") {
        require_keys(params, {"n"}, "laplacian_1d");
        return OperatorSpec::laplacian_1d(read_index(require_field(params, "n", "laplacian_1d"), "laplacian_1d n"));
    }
    if (kind == "laplacian_2d") {
        require_keys(params, {"nx", "ny"}, "laplacian_2d");
        return OperatorSpec::laplacian_2d(read_index(require_field(params, "nx", "laplacian_2d"), "laplacian_2d nx"),
                                          read_index(require_field(params, "ny", "laplacian_2d"), "laplacian_2d ny"));
    }
    throw UsageError("operator: unknown kind '" + kind + "'");
}

Json to_json(const CertificateReport& report) {
    Json j;
    j["property"] = report.property;
    j["samples"] = report.samples;
    j["worst_value"] = report.worst_value;
    j["verdict"] = report.pass ? "pass" : "fail";
    if (report.lambda) j["lambda"] = *report.lambda;
    j["witness"] = to_json(report.witness);
    return j;
}

Json to_json(const IterationReport& report) {
    Json j;
    j["iterations"] = report.iterations;
    j["converged"] = report.converged;
    j["k_claimed"] = report.k_claimed ? Json(*report.k_claimed) : Json(nullptr);
    j["k_estimate"] = report.k_estimate ? Json(*report.k_estimate) : Json(nullptr);
    j["residual_history"] = report.residual_history;
    j["apriori_bounds"] = report.apriori_bounds;
    return j;
}

Json to_json(const BootstrapTrace& trace) {
    Json stages = Json::array();
    for (const auto& s : trace.stages) {
        Json j;
        j["lambda"] = s.lambda;
        j["factor"] = s.factor;
        j["iterations"] = s.report.iterations;
        j["final_residual"] = s.report.final_residual();
        stages.push_back(std::move(j));
    }
    Json out;
    out["stages"] = std::move(stages);
    return out;
}

void write_iteration_csv(std::ostream& out, const IterationReport& report) {
    out << "iter,residual,apriori_bound\n";
    for (std::size_t m = 0; m < report.residual_history.size(); ++m) {
        out << (m + 1) << ',' << format_number(report.residual_history[m]) << ',';
        if (m < report.apriori_bounds.size()) out << format_number(report.apriori_bounds[m]);
        out << '\n';
    }
}

void write_trace_csv(std::ostream& out, const BootstrapTrace& trace) {
    out << "stage,lambda,factor,clamped,iterations,final_residual,k_estimate\n";
    for (std::size_t s = 0; s < trace.stages.size(); ++s) {
        const auto& st = trace.stages[s];
        out << (s + 1) << ',' << format_number(st.lambda) << ',' << format_number(st.factor) << ','
            << (st.clamped ? 1 : 0) << ',' << st.report.iterations << ','
            << format_number(st.report.final_residual()) << ',' << optional_number(st.report.k_estimate) << '\n';
    }
}

void write_trace_convergence_csv(std::ostream& out, const BootstrapTrace& trace) {
    out << "stage,lambda,iter,residual,apriori_bound\n";
    for (std::size_t s = 0; s < trace.stages.size(); ++s) {
        const auto& st = trace.stages[s];
        for (std::size_t m = 0; m < st.report.residual_history.size(); ++m) {
            out << (s + 1) << ',' << format_number(st.lambda) << ',' << (m + 1) << ','
                << format_number(st.report.residual_history[m]) << ',';
            if (m < st.report.apriori_bounds.size()) out << format_number(st.report.apriori_bounds[m]);
            out << '\n';
        }
    }
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
    out << "step,time,norm\n";
    for (std::size_t k = 0; k < traj.norms.size(); ++k) {
        out << k << ',' << format_number(traj.times[k]) << ',' << format_number(traj.norms[k]) << '\n';
    }
}

Json trajectory_states_json(const Trajectory& traj) {
    Json states = Json::array();
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
        Json j;
        j["step"] = k;
        j["time"] = traj.times[k];
        j["state"] = to_json(traj.states[k]);
        states.push_back(std::move(j));
    }
    Json out;
    out["states"] = std::move(states);
    return out;
}

}  // namespace maxmono
