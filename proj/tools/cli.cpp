#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <memory>
#include <ostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "maxmono/evolution.hpp"
#include "maxmono/random.hpp"
#include "maxmono/serialization.hpp"

namespace maxmono::cli {

namespace {

constexpr const char* kDefaultOperator = R"({"kind":"laplacian_1d","params":{"n":99}})";
const std::vector<double> kCertifyLambdas{0.01, 0.1, 1.0, 10.0, 100.0};

struct Options {
    std::string config;
    std::string operator_src = kDefaultOperator;
    double lambda = 1.0;
    std::string method = "direct";
    double base_lambda = 1.0;
    double ratio = 2.0 / 3.0;
    double upward_ratio = 1.5;
    double tol = 1e-10;
    int max_iters = kDefaultMaxIters;
    double tau = 0.01;
    int steps = 10;
    int samples = 50;
    std::uint64_t seed = 1;
    std::string output;
    std::string format;
    bool json_errors = false;
    std::string rhs;
    std::string initial;
    double k = 0.5;
    int dim = 2;
    long max_n = 10;
    bool convergence = false;
    std::string dump_states;
};

const std::set<std::string> kFlagOptions{"--json-errors", "--convergence"};

class Command {
public:
    Command() : app_("Resolvents of monotone operators: solvers, certificates and convergence tables", "maxmono") {
        app_.require_subcommand(1);

        auto* resolve = subcommand("resolve", "Solve u + lambda A u = f and report the residual");
        with_operator(resolve);
        with_resolvent(resolve, true);
        add(resolve, "--rhs", o.rhs, "Right-hand side: JSON array, HVector object, or file (default: seeded Gaussian)");
        add(resolve, "--seed", o.seed, "Seed for the default right-hand side");
        with_output(resolve, {"csv", "json"});

        auto* demo = subcommand("bootstrap-demo", "Build (I + lambda A)^{-1} from (I + lambda_0 A)^{-1} and print the stage table");
        with_operator(demo);
        add(demo, "--lambda", o.lambda, "Target lambda")->default_str("0.05");
        with_resolvent(demo, false);
        add(demo, "--rhs", o.rhs, "Right-hand side: JSON array, HVector object, or file (default: seeded Gaussian)");
        add(demo, "--seed", o.seed, "Seed for the default right-hand side");
        flag(demo, "--convergence", o.convergence, "Emit the per-iteration table of every stage instead");
        with_output(demo, {"csv", "json"});

        auto* certify = subcommand("certify", "Monotonicity and non-expansiveness certificates");
        with_operator(certify);
        add(certify, "--lambda", o.lambda, "Single lambda (default: 0.01, 0.1, 1, 10, 100)");
        add(certify, "--samples", o.samples, "Random unit vectors per sweep on top of the basis vectors");
        add(certify, "--seed", o.seed, "Seed for the random sweeps");
        with_output(certify, {"text", "csv", "json"});

        auto* banach = subcommand("banach-demo", "Picard iteration of x -> D x + 1, D = diag(k, k/2, ..., k/dim)");
        add(banach, "--k", o.k, "Contraction factor in [0, 1)");
        add(banach, "--dim", o.dim, "Dimension");
        add(banach, "--tol", o.tol, "Stopping tolerance");
        add(banach, "--max-iters", o.max_iters, "Iteration cap");
        with_output(banach, {"csv", "json"});

        auto* heat = subcommand("heat-flow", "Implicit Euler trajectory of u' + A u = 0");
        with_operator(heat);
        add(heat, "--tau", o.tau, "Time step");
        add(heat, "--steps", o.steps, "Number of steps");
        add(heat, "--method", o.method, "Resolvent method")->check(CLI::IsMember({"direct", "bootstrap"}));
        add(heat, "--base-lambda", o.base_lambda, "lambda_0 for the bootstrap method");
        add(heat, "--ratio", o.ratio, "Stage ratio in (1/2, 1)");
        add(heat, "--upward-ratio", o.upward_ratio, "Chain upward stages with this ratio");
        add(heat, "--tol", o.tol, "Bootstrap tolerance");
        add(heat, "--max-iters", o.max_iters, "Iteration cap per bootstrap stage");
        add(heat, "--initial", o.initial, "Initial state: JSON array, HVector object, or file (default: seeded Gaussian)");
        add(heat, "--seed", o.seed, "Seed for the default initial state");
        add(heat, "--dump-states", o.dump_states, "Also write every state as JSON to this file");
        with_output(heat, {"csv", "json"});

        auto* probe = subcommand("probe-unbounded", "||T e_n|| / ||e_n|| for the diagonal operator T e_n = n e_n");
        add(probe, "--max-n", o.max_n, "Largest n");
        with_output(probe, {"csv", "json"});
    }

    Options o;

    /// Parses `args`, reporting CLI11 errors as exceptions.
    void parse(const std::vector<std::string>& args) {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app_.parse(reversed);
    }

    CLI::App& app() { return app_; }

    CLI::App& selected() {
        const auto subs = app_.get_subcommands();
        return *subs.front();
    }

    bool given(const std::string& name) {
        const CLI::Option* opt = selected().get_option_no_throw(name);
        return opt != nullptr && opt->count() > 0;
    }

    /// Command-line arguments equivalent to the config entries that the
    /// command line does not already set.
    std::vector<std::string> config_arguments(const Json& cfg) {
        if (!cfg.is_object()) throw UsageError("--config: expected a JSON object");
        CLI::App& sub = selected();
        std::vector<std::string> extra;
        for (const auto& [key, value] : cfg.items()) {
            std::string name = "--" + key;
            std::replace(name.begin(), name.end(), '_', '-');
            if (name == "--config" || sub.get_option_no_throw(name) == nullptr) {
                throw UsageError("--config: unknown field '" + key + "' for " + sub.get_name());
            }
            if (given(name)) continue;
            if (kFlagOptions.contains(name)) {
                if (!value.is_boolean()) throw UsageError("--config: '" + key + "' must be a boolean");
                if (value.get<bool>()) extra.push_back(name);
                continue;
            }
            extra.push_back(name);
            if (value.is_string()) {
                extra.push_back(value.get<std::string>());
            } else if (value.is_number_integer()) {
                extra.push_back(value.dump());
            } else if (value.is_number()) {
                extra.push_back(format_number(value.get<double>()));
            } else if (value.is_object() || value.is_array()) {
                extra.push_back(value.dump());
            } else {
                throw UsageError("--config: unsupported value for '" + key + "'");
            }
        }
        return extra;
    }

private:
    CLI::App* subcommand(const std::string& name, const std::string& description) {
        auto* sub = app_.add_subcommand(name, description);
        add(sub, "--config", o.config, "JSON file mirroring the flags; flags take precedence");
        flag(sub, "--json-errors", o.json_errors, "Report errors as a JSON object on stderr");
        return sub;
    }

    template <class T>
    CLI::Option* add(CLI::App* sub, const std::string& name, T& target, const std::string& description) {
        return sub->add_option(name, target, description)->capture_default_str();
    }

    CLI::Option* flag(CLI::App* sub, const std::string& name, bool& target, const std::string& description) {
        return sub->add_flag(name, target, description);
    }

    void with_operator(CLI::App* sub) {
        add(sub, "--operator", o.operator_src, "Operator as inline JSON or a file path");
    }

    void with_resolvent(CLI::App* sub, bool lambda_and_method) {
        if (lambda_and_method) {
            add(sub, "--lambda", o.lambda, "Resolvent parameter");
            add(sub, "--method", o.method, "Resolvent method")->check(CLI::IsMember({"direct", "bootstrap"}));
        }
        add(sub, "--base-lambda", o.base_lambda, "lambda_0, the directly solved parameter");
        add(sub, "--ratio", o.ratio, "Stage ratio in (1/2, 1)");
        add(sub, "--upward-ratio", o.upward_ratio, "Chain upward stages with this ratio");
        add(sub, "--tol", o.tol, "Fixed-point tolerance");
        add(sub, "--max-iters", o.max_iters, "Iteration cap per stage");
    }

    void with_output(CLI::App* sub, const std::vector<std::string>& formats) {
        add(sub, "--output", o.output, "Write results to this file instead of stdout");
        add(sub, "--format", o.format, "Output format")->check(CLI::IsMember(formats))->default_str(formats.front());
    }

    CLI::App app_;
};

std::string read_file(const std::string& path, const char* what) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError(std::string(what) + ": cannot read '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw UsageError("cannot write '" + path + "'");
    file << content;
    if (!file) throw UsageError("cannot write '" + path + "'");
}

bool looks_inline(const std::string& src) {
    const auto first = src.find_first_not_of(" \t\r\n");
    return first != std::string::npos && (src[first] == '{' || src[first] == '[');
}

Json parse_json_source(const std::string& src, const char* what) {
    const std::string text = looks_inline(src) ? src : read_file(src, what);
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw UsageError(std::string(what) + ": invalid JSON: " + e.what());
    }
}

OperatorSpec load_operator(const Options& o) { return operator_from_json(parse_json_source(o.operator_src, "--operator")); }

/// Explicit vector, or a seeded Gaussian one shaped like the operator.
HVector load_vector(const std::string& src, const char* what, const OperatorSpec& op, std::uint64_t seed) {
    if (src.empty()) {
        Rng rng(seed);
        return rng.gaussian(op.dim(), op.weight());
    }
    const Json j = parse_json_source(src, what);
    HVector v = j.is_array() ? hvector_from_json(Json{{"weight", op.weight()}, {"coeffs", j}}) : hvector_from_json(j);
    if (v.dim() != op.dim()) {
        throw UsageError(std::string(what) + ": dimension " + std::to_string(v.dim()) + " does not match the operator (" +
                         std::to_string(op.dim()) + ")");
    }
    return v;
}

ResolventConfig resolvent_config(Command& cmd, ResolventMethod method) {
    const Options& o = cmd.o;
    ResolventConfig cfg;
    cfg.lambda = o.lambda;
    cfg.method = method;
    cfg.base_lambda = o.base_lambda;
    cfg.stage_ratio = o.ratio;
    cfg.tol = o.tol;
    cfg.max_iters = o.max_iters;
    if (cmd.given("--upward-ratio")) cfg.upward_ratio = o.upward_ratio;
    cfg.validate();
    return cfg;
}

ResolventMethod parse_method(const std::string& m) {
    return m == "bootstrap" ? ResolventMethod::Bootstrap : ResolventMethod::Direct;
}

std::string join_coeffs(const HVector& v) {
    std::string s;
    for (Eigen::Index i = 0; i < v.dim(); ++i) {
        if (i > 0) s += ' ';
        s += format_number(v[i]);
    }
    return s;
}

struct Outcome {
    std::string body;
    int status = kExitOk;
};

Outcome run_resolve(Command& cmd, std::ostream& err) {
    const Options& o = cmd.o;
    const OperatorSpec op = load_operator(o);
    const HVector f = load_vector(o.rhs, "--rhs", op, o.seed);
    const ResolventConfig cfg = resolvent_config(cmd, parse_method(o.method));

    std::optional<BootstrapTrace> trace;
    HVector u = f;
    if (cfg.method == ResolventMethod::Bootstrap) {
        auto [solution, t] = resolve_bootstrap(op, f, cfg);
        u = std::move(solution);
        trace = std::move(t);
    } else {
        u = resolve_direct(op, cfg.lambda, f);
    }
    const double residual = resolvent_residual(op, cfg.lambda, f, u);

    std::ostringstream body;
    if (o.format == "json") {
        Json j;
        j["operator"] = op.kind_name();
        j["lambda"] = cfg.lambda;
        j["method"] = o.method;
        j["u"] = to_json(u);
        j["residual"] = residual;
        if (trace) j["trace"] = to_json(*trace);
        body << j.dump(2) << '\n';
    } else {
        body << "index,u\n";
        for (Eigen::Index i = 0; i < u.dim(); ++i) body << i << ',' << format_number(u[i]) << '\n';
        err << "residual " << format_number(residual) << '\n';
    }
    return {body.str()};
}

Outcome run_bootstrap_demo(Command& cmd, std::ostream& err) {
    Options& o = cmd.o;
    if (!cmd.given("--lambda")) o.lambda = 0.05;
    const OperatorSpec op = load_operator(o);
    const HVector f = load_vector(o.rhs, "--rhs", op, o.seed);
    const ResolventConfig cfg = resolvent_config(cmd, ResolventMethod::Bootstrap);
    const auto [u, trace] = resolve_bootstrap(op, f, cfg);
    const double error = distance(u, resolve_direct(op, cfg.lambda, f));

    std::ostringstream body;
    if (o.format == "json") {
        Json j = to_json(trace);
        j["lambda"] = cfg.lambda;
        j["base_lambda"] = cfg.base_lambda;
        j["ratio"] = cfg.stage_ratio;
        j["error_vs_direct"] = error;
        j["residual"] = resolvent_residual(op, cfg.lambda, f, u);
        body << j.dump(2) << '\n';
    } else {
        if (o.convergence) {
            write_trace_convergence_csv(body, trace);
        } else {
            write_trace_csv(body, trace);
        }
        err << "error_vs_direct " << format_number(error) << '\n';
    }
    return {body.str()};
}

Outcome run_certify(Command& cmd) {
    const Options& o = cmd.o;
    const OperatorSpec op = load_operator(o);
    if (o.samples < 0) throw UsageError("--samples must be nonnegative");
    const std::vector<double> lambdas = cmd.given("--lambda") ? std::vector<double>{o.lambda} : kCertifyLambdas;

    std::vector<CertificateReport> reports{monotonicity_certificate(op, o.samples, o.seed)};
    const bool monotone = reports.front().pass && op.monotone_expected();
    if (monotone) reports.push_back(nonexpansiveness_certificate(op, lambdas, o.samples, o.seed));
    const bool pass = std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.pass; });

    std::ostringstream body;
    if (o.format == "json") {
        Json j;
        j["operator"] = op.kind_name();
        j["dim"] = op.dim();
        Json arr = Json::array();
        for (const auto& r : reports) arr.push_back(to_json(r));
        j["certificates"] = std::move(arr);
        j["verdict"] = pass ? "pass" : "fail";
        body << j.dump(2) << '\n';
    } else if (o.format == "csv") {
        body << "property,verdict,worst_value,samples,lambda,witness\n";
        for (const auto& r : reports) {
            body << r.property << ',' << (r.pass ? "pass" : "fail") << ',' << format_number(r.worst_value) << ','
                 << r.samples << ',' << (r.lambda ? format_number(*r.lambda) : std::string()) << ','
                 << join_coeffs(r.witness) << '\n';
        }
    } else {
        const auto& m = reports.front();
        body << "monotone: " << (m.pass ? "pass" : "fail") << " (worst Rayleigh quotient "
             << format_number(m.worst_value) << " over " << m.samples << " vectors)\n";
        if (!m.pass) body << "witness: " << join_coeffs(m.witness) << '\n';
        if (monotone) {
            const auto& r = reports.back();
            body << "nonexpansive: " << (r.pass ? "pass" : "fail") << " (worst ratio " << format_number(r.worst_value)
                 << " at lambda " << format_number(r.lambda.value_or(0.0)) << " over " << r.samples << " vectors)\n";
            if (!r.pass) body << "witness: " << join_coeffs(r.witness) << '\n';
        } else {
            body << "nonexpansive: skipped (operator is not monotone)\n";
        }
    }
    return {body.str(), pass ? kExitOk : kExitCertificateFailed};
}

Outcome run_banach_demo(Command& cmd) {
    const Options& o = cmd.o;
    if (!(o.k >= 0.0 && o.k < 1.0)) throw UsageError("--k must lie in [0, 1)");
    if (o.dim < 1) throw UsageError("--dim must be at least 1");
    const Eigen::Index n = o.dim;
    Vector<double> d(n);
    for (Eigen::Index i = 0; i < n; ++i) d[i] = o.k / static_cast<double>(i + 1);
    const HVector c(Vector<double>::Ones(n));
    const HVector fixed = c.with_coeffs((1.0 - d.array()).inverse().matrix());

    std::vector<double> errors;
    const ContractionMap map{
        [&](const HVector& x) {
            HVector next = c.with_coeffs(d.cwiseProduct(x.coeffs()) + c.coeffs());
            errors.push_back(distance(next, fixed));
            return next;
        },
        o.k,
    };
    const auto [x, report] = iterate(map, HVector::zero(n), o.tol, o.max_iters);

    std::ostringstream body;
    if (o.format == "json") {
        Json j;
        j["k"] = o.k;
        j["dim"] = o.dim;
        j["fixed_point"] = to_json(fixed);
        j["solution"] = to_json(x);
        j["report"] = to_json(report);
        j["errors"] = errors;
        body << j.dump(2) << '\n';
    } else {
        body << "iter,residual,apriori_bound,error\n";
        for (std::size_t m = 0; m < report.residual_history.size(); ++m) {
            body << (m + 1) << ',' << format_number(report.residual_history[m]) << ','
                 << format_number(report.apriori_bounds[m]) << ',' << format_number(errors[m]) << '\n';
        }
    }
    return {body.str()};
}

Outcome run_heat_flow(Command& cmd) {
    const Options& o = cmd.o;
    const OperatorSpec op = load_operator(o);
    const HVector u0 = load_vector(o.initial, "--initial", op, o.seed);
    FlowConfig flow;
    flow.tau = o.tau;
    flow.steps = o.steps;
    cmd.o.lambda = o.tau;
    flow.resolvent = resolvent_config(cmd, parse_method(o.method));
    const Trajectory traj = evolve(op, flow, u0);

    if (!o.dump_states.empty()) write_file(o.dump_states, trajectory_states_json(traj).dump(2) + "\n");

    std::ostringstream body;
    if (o.format == "json") {
        Json rows = Json::array();
        for (std::size_t k = 0; k < traj.norms.size(); ++k) {
            rows.push_back(Json{{"step", k}, {"time", traj.times[k]}, {"norm", traj.norms[k]}});
        }
        Json j;
        j["operator"] = op.kind_name();
        j["tau"] = o.tau;
        j["steps"] = o.steps;
        j["method"] = o.method;
        j["trajectory"] = std::move(rows);
        body << j.dump(2) << '\n';
    } else {
        write_trajectory_csv(body, traj);
    }
    return {body.str()};
}

Outcome run_probe(Command& cmd) {
    const Options& o = cmd.o;
    const auto rows = unboundedness_probe(static_cast<Eigen::Index>(o.max_n));
    std::ostringstream body;
    if (o.format == "json") {
        Json arr = Json::array();
        for (const auto& r : rows) arr.push_back(Json{{"n", r.n}, {"ratio", r.ratio}});
        body << Json{{"rows", arr}}.dump(2) << '\n';
    } else {
        body << "n,ratio\n";
        for (const auto& r : rows) body << r.n << ',' << format_number(r.ratio) << '\n';
    }
    return {body.str()};
}

Outcome dispatch(Command& cmd, std::ostream& err) {
    const std::string name = cmd.selected().get_name();
    CLI::Option* format = cmd.selected().get_option_no_throw("--format");
    if (cmd.o.format.empty() && format != nullptr) cmd.o.format = format->get_default_str();
    if (name == "resolve") return run_resolve(cmd, err);
    if (name == "bootstrap-demo") return run_bootstrap_demo(cmd, err);
    if (name == "certify") return run_certify(cmd);
    if (name == "banach-demo") return run_banach_demo(cmd);
    if (name == "heat-flow") return run_heat_flow(cmd);
    return run_probe(cmd);
}

int report_error(std::ostream& err, bool as_json, const std::string& kind, const std::string& message, int code) {
    if (as_json) {
        const Json j{{"error", {{"kind", kind}, {"message", message}, {"exit_code", code}}}};
        err << j.dump() << '\n';
    } else {
        err << "maxmono: " << kind << " error: " << message << '\n';
    }
    return code;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    bool json_errors = std::find(args.begin(), args.end(), "--json-errors") != args.end();
    try {
        auto cmd = std::make_unique<Command>();
        try {
            cmd->parse(args);
            if (!cmd->o.config.empty()) {
                Json cfg;
                try {
                    cfg = Json::parse(read_file(cmd->o.config, "--config"));
                } catch (const nlohmann::json::parse_error& e) {
                    throw UsageError(std::string("--config: invalid JSON: ") + e.what());
                }
                std::vector<std::string> merged = args;
                for (auto& a : cmd->config_arguments(cfg)) merged.push_back(std::move(a));
                cmd = std::make_unique<Command>();
                cmd->parse(merged);
            }
        } catch (const CLI::ParseError& e) {
            if (e.get_exit_code() == 0) return cmd->app().exit(e, out, err);
            return report_error(err, json_errors, "usage", e.what(), kExitUsage);
        }
        json_errors = json_errors || cmd->o.json_errors;
        const Outcome result = dispatch(*cmd, err);
        if (cmd->o.output.empty()) {
            out << result.body;
        } else {
            write_file(cmd->o.output, result.body);
        }
        return result.status;
    } catch (const UsageError& e) {
        return report_error(err, json_errors, "usage", e.what(), kExitUsage);
    } catch (const NumericalError& e) {
        return report_error(err, json_errors, "numerical", e.what(), kExitNumerical);
    } catch (const std::exception& e) {
        return report_error(err, json_errors, "numerical", e.what(), kExitNumerical);
    }
}

}  // namespace maxmono::cli
