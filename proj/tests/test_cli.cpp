#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "maxmono/serialization.hpp"

using namespace maxmono;

namespace {

struct Result {
    int status;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out;
    std::ostringstream err;
    const int status = cli::run(args, out, err);
    return {status, out.str(), err.str()};
}

std::filesystem::path scratch(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("maxmono_test_cli_" + name);
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void spit(const std::filesystem::path& p, const std::string& text) { std::ofstream(p) << text; }

const std::string kLaplacian99 = R"({"kind":"laplacian_1d","params":{"n":99}})";
const std::string kShift = R"({"kind":"right_shift","params":{"n":2}})";

}  // namespace

TEST(Cli, CertifyLaplacianPasses) {
    const auto r = run({"certify", "--operator", kLaplacian99});
    EXPECT_EQ(r.status, cli::kExitOk);
    EXPECT_NE(r.out.find("monotone: pass"), std::string::npos);
    EXPECT_NE(r.out.find("nonexpansive: pass"), std::string::npos);
}

TEST(Cli, CertifyRightShiftFailsWithWitness) {
    const auto r = run({"certify", "--operator", kShift, "--format", "json"});
    EXPECT_EQ(r.status, cli::kExitCertificateFailed);
    const Json j = Json::parse(r.out);
    EXPECT_EQ(j["verdict"], "fail");
    ASSERT_EQ(j["certificates"].size(), 1u);
    const HVector witness = hvector_from_json(j["certificates"][0]["witness"]);
    const double q = rayleigh_quotient(OperatorSpec::right_shift(2), witness);
    EXPECT_LT(q, 0.0);
    EXPECT_EQ(q, j["certificates"][0]["worst_value"].get<double>());

    const auto text = run({"certify", "--operator", kShift});
    EXPECT_EQ(text.status, cli::kExitCertificateFailed);
    EXPECT_NE(text.out.find("monotone: fail"), std::string::npos);
    EXPECT_NE(text.out.find("witness: "), std::string::npos);
    EXPECT_NE(text.out.find("nonexpansive: skipped"), std::string::npos);
}

TEST(Cli, ProbeUnbounded) {
    const auto r = run({"probe-unbounded", "--max-n", "5"});
    EXPECT_EQ(r.status, 0);
    EXPECT_EQ(r.out, "n,ratio\n1,1\n2,2\n3,3\n4,4\n5,5\n");
}

TEST(Cli, ByteIdenticalReruns) {
    const std::vector<std::vector<std::string>> commands{
        {"certify", "--operator", kLaplacian99, "--seed", "9", "--format", "csv"},
        {"bootstrap-demo", "--lambda", "0.02", "--seed", "4"},
        {"bootstrap-demo", "--lambda", "0.3", "--convergence"},
        {"banach-demo", "--k", "0.9", "--dim", "3"},
        {"heat-flow", "--steps", "20", "--seed", "5"},
        {"resolve", "--lambda", "0.5", "--format", "json"},
    };
    for (const auto& args : commands) {
        const auto a = run(args);
        const auto b = run(args);
        EXPECT_EQ(a.status, 0) << a.err;
        EXPECT_EQ(a.out, b.out);
        EXPECT_FALSE(a.out.empty());
    }
    EXPECT_NE(run({"heat-flow", "--seed", "5"}).out, run({"heat-flow", "--seed", "6"}).out);
}

TEST(Cli, ResolveMatchesLibrary) {
    const auto r = run({"resolve", "--lambda", "0.25", "--rhs", "[1,0,2]", "--operator",
                        R"({"kind":"diagonal","params":{"n":3}})", "--format", "json"});
    ASSERT_EQ(r.status, 0) << r.err;
    const Json j = Json::parse(r.out);
    const HVector u = hvector_from_json(j["u"]);
    EXPECT_DOUBLE_EQ(u[0], 1.0 / 1.25);
    EXPECT_EQ(u[1], 0.0);
    EXPECT_DOUBLE_EQ(u[2], 2.0 / 1.75);
    EXPECT_LE(j["residual"].get<double>(), 1e-15);

    const auto b = run({"resolve", "--method", "bootstrap", "--lambda", "0.05"});
    ASSERT_EQ(b.status, 0) << b.err;
    EXPECT_EQ(b.out.rfind("index,u\n", 0), 0u);
    EXPECT_NE(b.err.find("residual "), std::string::npos);
}

TEST(Cli, BootstrapDemoTable) {
    const auto r = run({"bootstrap-demo", "--operator", kLaplacian99, "--lambda", "0.4", "--format", "json"});
    ASSERT_EQ(r.status, 0) << r.err;
    const Json j = Json::parse(r.out);
    ASSERT_EQ(j["stages"].size(), 2u);
    EXPECT_DOUBLE_EQ(j["stages"][0]["lambda"].get<double>(), 2.0 / 3.0);
    EXPECT_EQ(j["stages"][1]["lambda"].get<double>(), 0.4);
    EXPECT_LE(j["error_vs_direct"].get<double>(), 1e-8);
}

TEST(Cli, BanachDemoBoundsTheError) {
    const auto r = run({"banach-demo", "--k", "0.5", "--dim", "4"});
    ASSERT_EQ(r.status, 0) << r.err;
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "iter,residual,apriori_bound,error");
    int rows = 0;
    while (std::getline(in, line)) {
        double residual = 0, bound = 0, error = 0;
        int iter = 0;
        ASSERT_EQ(std::sscanf(line.c_str(), "%d,%lf,%lf,%lf", &iter, &residual, &bound, &error), 4) << line;
        EXPECT_LE(error, bound);
        ++rows;
    }
    EXPECT_GT(rows, 10);
}

TEST(Cli, HeatFlowOutputs) {
    const auto states = scratch("states.json");
    const auto table = scratch("table.csv");
    const auto r = run({"heat-flow", "--steps", "4", "--tau", "0.001", "--initial",
                        R"({"weight":0.25,"coeffs":[1,2,1]})", "--operator",
                        R"({"kind":"laplacian_1d","params":{"n":3}})", "--dump-states", states.string(), "--output",
                        table.string()});
    ASSERT_EQ(r.status, 0) << r.err;
    EXPECT_TRUE(r.out.empty());
    const std::string csv = slurp(table);
    EXPECT_EQ(csv.rfind("step,time,norm\n0,0,", 0), 0u);
    const Json dumped = Json::parse(slurp(states));
    EXPECT_EQ(dumped["states"].size(), 5u);
    std::filesystem::remove(states);
    std::filesystem::remove(table);
}

TEST(Cli, OperatorFromFile) {
    const auto path = scratch("op.json");
    spit(path, R"({"kind":"laplacian_2d","params":{"nx":4,"ny":3}})");
    const auto r = run({"certify", "--operator", path.string(), "--lambda", "1"});
    EXPECT_EQ(r.status, 0) << r.err;
    std::filesystem::remove(path);
}

TEST(Cli, ConfigFileWithOverrides) {
    const auto path = scratch("config.json");
    spit(path, R"({"max_n": 3, "format": "json"})");
    const auto from_file = run({"probe-unbounded", "--config", path.string()});
    ASSERT_EQ(from_file.status, 0) << from_file.err;
    EXPECT_EQ(Json::parse(from_file.out)["rows"].size(), 3u);

    const auto overridden = run({"probe-unbounded", "--config", path.string(), "--format", "csv", "--max-n", "2"});
    EXPECT_EQ(overridden.out, "n,ratio\n1,1\n2,2\n");

    spit(path, R"({"operator": {"kind":"diagonal","params":{"n":4}}, "lambda": 1, "json_errors": true})");
    const auto with_op = run({"certify", "--config", path.string()});
    EXPECT_EQ(with_op.status, 0) << with_op.err;

    spit(path, R"({"max_n": 3, "lambda": 2})");
    EXPECT_EQ(run({"probe-unbounded", "--config", path.string()}).status, cli::kExitUsage);
    spit(path, "{not json");
    EXPECT_EQ(run({"probe-unbounded", "--config", path.string()}).status, cli::kExitUsage);
    std::filesystem::remove(path);
    EXPECT_EQ(run({"probe-unbounded", "--config", path.string()}).status, cli::kExitUsage);
}

TEST(Cli, UsageErrors) {
    EXPECT_EQ(run({}).status, cli::kExitUsage);
    EXPECT_EQ(run({"frobnicate"}).status, cli::kExitUsage);
    EXPECT_EQ(run({"resolve", "--lambda", "abc"}).status, cli::kExitUsage);
    EXPECT_EQ(run({"resolve", "--lambda", "-1"}).status, cli::kExitUsage);
    EXPECT_EQ(run({"resolve", "--format", "xml"}).status, cli::kExitUsage);
    EXPECT_EQ(run({"resolve", "--operator", "{bad"}).status, cli::kExitUsage);
    EXPECT_EQ(run({"resolve", "--operator", "/nonexistent/op.json"}).status, cli::kExitUsage);
    EXPECT_EQ(run({"resolve", "--rhs", "[1,2]"}).status, cli::kExitUsage);
    EXPECT_EQ(run({"bootstrap-demo", "--ratio", "0.5"}).status, cli::kExitUsage);
    EXPECT_EQ(run({"bootstrap-demo", "--operator", kShift}).status, cli::kExitUsage);
    EXPECT_EQ(run({"banach-demo", "--k", "1"}).status, cli::kExitUsage);
    EXPECT_EQ(run({"heat-flow", "--steps", "0"}).status, cli::kExitUsage);
    EXPECT_EQ(run({"probe-unbounded", "--max-n", "0"}).status, cli::kExitUsage);
}

TEST(Cli, NumericalErrors) {
    const auto r = run({"bootstrap-demo", "--lambda", "0.01", "--max-iters", "2"});
    EXPECT_EQ(r.status, cli::kExitNumerical);
    EXPECT_EQ(run({"resolve", "--operator", R"({"kind":"right_shift","params":{"n":30}})", "--lambda", "100"}).status,
              cli::kExitNumerical);
}

TEST(Cli, JsonErrors) {
    const auto r = run({"resolve", "--lambda", "-1", "--json-errors"});
    EXPECT_EQ(r.status, cli::kExitUsage);
    const Json j = Json::parse(r.err);
    EXPECT_EQ(j["error"]["kind"], "usage");
    EXPECT_EQ(j["error"]["exit_code"], 2);
    EXPECT_FALSE(j["error"]["message"].get<std::string>().empty());

    const auto n = run({"bootstrap-demo", "--max-iters", "1", "--lambda", "0.01", "--json-errors"});
    EXPECT_EQ(Json::parse(n.err)["error"]["exit_code"], 3);
}

TEST(Cli, EmittedOperatorReparses) {
    const OperatorSpec op = OperatorSpec::laplacian_2d(3, 5);
    const std::string text = to_json(op).dump();
    const auto r = run({"certify", "--operator", text, "--format", "json", "--lambda", "0.1"});
    ASSERT_EQ(r.status, 0) << r.err;
    EXPECT_EQ(operator_from_json(Json::parse(text)).dim(), 15);
}

TEST(Cli, Help) {
    const auto r = run({"--help"});
    EXPECT_EQ(r.status, 0);
    EXPECT_NE(r.out.find("certify"), std::string::npos);
}
