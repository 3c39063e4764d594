#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>

#include "fixtures.hpp"
#include "maxmono/serialization.hpp"

using namespace maxmono;

TEST(FormatNumber, Examples) {
    EXPECT_EQ(format_number(1.0), "1");
    EXPECT_EQ(format_number(0.5), "0.5");
    EXPECT_EQ(format_number(-2.25), "-2.25");
    EXPECT_EQ(format_number(0.1), "0.1");
    EXPECT_EQ(format_number(1e-10), "1e-10");
    EXPECT_EQ(format_number(123456789.0), "123456789");
}

TEST(FormatNumber, RoundTripsEveryDouble) {
    Rng rng(88);
    for (int trial = 0; trial < 20000; ++trial) {
        const double mantissa = rng.uniform(-1.0, 1.0);
        const double x = std::ldexp(mantissa, static_cast<int>(rng.uniform(-1070.0, 1020.0)));
        const std::string s = format_number(x);
        EXPECT_EQ(std::strtod(s.c_str(), nullptr), x) << s;
        EXPECT_EQ(s.find(','), std::string::npos);
    }
    EXPECT_EQ(std::strtod(format_number(std::numeric_limits<double>::denorm_min()).c_str(), nullptr),
              std::numeric_limits<double>::denorm_min());
}

TEST(HVectorJson, RoundTrip) {
    Rng rng(1);
    for (int trial = 0; trial < 50; ++trial) {
        const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng.uniform() * 30);
        const HVector u = rng.gaussian(n, rng.uniform(0.01, 3.0));
        const HVector back = hvector_from_json(Json::parse(to_json(u).dump()));
        EXPECT_EQ(back.weight(), u.weight());
        EXPECT_EQ(back.coeffs(), u.coeffs());
    }
}

TEST(HVectorJson, StrictParsing) {
    EXPECT_THROW(hvector_from_json(Json::parse(R"({"weight":1,"coeffs":[1],"extra":0})")), UsageError);
    EXPECT_THROW(hvector_from_json(Json::parse(R"({"weight":1})")), UsageError);
    EXPECT_THROW(hvector_from_json(Json::parse(R"({"coeffs":[1]})")), UsageError);
    EXPECT_THROW(hvector_from_json(Json::parse(R"({"weight":0,"coeffs":[1]})")), UsageError);
    EXPECT_THROW(hvector_from_json(Json::parse(R"({"weight":1,"coeffs":[]})")), UsageError);
    EXPECT_THROW(hvector_from_json(Json::parse(R"({"weight":1,"coeffs":["a"]})")), UsageError);
    EXPECT_THROW(hvector_from_json(Json::parse("[1,2]")), UsageError);
}

TEST(OperatorJson, RoundTripEveryKind) {
    for (const auto& op : fixtures::full_catalog(3)) {
        const Json emitted = to_json(op);
        const OperatorSpec back = operator_from_json(Json::parse(emitted.dump()));
        EXPECT_EQ(back.kind_name(), op.kind_name());
        EXPECT_EQ(back.dim(), op.dim());
        EXPECT_EQ(back.weight(), op.weight());
        EXPECT_EQ(back.monotone_expected(), op.monotone_expected());
        EXPECT_EQ(to_json(back), emitted);
        EXPECT_EQ(to_dense(back), to_dense(op)) << op.kind_name();
    }
}

TEST(OperatorJson, Examples) {
    const auto lap = operator_from_json(Json::parse(R"({"kind":"laplacian_2d","params":{"nx":3,"ny":4}})"));
    EXPECT_EQ(lap.dim(), 12);
    const auto diag = operator_from_json(Json::parse(R"({"kind":"diagonal","params":{"n":4}})"));
    EXPECT_EQ(to_dense(diag).diagonal(), (Vector<double>(4) << 1, 2, 3, 4).finished());
    const auto weights = operator_from_json(Json::parse(R"({"kind":"diagonal","params":{"weights":[0,2]}})"));
    EXPECT_EQ(weights.dim(), 2);
    const auto spd = operator_from_json(Json::parse(R"({"kind":"spd_matrix","params":{"entries":[[2,1],[1,2]]}})"));
    EXPECT_EQ(to_dense(spd)(0, 1), 1.0);
}

TEST(OperatorJson, StrictParsing) {
    const char* bad[] = {
        R"({"kind":"laplacian_1d","params":{"n":5,"m":1}})",
        R"({"kind":"laplacian_1d","params":{"n":5},"note":"x"})",
        R"({"kind":"laplacian_1d","params":{"n":0}})",
        R"({"kind":"laplacian_1d","params":{"n":2.5}})",
        R"({"kind":"laplacian_1d","params":{}})",
        R"({"kind":"nonsense","params":{}})",
        R"({"params":{"n":3}})",
        R"({"kind":3,"params":{"n":3}})",
        R"({"kind":"diagonal","params":{"n":3,"weights":[1,2,3]}})",
        R"({"kind":"diagonal","params":{}})",
        R"({"kind":"spd_matrix","params":{"entries":[[1,2],[3]]}})",
        R"({"kind":"laplacian_2d","params":{"nx":3}})",
        R"(["laplacian_1d"])",
    };
    for (const char* text : bad) EXPECT_THROW(operator_from_json(Json::parse(text)), UsageError) << text;
}

TEST(ReportJson, Shapes) {
    const auto cert = monotonicity_certificate(OperatorSpec::right_shift(2), 5, 1);
    const Json c = to_json(cert);
    EXPECT_EQ(c["property"], "monotone");
    EXPECT_EQ(c["verdict"], "fail");
    EXPECT_EQ(c["witness"]["coeffs"].size(), 2u);

    IterationReport report;
    report.iterations = 2;
    report.residual_history = {1.0, 0.5};
    report.k_claimed = 0.5;
    report.apriori_bounds = {1.0, 0.5};
    const Json r = to_json(report);
    EXPECT_EQ(r["iterations"], 2);
    EXPECT_EQ(r["k_estimate"], nullptr);
    EXPECT_EQ(r["residual_history"][1], 0.5);

    BootstrapTrace trace;
    trace.stages.push_back({0.5, 1.0, false, report});
    const Json t = to_json(trace);
    ASSERT_EQ(t["stages"].size(), 1u);
    const Json& stage = t["stages"][0];
    std::vector<std::string> keys;
    for (const auto& [key, value] : stage.items()) keys.push_back(key);
    EXPECT_EQ(keys, (std::vector<std::string>{"lambda", "factor", "iterations", "final_residual"}));
    EXPECT_EQ(stage["final_residual"], 0.5);
}

TEST(Csv, IterationTable) {
    IterationReport known;
    known.residual_history = {1.0, 0.25};
    known.apriori_bounds = {0.5, 0.125};
    std::ostringstream a;
    write_iteration_csv(a, known);
    EXPECT_EQ(a.str(), "iter,residual,apriori_bound\n1,1,0.5\n2,0.25,0.125\n");

    IterationReport unknown;
    unknown.residual_history = {0.1};
    std::ostringstream b;
    write_iteration_csv(b, unknown);
    EXPECT_EQ(b.str(), "iter,residual,apriori_bound\n1,0.1,\n");
}

TEST(Csv, TraceTables) {
    IterationReport report;
    report.iterations = 2;
    report.residual_history = {0.5, 0.25};
    report.k_claimed = 0.5;
    report.apriori_bounds = {0.5, 0.25};
    BootstrapTrace trace;
    trace.stages.push_back({2.0 / 3.0, 0.5, false, report});
    trace.stages.push_back({0.4, 2.0 / 3.0, true, report});
    std::ostringstream summary;
    write_trace_csv(summary, trace);
    EXPECT_EQ(summary.str(),
              "stage,lambda,factor,clamped,iterations,final_residual,k_estimate\n"
              "1,0.6666666666666666,0.5,0,2,0.25,\n"
              "2,0.4,0.6666666666666666,1,2,0.25,\n");
    std::ostringstream detail;
    write_trace_convergence_csv(detail, trace);
    EXPECT_EQ(detail.str(),
              "stage,lambda,iter,residual,apriori_bound\n"
              "1,0.6666666666666666,1,0.5,0.5\n"
              "1,0.6666666666666666,2,0.25,0.25\n"
              "2,0.4,1,0.5,0.5\n"
              "2,0.4,2,0.25,0.25\n");
}

TEST(Csv, TrajectoryTable) {
    Trajectory traj;
    traj.states = {HVector{1.0}, HVector{0.5}};
    traj.norms = {1.0, 0.5};
    traj.times = {0.0, 0.1};
    std::ostringstream out;
    write_trajectory_csv(out, traj);
    EXPECT_EQ(out.str(), "step,time,norm\n0,0,1\n1,0.1,0.5\n");
    const Json states = trajectory_states_json(traj);
    ASSERT_EQ(states["states"].size(), 2u);
    EXPECT_EQ(states["states"][1]["state"]["coeffs"][0], 0.5);
}
