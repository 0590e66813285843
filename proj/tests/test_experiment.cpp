#include <cstdio>
#include <fstream>
#include <sstream>

#include "catch_amalgamated.hpp"
#include "zkpcn/experiment.hpp"

using namespace zkpcn;

namespace {

ExperimentPlan small_plan(Mode mode = Mode::ZKPCN) {
    ExperimentPlan plan;
    plan.base.mode = mode;
    plan.base.seed = 3;
    plan.base.workload.tx_count = 60;
    plan.synthetic.nodes = 25;
    plan.synthetic.channels = 50;
    plan.synthetic.caps = CapacitySampler::log_uniform(10, 200);
    plan.trials = 3;
    return plan;
}

}  // namespace

TEST_CASE("sweep range grammar expands inclusively", "[experiment]") {
    REQUIRE(parse_sweep_range("1:25:4") ==
            std::vector<double>{1, 5, 9, 13, 17, 21, 25});
    REQUIRE(parse_sweep_range("7") == std::vector<double>{7});
    REQUIRE(parse_sweep_range("0:1:0.25") == std::vector<double>{0, 0.25, 0.5, 0.75, 1.0});
    REQUIRE_THROWS(parse_sweep_range("5:1:1"));
    REQUIRE_THROWS(parse_sweep_range("1:9:0"));
    REQUIRE_THROWS(parse_sweep_range("1:9"));
}

TEST_CASE("synthetic spec parser reads key=value lists", "[experiment]") {
    SyntheticSpec spec =
        parse_synthetic_spec("n=200,channels=500,capmin=5,capmax=50,capdist=uniform");
    REQUIRE(spec.nodes == 200);
    REQUIRE(spec.channels == 500);
    REQUIRE(spec.caps.kind == CapacitySampler::Kind::UniformRange);
    REQUIRE(spec.caps.lo == 5);
    REQUIRE(spec.caps.hi == 50);
    REQUIRE_THROWS(parse_synthetic_spec("nodes"));
    REQUIRE_THROWS(parse_synthetic_spec("bogus=1"));
    REQUIRE_THROWS(parse_synthetic_spec("n=10,capdist=exotic"));
}

TEST_CASE("axis application touches exactly one knob", "[experiment]") {
    SimConfig base;
    SimConfig c1 = apply_axis(base, SweepAxis::CapacityFactor, 15);
    REQUIRE(c1.capacity_factor == 15);
    SimConfig c2 = apply_axis(base, SweepAxis::Skewness, 4.0);
    REQUIRE(c2.workload.skewness == 4.0);
    SimConfig c3 = apply_axis(base, SweepAxis::Reachability, 0.25);
    REQUIRE(c3.reachability == 0.25);
    SimConfig c4 = apply_axis(base, SweepAxis::HashLatency, 100);
    REQUIRE(c4.fixed_hash_count == 100);
    SimConfig c5 = apply_axis(base, SweepAxis::TxCount, 1234);
    REQUIRE(c5.workload.tx_count == 1234);
}

TEST_CASE("plan validation enforces increasing sweep values", "[experiment]") {
    ExperimentPlan plan = small_plan();
    plan.values = {1.0, 1.0};
    REQUIRE_THROWS_AS(plan.validate(), std::invalid_argument);
    plan.values = {};
    REQUIRE_THROWS_AS(plan.validate(), std::invalid_argument);
    plan.values = {1.0, 2.0};
    plan.validate();
}

TEST_CASE("run_plan aggregates trials per axis point", "[experiment]") {
    ExperimentPlan plan = small_plan();
    plan.axis = SweepAxis::CapacityFactor;
    plan.values = {1, 5};
    auto rows = run_plan(plan);
    REQUIRE(rows.size() == 2);
    for (const auto& row : rows) {
        REQUIRE(row.trials == 3);
        REQUIRE(row.mode == "zkpcn");
        REQUIRE(row.mean >= 0.0);
        REQUIRE(row.mean <= 1.0);
        REQUIRE(row.stddev >= 0.0);
    }
    // More capacity cannot hurt at these scales.
    REQUIRE(rows[1].mean >= rows[0].mean);
}

TEST_CASE("single-trial rows have zero stddev", "[experiment]") {
    ExperimentPlan plan = small_plan();
    plan.trials = 1;
    auto rows = run_plan(plan);
    REQUIRE(rows.size() == 1);
    REQUIRE(rows[0].stddev == 0.0);
    REQUIRE(rows[0].trials == 1);
}

TEST_CASE("identical plans produce identical rows", "[experiment]") {
    ExperimentPlan plan = small_plan(Mode::ZKIPCN);
    plan.axis = SweepAxis::Reachability;
    plan.values = {0.5, 1.0};
    auto a = run_plan(plan);
    auto b = run_plan(plan);
    REQUIRE(a == b);
}

TEST_CASE("csv round-trips exactly", "[experiment]") {
    std::vector<ResultRow> rows = {
        {1.0, "zkpcn", 0.123456789012345678, 0.01, 10},
        {5.0, "zkpcn", 1.0 / 3.0, 0.0, 10},
    };
    std::ostringstream out;
    emit_csv(rows, out);
    std::string text = out.str();
    REQUIRE(text.find("axis,mode,mean,std,trials\n") != std::string::npos);
    REQUIRE(text.substr(0, 1) == "#");

    std::istringstream in(text);
    auto parsed = parse_csv(in);
    REQUIRE(parsed == rows);
}

TEST_CASE("csv writer reports unwritable paths and empty rows", "[experiment]") {
    std::ostringstream sink;
    REQUIRE_THROWS_AS(emit_csv({}, sink), std::invalid_argument);
    std::vector<ResultRow> rows = {{1.0, "ln", 0.5, 0.0, 1}};
    REQUIRE_THROWS_AS(emit_csv(rows, "/nonexistent-dir/x.csv"), std::runtime_error);
}

TEST_CASE("emitted files are byte-identical across reruns", "[experiment]") {
    ExperimentPlan plan = small_plan(Mode::LN);
    plan.values = {0.0};
    std::string p1 = "run1.csv";
    std::string p2 = "run2.csv";
    emit_csv(run_plan(plan), p1);
    emit_csv(run_plan(plan), p2);
    std::ifstream f1(p1, std::ios::binary);
    std::ifstream f2(p2, std::ios::binary);
    std::string s1((std::istreambuf_iterator<char>(f1)), std::istreambuf_iterator<char>());
    std::string s2((std::istreambuf_iterator<char>(f2)), std::istreambuf_iterator<char>());
    REQUIRE(s1 == s2);
    REQUIRE_FALSE(s1.empty());
    std::remove(p1.c_str());
    std::remove(p2.c_str());
}

TEST_CASE("slope report prints one fitted slope per mode", "[experiment]") {
    std::ostringstream os;
    auto slopes = emit_slope_report({{"zkpcn", {0, 2, 4, 6}}, {"zkipcn", {0, 0, 0}}}, os);
    REQUIRE(slopes.size() == 2);
    REQUIRE(slopes[0].second == 2.0);
    REQUIRE(slopes[1].second == 0.0);
    REQUIRE(os.str().find("slope zkpcn 2") != std::string::npos);

    REQUIRE_THROWS_AS(emit_slope_report({{"x", {1}}}, os), std::invalid_argument);
}

TEST_CASE("axis and metric names parse both ways", "[experiment]") {
    REQUIRE(sweep_axis_from("capacity") == SweepAxis::CapacityFactor);
    REQUIRE(sweep_axis_from("hash_latency") == SweepAxis::HashLatency);
    REQUIRE_THROWS(sweep_axis_from("volume"));
    REQUIRE(metric_from("proof_slope") == Metric::ProofSlope);
    REQUIRE_THROWS(metric_from("latency"));
}

TEST_CASE("topology file plans load from disk", "[experiment]") {
    std::string path = "plan_topology.txt";
    {
        std::ofstream out(path);
        out << "channel A B 40\nchannel B C 40\nchannel A C 40\n";
    }
    ExperimentPlan plan = small_plan();
    plan.topology_file = path;
    plan.base.workload.tx_count = 30;
    auto rows = run_plan(plan);
    REQUIRE(rows.size() == 1);
    REQUIRE(rows[0].mean > 0.0);
    std::remove(path.c_str());

    plan.topology_file = "missing_topology.txt";
    REQUIRE_THROWS_AS(run_plan(plan), std::runtime_error);
}
