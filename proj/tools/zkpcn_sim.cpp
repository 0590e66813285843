// Command-line driver: build a topology, sweep one experiment axis, and
// emit per-point mean/std CSV rows.

#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "zkpcn/zkpcn.hpp"

namespace {

void print_effective_config(const zkpcn::ExperimentPlan& plan, const std::string& latency_name) {
    const zkpcn::SimConfig& c = plan.base;
    std::cout << "config:"
              << " mode=" << zkpcn::to_string(c.mode);
    if (plan.topology_file.empty())
        std::cout << " topology=synthetic(n=" << plan.synthetic.nodes
                  << ",channels=" << plan.synthetic.channels << ")";
    else
        std::cout << " topology=" << plan.topology_file;
    std::cout << " capacity_factor=" << c.capacity_factor
              << " skewness=" << c.workload.skewness << " txs=" << c.workload.tx_count
              << " reachability=" << c.reachability << " latency=" << latency_name
              << " decoys=" << c.decoy_count << " k_hop=" << c.k_hop
              << " ln_retries=" << c.ln_max_retries << " candidates=" << c.max_candidate_routes
              << " trials=" << plan.trials << " seed=" << c.seed
              << " metric=" << zkpcn::to_string(plan.metric);
    if (plan.axis != zkpcn::SweepAxis::None) {
        std::cout << " sweep=" << zkpcn::to_string(plan.axis) << "[";
        for (std::size_t i = 0; i < plan.values.size(); ++i)
            std::cout << (i ? "," : "") << plan.values[i];
        std::cout << "]";
    }
    std::cout << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"zk-PCN payment channel network simulator"};

    std::string mode = "zkpcn";
    std::string topology_file;
    std::string synthetic = "n=1000,channels=4000";
    std::uint64_t capacity_factor = 1;
    double skewness = 0.0;
    std::uint64_t txs = 50000;
    double reachability = 1.0;
    std::string latency_table = "zero";
    std::uint32_t decoys = 2;
    std::uint32_t k_hop = 3;
    std::uint32_t ln_retries = 10;
    std::uint32_t candidates = 3;
    std::vector<std::string> sweep;
    std::uint32_t trials = 10;
    std::uint64_t seed = 1;
    std::string out_path;
    std::string metric = "success_rate";
    double per_hop_delay = 1.0;
    double inter_arrival = 1.0;
    std::uint64_t reset_threshold = 1000;

    app.add_option("--mode", mode, "Simulation mode")
        ->check(CLI::IsMember({"ln", "zkpcn", "zkipcn"}));
    app.add_option("--topology", topology_file, "Topology snapshot file");
    app.add_option("--synthetic", synthetic,
                   "Synthetic topology spec, e.g. n=1000,channels=4000");
    app.add_option("--capacity-factor", capacity_factor, "Channel capacity multiplier")
        ->check(CLI::PositiveNumber);
    app.add_option("--skewness", skewness, "Sender skewness factor (0 = uniform)")
        ->check(CLI::NonNegativeNumber);
    app.add_option("--txs", txs, "Transactions per trial")->check(CLI::PositiveNumber);
    app.add_option("--reachability", reachability, "Proof delivery probability")
        ->check(CLI::Range(0.0, 1.0));
    app.add_option("--latency-table", latency_table, "Prover latency model: builtin|zero|<file>");
    app.add_option("--decoys", decoys, "Decoy channel updates per payment");
    app.add_option("--k-hop", k_hop, "Static view horizon (zk-IPCN)")->check(CLI::PositiveNumber);
    app.add_option("--ln-retries", ln_retries, "LN candidate paths to attempt")
        ->check(CLI::PositiveNumber);
    app.add_option("--candidates", candidates, "zk-IPCN candidate routes to probe")
        ->check(CLI::PositiveNumber);
    app.add_option("--sweep", sweep, "Sweep axis and range, e.g. --sweep capacity 1:25:4")
        ->expected(2);
    app.add_option("--trials", trials, "Trials per sweep point")->check(CLI::PositiveNumber);
    app.add_option("--seed", seed, "Base seed (trial i runs with seed+i)");
    app.add_option("--out", out_path, "CSV output path");
    app.add_option("--metric", metric, "Reported metric")
        ->check(CLI::IsMember(
            {"success_rate", "proof_slope", "proofs_generated", "mean_path_length"}));
    app.add_option("--per-hop-delay", per_hop_delay, "Per-hop forwarding delay (ms)")
        ->check(CLI::NonNegativeNumber);
    app.add_option("--inter-arrival", inter_arrival, "Payment inter-arrival time (ms)")
        ->check(CLI::PositiveNumber);
    app.add_option("--reset-threshold", reset_threshold,
                   "Log length that triggers a channel baseline reset")
        ->check(CLI::PositiveNumber);

    CLI11_PARSE(app, argc, argv);

    try {
        zkpcn::ExperimentPlan plan;
        if (mode == "ln") plan.base.mode = zkpcn::Mode::LN;
        else if (mode == "zkipcn") plan.base.mode = zkpcn::Mode::ZKIPCN;
        else plan.base.mode = zkpcn::Mode::ZKPCN;

        plan.base.capacity_factor = capacity_factor;
        plan.base.workload.skewness = skewness;
        plan.base.workload.tx_count = txs;
        plan.base.workload.seed = seed;
        plan.base.reachability = reachability;
        plan.base.decoy_count = decoys;
        plan.base.k_hop = k_hop;
        plan.base.ln_max_retries = ln_retries;
        plan.base.max_candidate_routes = candidates;
        plan.base.per_hop_delay_ms = per_hop_delay;
        plan.base.inter_arrival_ms = inter_arrival;
        plan.base.reset_threshold = reset_threshold;
        plan.base.seed = seed;

        if (latency_table == "builtin") {
            plan.base.latency = zkpcn::LatencyModel::table1();
        } else if (latency_table == "zero") {
            plan.base.latency = zkpcn::LatencyModel::zero();
        } else {
            std::ifstream in(latency_table);
            if (!in) throw std::runtime_error("cannot open latency table: " + latency_table);
            plan.base.latency = zkpcn::LatencyModel::from_stream(in);
        }

        plan.topology_file = topology_file;
        plan.synthetic = zkpcn::parse_synthetic_spec(synthetic);
        plan.trials = trials;
        plan.metric = zkpcn::metric_from(metric);
        plan.out_path = out_path;
        if (!sweep.empty()) {
            plan.axis = zkpcn::sweep_axis_from(sweep[0]);
            plan.values = zkpcn::parse_sweep_range(sweep[1]);
        }

        print_effective_config(plan, latency_table);
        auto rows = zkpcn::run_plan(plan);
        zkpcn::emit_csv(rows, std::cout);
        if (!plan.out_path.empty()) {
            zkpcn::emit_csv(rows, plan.out_path);
            std::cout << "wrote " << plan.out_path << "\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
