#ifndef ZKPCN_EXPERIMENT_HPP
#define ZKPCN_EXPERIMENT_HPP

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "zkpcn/sim.hpp"
#include "zkpcn/topology.hpp"

namespace zkpcn {

enum class SweepAxis : std::uint8_t {
    None,
    CapacityFactor,
    Skewness,
    Reachability,
    HashLatency,
    TxCount,
};

inline const char* to_string(SweepAxis a) {
    switch (a) {
        case SweepAxis::None: return "none";
        case SweepAxis::CapacityFactor: return "capacity";
        case SweepAxis::Skewness: return "skewness";
        case SweepAxis::Reachability: return "reachability";
        case SweepAxis::HashLatency: return "hash_latency";
        case SweepAxis::TxCount: return "txs";
    }
    return "?";
}

inline SweepAxis sweep_axis_from(const std::string& name) {
    if (name == "capacity" || name == "capacity_factor") return SweepAxis::CapacityFactor;
    if (name == "skewness") return SweepAxis::Skewness;
    if (name == "reachability") return SweepAxis::Reachability;
    if (name == "hash_latency" || name == "hash") return SweepAxis::HashLatency;
    if (name == "txs" || name == "tx_count") return SweepAxis::TxCount;
    throw std::invalid_argument("unknown sweep axis: " + name);
}

enum class Metric : std::uint8_t { SuccessRate, ProofSlope, ProofsGenerated, MeanPathLength };

inline const char* to_string(Metric m) {
    switch (m) {
        case Metric::SuccessRate: return "success_rate";
        case Metric::ProofSlope: return "proof_slope";
        case Metric::ProofsGenerated: return "proofs_generated";
        case Metric::MeanPathLength: return "mean_path_length";
    }
    return "?";
}

inline Metric metric_from(const std::string& name) {
    if (name == "success_rate") return Metric::SuccessRate;
    if (name == "proof_slope") return Metric::ProofSlope;
    if (name == "proofs_generated") return Metric::ProofsGenerated;
    if (name == "mean_path_length") return Metric::MeanPathLength;
    throw std::invalid_argument("unknown metric: " + name);
}

inline double extract_metric(const Metrics& m, Metric which) {
    switch (which) {
        case Metric::SuccessRate: return m.success_rate;
        case Metric::ProofSlope: return m.proofs_per_tx_slope;
        case Metric::ProofsGenerated: return static_cast<double>(m.proofs_generated);
        case Metric::MeanPathLength: return m.mean_path_length;
    }
    return 0.0;
}

// `start:stop:step`, inclusive of stop when the grid lands on it; a bare
// number is a one-point sweep.
inline std::vector<double> parse_sweep_range(const std::string& text) {
    std::vector<double> values;
    auto c1 = text.find(':');
    if (c1 == std::string::npos) {
        values.push_back(std::stod(text));
        return values;
    }
    auto c2 = text.find(':', c1 + 1);
    if (c2 == std::string::npos)
        throw std::invalid_argument("sweep range must be start:stop:step, got " + text);
    double start = std::stod(text.substr(0, c1));
    double stop = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
    double step = std::stod(text.substr(c2 + 1));
    if (!(step > 0.0)) throw std::invalid_argument("sweep step must be positive");
    if (stop < start) throw std::invalid_argument("sweep stop must be >= start");
    for (double v = start; v <= stop + 1e-9; v += step) values.push_back(v);
    return values;
}

struct SyntheticSpec {
    std::size_t nodes = 1000;
    std::size_t channels = 4000;
    CapacitySampler caps = CapacitySampler::log_uniform(10, 1000);
};

// `n=1000,channels=4000[,capmin=10,capmax=1000,capdist=log|uniform|const]`
inline SyntheticSpec parse_synthetic_spec(const std::string& text) {
    SyntheticSpec spec;
    Amount capmin = 10;
    Amount capmax = 1000;
    std::string capdist = "log";
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("synthetic spec entries must be key=value: " + item);
        std::string key = item.substr(0, eq);
        std::string val = item.substr(eq + 1);
        if (key == "n" || key == "nodes") spec.nodes = std::stoull(val);
        else if (key == "channels") spec.channels = std::stoull(val);
        else if (key == "capmin") capmin = std::stoull(val);
        else if (key == "capmax") capmax = std::stoull(val);
        else if (key == "capdist") capdist = val;
        else throw std::invalid_argument("unknown synthetic spec key: " + key);
    }
    if (capdist == "log") spec.caps = CapacitySampler::log_uniform(capmin, capmax);
    else if (capdist == "uniform") spec.caps = CapacitySampler::uniform(capmin, capmax);
    else if (capdist == "const") spec.caps = CapacitySampler::constant(capmin);
    else throw std::invalid_argument("capdist must be log|uniform|const");
    return spec;
}

struct ExperimentPlan {
    SimConfig base;
    SweepAxis axis = SweepAxis::None;
    std::vector<double> values{0.0};  // placeholder point when axis == None
    std::uint32_t trials = 10;
    Metric metric = Metric::SuccessRate;
    std::string topology_file;  // empty = synthetic
    SyntheticSpec synthetic;
    std::string out_path;

    void validate() const {
        base.validate();
        if (values.empty()) throw std::invalid_argument("plan: sweep values must be non-empty");
        for (std::size_t i = 1; i < values.size(); ++i)
            if (values[i] <= values[i - 1])
                throw std::invalid_argument("plan: sweep values must be strictly increasing");
        if (trials < 1) throw std::invalid_argument("plan: trials must be >= 1");
    }
};

struct ResultRow {
    double axis_value = 0.0;
    std::string mode;
    double mean = 0.0;
    double stddev = 0.0;
    std::uint32_t trials = 0;

    bool operator==(const ResultRow&) const = default;
};

inline SimConfig apply_axis(SimConfig cfg, SweepAxis axis, double value) {
    switch (axis) {
        case SweepAxis::None:
            break;
        case SweepAxis::CapacityFactor:
            cfg.capacity_factor = static_cast<std::uint64_t>(value);
            break;
        case SweepAxis::Skewness:
            cfg.workload.skewness = value;
            break;
        case SweepAxis::Reachability:
            cfg.reachability = value;
            break;
        case SweepAxis::HashLatency:
            cfg.fixed_hash_count = static_cast<std::uint32_t>(value);
            break;
        case SweepAxis::TxCount:
            cfg.workload.tx_count = static_cast<std::uint64_t>(value);
            break;
    }
    return cfg;
}

inline Network plan_network(const ExperimentPlan& plan) {
    if (!plan.topology_file.empty()) {
        std::ifstream in(plan.topology_file);
        if (!in) throw std::runtime_error("cannot open topology file: " + plan.topology_file);
        return load_snapshot(in);
    }
    return generate_synthetic(plan.synthetic.nodes, plan.synthetic.channels, plan.synthetic.caps,
                              plan.base.seed);
}

// One row per axis point: mean and sample standard deviation (n-1) of the
// chosen metric over `trials` runs with seeds base, base+1, ...
inline std::vector<ResultRow> run_plan(const ExperimentPlan& plan) {
    plan.validate();
    Network base_net = plan_network(plan);

    std::vector<ResultRow> rows;
    for (double value : plan.values) {
        std::vector<double> samples;
        samples.reserve(plan.trials);
        for (std::uint32_t trial = 0; trial < plan.trials; ++trial) {
            SimConfig cfg = apply_axis(plan.base, plan.axis, value);
            cfg.seed = plan.base.seed + trial;
            cfg.workload.seed = cfg.seed;
            try {
                samples.push_back(extract_metric(run_simulation(cfg, base_net), plan.metric));
            } catch (const std::exception& e) {
                throw std::runtime_error("trial failed (axis=" + std::to_string(value) +
                                         ", trial=" + std::to_string(trial) + "): " + e.what());
            }
        }
        double mean = 0.0;
        for (double s : samples) mean += s;
        mean /= static_cast<double>(samples.size());
        double var = 0.0;
        if (samples.size() > 1) {
            for (double s : samples) var += (s - mean) * (s - mean);
            var /= static_cast<double>(samples.size() - 1);
        }
        rows.push_back(
            {value, to_string(plan.base.mode), mean, std::sqrt(var), plan.trials});
    }
    return rows;
}

inline void emit_csv(const std::vector<ResultRow>& rows, std::ostream& os) {
    if (rows.empty()) throw std::invalid_argument("emit_csv: no rows");
    os << "# std is the sample standard deviation over trials (n-1 denominator)\n";
    os << "axis,mode,mean,std,trials\n";
    os << std::setprecision(17);
    for (const ResultRow& r : rows)
        os << r.axis_value << ',' << r.mode << ',' << r.mean << ',' << r.stddev << ','
           << r.trials << '\n';
}

inline void emit_csv(const std::vector<ResultRow>& rows, const std::string& path) {
    std::ofstream out(path, std::ios::binary);  // LF line endings everywhere
    if (!out) throw std::runtime_error("emit_csv: cannot open " + path);
    emit_csv(rows, out);
    if (!out) throw std::runtime_error("emit_csv: write failed for " + path);
}

inline std::vector<ResultRow> parse_csv(std::istream& in) {
    std::vector<ResultRow> rows;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            if (line != "axis,mode,mean,std,trials")
                throw std::runtime_error("parse_csv: unexpected header: " + line);
            header_seen = true;
            continue;
        }
        std::stringstream ls(line);
        std::string axis, mode, mean, std_s, trials;
        if (!std::getline(ls, axis, ',') || !std::getline(ls, mode, ',') ||
            !std::getline(ls, mean, ',') || !std::getline(ls, std_s, ',') ||
            !std::getline(ls, trials, ','))
            throw std::runtime_error("parse_csv: malformed row: " + line);
        rows.push_back({std::stod(axis), mode, std::stod(mean), std::stod(std_s),
                        static_cast<std::uint32_t>(std::stoul(trials))});
    }
    return rows;
}

// Least-squares slope of each mode's cumulative proof-count series, printed
// one line per mode.
inline std::vector<std::pair<std::string, double>> emit_slope_report(
    const std::vector<std::pair<std::string, std::vector<std::uint64_t>>>& series_per_mode,
    std::ostream& os) {
    std::vector<std::pair<std::string, double>> slopes;
    for (const auto& [mode, series] : series_per_mode) {
        double slope = least_squares_slope(series);
        os << "slope " << mode << " " << std::setprecision(17) << slope << "\n";
        slopes.emplace_back(mode, slope);
    }
    return slopes;
}

}  // namespace zkpcn

#endif  // ZKPCN_EXPERIMENT_HPP
