#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nocsim/config.hpp"
#include "nocsim/engine.hpp"
#include "nocsim/metrics.hpp"
#include "nocsim/routing.hpp"
#include "nocsim/sweep.hpp"
#include "nocsim/topology.hpp"
#include "nocsim/trace.hpp"

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open output file: " + path);
    return out;
}

int cmd_run(const std::string& config_path, std::uint64_t seed, bool seed_set,
            const std::string& trace_path, const std::string& metrics_path,
            const std::string& queues_path, const std::string& routes_path) {
    nocsim::SimConfig cfg = nocsim::load_config(config_path);
    if (seed_set)
        cfg.seed = seed;

    const nocsim::Topology topology = nocsim::build_topology(cfg);
    const nocsim::RoutingTable table = nocsim::compute_routing(topology);
    if (!routes_path.empty()) {
        auto out = open_out(routes_path);
        table.dump_routes(out);
    }

    const nocsim::SimResult result =
        nocsim::run_simulation(topology, table, cfg.traffic,
                               nocsim::injection_process_of(cfg),
                               nocsim::sim_params_of(cfg), cfg.seed);
    if (!trace_path.empty()) {
        auto out = open_out(trace_path);
        nocsim::write_trace(out, result.trace);
    }
    if (!queues_path.empty()) {
        auto out = open_out(queues_path);
        nocsim::write_queue_samples(out, result.queue_samples);
    }

    const nocsim::Metrics m =
        nocsim::compute_metrics(result.trace, cfg.duration, cfg.warmup);
    if (!metrics_path.empty()) {
        auto out = open_out(metrics_path);
        nocsim::write_metrics_summary(out, m);
    }
    nocsim::write_metrics_summary(std::cout, m);
    return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& rates,
              const std::string& topologies, std::size_t reps, unsigned jobs,
              const std::string& out_path) {
    const nocsim::SimConfig cfg = nocsim::load_config(config_path);
    nocsim::SweepSpec spec;
    spec.rates = nocsim::parse_rates(rates);
    spec.topologies = nocsim::parse_topology_list(topologies);
    spec.repetitions = reps;

    const std::vector<nocsim::ReportRow> rows = nocsim::run_sweep(cfg, spec, jobs);
    auto out = open_out(out_path);
    nocsim::emit_report(out, rows);
    std::cout << rows.size() << " rows written to " << out_path << "\n";
    return 0;
}

int cmd_report(const std::string& trace_path, double warmup, double duration,
               bool duration_set) {
    std::ifstream in(trace_path);
    if (!in)
        throw std::runtime_error("cannot open trace file: " + trace_path);
    const std::vector<nocsim::TraceRecord> trace = nocsim::parse_trace(in);
    if (trace.empty())
        throw std::runtime_error("empty trace: " + trace_path);
    if (!duration_set)
        duration = trace.back().time; // records are time-ordered
    const nocsim::Metrics m = nocsim::compute_metrics(trace, duration, warmup);
    nocsim::write_metrics_summary(std::cout, m);
    return 0;
}

int cmd_topo(const std::string& config_path) {
    const nocsim::SimConfig cfg = nocsim::load_config(config_path);
    const nocsim::Topology topology = nocsim::build_topology(cfg);
    topology.write_edge_list(std::cout);
    std::map<std::size_t, std::size_t> census;
    for (nocsim::NodeId v = 0; v < topology.node_count(); ++v)
        ++census[topology.degree(v)];
    std::cout << "# degree census\n";
    for (const auto& [degree, count] : census)
        std::cout << "# degree " << degree << ": " << count << " nodes\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Packet-level network-on-chip simulator"};
    app.require_subcommand(1);

    std::string config_path, trace_path, metrics_path, queues_path, routes_path;
    std::uint64_t seed = 0;
    std::string rates, topologies = "mesh,diagonal_mesh", sweep_out;
    std::size_t reps = 1;
    unsigned jobs = 1;
    double warmup = 0.0, duration = 0.0;

    CLI::App* run = app.add_subcommand("run", "Run one simulation; write trace and metrics");
    run->add_option("--config", config_path, "Configuration file")->required();
    CLI::Option* seed_opt = run->add_option("--seed", seed, "Override sim.seed");
    run->add_option("--trace", trace_path, "Write the event trace here");
    run->add_option("--metrics", metrics_path, "Write the metrics summary here");
    run->add_option("--queues", queues_path, "Write queue-occupancy samples here");
    run->add_option("--routes", routes_path, "Dump the routing table here");

    CLI::App* sweep = app.add_subcommand("sweep", "Delay-vs-rate sweep to CSV");
    sweep->add_option("--config", config_path, "Configuration file")->required();
    sweep->add_option("--rates", rates, "start:stop:step or comma list")->required();
    sweep->add_option("--topologies", topologies, "Comma list of mesh, diagonal_mesh");
    sweep->add_option("--reps", reps, "Repetitions per sweep point");
    sweep->add_option("--jobs", jobs, "Concurrent simulations");
    sweep->add_option("--out", sweep_out, "Output CSV path")->required();

    CLI::App* report = app.add_subcommand("report", "Recompute metrics from a trace file");
    report->add_option("--trace", trace_path, "Trace file")->required();
    report->add_option("--warmup", warmup, "Exclude packets generated before this time");
    CLI::Option* duration_opt =
        report->add_option("--duration", duration, "Window end (default: last record time)");

    CLI::App* topo = app.add_subcommand("topo", "Dump topology edge list and degree census");
    topo->add_option("--config", config_path, "Configuration file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed())
            return cmd_run(config_path, seed, seed_opt->count() > 0, trace_path,
                           metrics_path, queues_path, routes_path);
        if (sweep->parsed())
            return cmd_sweep(config_path, rates, topologies, reps, jobs, sweep_out);
        if (report->parsed())
            return cmd_report(trace_path, warmup, duration, duration_opt->count() > 0);
        if (topo->parsed())
            return cmd_topo(config_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
