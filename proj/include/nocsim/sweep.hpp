#ifndef NOCSIM_SWEEP_HPP
#define NOCSIM_SWEEP_HPP

#include <atomic>
#include <cstdint>
#include <mutex>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "nocsim/config.hpp"
#include "nocsim/engine.hpp"
#include "nocsim/metrics.hpp"
#include "nocsim/routing.hpp"

namespace nocsim {

// Rate axis and topology list for a delay-vs-traffic-rate comparison.
struct SweepSpec {
    std::vector<double> rates;            // strictly increasing, all > 0
    std::vector<TopologyKind> topologies; // grid kinds only
    std::size_t repetitions = 1;
};

inline void validate_sweep_spec(const SweepSpec& spec) {
    if (spec.rates.empty())
        throw std::invalid_argument("sweep requires at least one rate");
    for (std::size_t i = 0; i < spec.rates.size(); ++i) {
        if (!(spec.rates[i] > 0.0))
            throw std::invalid_argument("sweep rates must be > 0");
        if (i > 0 && !(spec.rates[i] > spec.rates[i - 1]))
            throw std::invalid_argument("sweep rates must be strictly increasing");
    }
    if (spec.topologies.empty())
        throw std::invalid_argument("sweep requires at least one topology");
    for (std::size_t i = 0; i < spec.topologies.size(); ++i) {
        if (spec.topologies[i] == TopologyKind::Custom)
            throw std::invalid_argument("sweep topologies must be grid kinds "
                                        "(mesh, diagonal_mesh)");
        for (std::size_t j = i + 1; j < spec.topologies.size(); ++j)
            if (spec.topologies[j] == spec.topologies[i])
                throw std::invalid_argument("duplicate topology in sweep");
    }
    if (spec.repetitions < 1)
        throw std::invalid_argument("sweep requires at least one repetition");
}

// `start:stop:step` or an explicit comma-separated list.
inline std::vector<double> parse_rates(const std::string& text) {
    auto parse_num = [&](const std::string& tok) {
        try {
            std::size_t used = 0;
            const double v = std::stod(tok, &used);
            if (used != tok.size())
                throw std::invalid_argument("trailing text");
            return v;
        } catch (const std::exception&) {
            throw std::invalid_argument("invalid rate '" + tok + "' in '" + text + "'");
        }
    };

    std::vector<double> rates;
    if (text.find(':') != std::string::npos) {
        std::istringstream in(text);
        std::string a, b, c;
        if (!std::getline(in, a, ':') || !std::getline(in, b, ':') ||
            !std::getline(in, c) || c.find(':') != std::string::npos)
            throw std::invalid_argument("rate range must be start:stop:step, got '" +
                                        text + "'");
        const double start = parse_num(a), stop = parse_num(b), step = parse_num(c);
        if (!(start > 0.0) || !(step > 0.0) || stop < start)
            throw std::invalid_argument("rate range requires 0 < start <= stop and step > 0");
        for (double r = start; r <= stop * (1.0 + 1e-12); r += step)
            rates.push_back(r);
    } else {
        std::istringstream in(text);
        std::string tok;
        while (std::getline(in, tok, ','))
            rates.push_back(parse_num(tok));
    }
    if (rates.empty())
        throw std::invalid_argument("empty rate list '" + text + "'");
    for (std::size_t i = 1; i < rates.size(); ++i)
        if (!(rates[i] > rates[i - 1]))
            throw std::invalid_argument("rates must be strictly increasing");
    if (!(rates.front() > 0.0))
        throw std::invalid_argument("rates must be > 0");
    return rates;
}

inline std::vector<TopologyKind> parse_topology_list(const std::string& text) {
    std::vector<TopologyKind> out;
    std::istringstream in(text);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        if (tok == "mesh") out.push_back(TopologyKind::Mesh2D);
        else if (tok == "diagonal_mesh") out.push_back(TopologyKind::DiagonalMesh2D);
        else throw std::invalid_argument("unknown topology '" + tok +
                                         "' (expected mesh or diagonal_mesh)");
    }
    if (out.empty())
        throw std::invalid_argument("empty topology list");
    return out;
}

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

} // namespace detail

// Seed for repetition `rep` at rate index `rate_index`: a fixed splitmix64
// mix, so sweep points get independent streams and parallel execution cannot
// collide. Deliberately independent of the topology, pairing the traffic
// realization across the topologies under comparison.
inline std::uint64_t derive_seed(std::uint64_t base, std::size_t rate_index,
                                 std::size_t rep) {
    std::uint64_t z = detail::splitmix64(base ^ (0x9E3779B97F4A7C15ull * (rate_index + 1)));
    return detail::splitmix64(z ^ (0xD1B54A32D192ED03ull * (rep + 1)));
}

// One sweep point: a single simulation summarized for the CSV report.
struct ReportRow {
    double rate = 0.0;
    TopologyKind topology = TopologyKind::Mesh2D;
    std::size_t rep = 0;
    double avg_delay = 0.0;
    std::uint64_t generated = 0;
    std::uint64_t delivered = 0;
    std::uint64_t dropped = 0;
    double throughput = 0.0;
};

// Runs every (topology, rate, repetition) combination. Rows come back sorted
// by (topology order, rate, repetition) regardless of how many worker threads
// executed them.
inline std::vector<ReportRow> run_sweep(const SimConfig& cfg, const SweepSpec& spec,
                                        unsigned jobs = 1) {
    validate_sweep_spec(spec);
    if (jobs < 1)
        throw std::invalid_argument("jobs must be >= 1");

    struct Task {
        std::size_t topo_index, rate_index, rep;
    };
    std::vector<Task> tasks;
    tasks.reserve(spec.topologies.size() * spec.rates.size() * spec.repetitions);
    for (std::size_t t = 0; t < spec.topologies.size(); ++t)
        for (std::size_t j = 0; j < spec.rates.size(); ++j)
            for (std::size_t k = 0; k < spec.repetitions; ++k)
                tasks.push_back({t, j, k});

    std::vector<Topology> topologies;
    std::vector<RoutingTable> tables;
    topologies.reserve(spec.topologies.size());
    tables.reserve(spec.topologies.size());
    for (TopologyKind kind : spec.topologies) {
        SimConfig point = cfg;
        point.topology_kind = kind;
        topologies.push_back(build_topology(point));
        tables.push_back(compute_routing(topologies.back()));
        validate_traffic_model(cfg.traffic, topologies.back());
    }

    std::vector<ReportRow> rows(tasks.size());
    const SimParams params = sim_params_of(cfg);

    auto run_task = [&](std::size_t index) {
        const Task& task = tasks[index];
        InjectionProcess process = injection_process_of(cfg);
        process.rate = spec.rates[task.rate_index];
        const std::uint64_t seed = derive_seed(cfg.seed, task.rate_index, task.rep);
        try {
            const SimResult result =
                run_simulation(topologies[task.topo_index], tables[task.topo_index],
                               cfg.traffic, process, params, seed);
            const Metrics m = compute_metrics(result.trace, cfg.duration, cfg.warmup);
            rows[index] = {process.rate, spec.topologies[task.topo_index], task.rep,
                           m.avg_delay,  m.generated,  m.delivered,
                           m.dropped,    m.throughput};
        } catch (const std::exception& e) {
            throw std::runtime_error(
                "sweep point (topology " + std::string(to_string(spec.topologies[task.topo_index])) +
                ", rate " + std::to_string(process.rate) + ", rep " +
                std::to_string(task.rep) + ") failed: " + e.what());
        }
    };

    if (jobs == 1 || tasks.size() <= 1) {
        for (std::size_t i = 0; i < tasks.size(); ++i)
            run_task(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::atomic<bool> failed{false};
        std::mutex error_mutex;
        std::string error;
        const unsigned workers =
            static_cast<unsigned>(std::min<std::size_t>(jobs, tasks.size()));
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                while (!failed.load()) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= tasks.size())
                        return;
                    try {
                        run_task(i);
                    } catch (const std::exception& e) {
                        std::lock_guard lock(error_mutex);
                        if (!failed.exchange(true))
                            error = e.what();
                        return;
                    }
                }
            });
        }
        for (std::thread& t : pool)
            t.join();
        if (failed.load())
            throw std::runtime_error(error);
    }
    return rows;
}

// Plot-ready CSV; real-valued fields use fixed 6-decimal notation.
inline void emit_report(std::ostream& out, std::span<const ReportRow> rows) {
    out << "rate,topology,rep,avg_delay,generated,delivered,dropped,throughput\n";
    for (const ReportRow& r : rows) {
        out << detail::format_time(r.rate) << "," << to_string(r.topology) << ","
            << r.rep << "," << detail::format_time(r.avg_delay) << "," << r.generated
            << "," << r.delivered << "," << r.dropped << ","
            << detail::format_time(r.throughput) << "\n";
        if (!out)
            throw std::runtime_error("failed writing report row");
    }
}

} // namespace nocsim

#endif // NOCSIM_SWEEP_HPP
