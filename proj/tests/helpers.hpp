#ifndef NOCSIM_TESTS_HELPERS_HPP
#define NOCSIM_TESTS_HELPERS_HPP

#include <cstdint>
#include <map>
#include <queue>
#include <random>
#include <set>
#include <span>
#include <vector>

#include "nocsim/topology.hpp"
#include "nocsim/trace.hpp"

namespace testutil {

// Plain breadth-first search, kept independent of compute_routing so it can
// act as its oracle.
inline std::vector<std::uint32_t> bfs_distances(const nocsim::Topology& topo,
                                                nocsim::NodeId source) {
    const auto unreached = std::numeric_limits<std::uint32_t>::max();
    std::vector<std::uint32_t> dist(topo.node_count(), unreached);
    std::queue<nocsim::NodeId> frontier;
    dist[source] = 0;
    frontier.push(source);
    while (!frontier.empty()) {
        const nocsim::NodeId u = frontier.front();
        frontier.pop();
        for (nocsim::NodeId v : topo.neighbors(u)) {
            if (dist[v] == unreached) {
                dist[v] = dist[u] + 1;
                frontier.push(v);
            }
        }
    }
    return dist;
}

// Connected random graph: a random spanning tree plus extra random edges.
inline nocsim::Topology random_connected_topology(std::mt19937_64& rng,
                                                  std::size_t max_nodes,
                                                  double bandwidth = 1.0,
                                                  double delay = 1.0) {
    const std::size_t n =
        std::uniform_int_distribution<std::size_t>(2, max_nodes)(rng);
    std::set<std::pair<nocsim::NodeId, nocsim::NodeId>> pairs;
    std::vector<nocsim::LinkSpec> links;
    auto add = [&](nocsim::NodeId a, nocsim::NodeId b) {
        if (a > b) std::swap(a, b);
        if (a == b || !pairs.emplace(a, b).second)
            return;
        links.push_back({a, b, bandwidth, delay});
    };
    for (nocsim::NodeId v = 1; v < n; ++v)
        add(static_cast<nocsim::NodeId>(
                std::uniform_int_distribution<std::size_t>(0, v - 1)(rng)),
            v);
    const std::size_t extra = std::uniform_int_distribution<std::size_t>(0, n)(rng);
    for (std::size_t i = 0; i < extra; ++i)
        add(static_cast<nocsim::NodeId>(
                std::uniform_int_distribution<std::size_t>(0, n - 1)(rng)),
            static_cast<nocsim::NodeId>(
                std::uniform_int_distribution<std::size_t>(0, n - 1)(rng)));
    return nocsim::build_custom(n, std::move(links));
}

// Brute-force recomputation of the average delay: pair every GEN with its RCV
// by packet id and sum in ascending id order. Written without reference to
// the metrics implementation.
inline double brute_force_average_delay(std::span<const nocsim::TraceRecord> trace,
                                        double warmup = 0.0) {
    std::map<nocsim::PacketId, double> gen;
    std::map<nocsim::PacketId, double> rcv;
    for (const nocsim::TraceRecord& r : trace) {
        if (r.event == nocsim::TraceEvent::GEN)
            gen[r.packet] = r.time;
        else if (r.event == nocsim::TraceEvent::RCV)
            rcv[r.packet] = r.time;
    }
    double sum = 0.0;
    std::uint64_t count = 0;
    for (const auto& [id, t_rcv] : rcv) {
        auto it = gen.find(id);
        if (it == gen.end() || it->second < warmup)
            continue;
        sum += t_rcv - it->second;
        ++count;
    }
    return sum / static_cast<double>(count);
}

} // namespace testutil

#endif // NOCSIM_TESTS_HELPERS_HPP
