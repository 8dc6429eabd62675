#ifndef NOCSIM_ROUTING_HPP
#define NOCSIM_ROUTING_HPP

#include <cstdint>
#include <deque>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "nocsim/topology.hpp"

namespace nocsim {

// Static all-pairs minimal-hop routes. Among equal-cost next hops the lowest
// node id wins, so two tables computed from equal topologies are identical.
// On a plain mesh this tie-break produces X-then-Y routes.
class RoutingTable {
public:
    static constexpr std::uint32_t kUnreachable = std::numeric_limits<std::uint32_t>::max();

    explicit RoutingTable(std::size_t node_count)
        : n_(node_count),
          next_(node_count * node_count, 0),
          dist_(node_count * node_count, kUnreachable) {}

    std::size_t node_count() const { return n_; }

    std::uint32_t distance(NodeId from, NodeId to) const {
        check(from);
        check(to);
        return dist_[index(from, to)];
    }

    NodeId next_hop(NodeId current, NodeId destination) const {
        check(current);
        check(destination);
        if (current == destination)
            throw std::invalid_argument("next_hop: packet already at destination " +
                                        std::to_string(destination));
        return next_[index(current, destination)];
    }

    // Full node sequence from source to destination, length = distance + 1.
    std::vector<NodeId> path(NodeId source, NodeId destination) const {
        check(source);
        check(destination);
        std::vector<NodeId> out{source};
        NodeId at = source;
        while (at != destination) {
            at = next_hop(at, destination);
            out.push_back(at);
            if (out.size() > n_)
                throw std::logic_error("routing loop detected");
        }
        return out;
    }

    // Debug dump: one `route <src> <dst> <node...>` line per ordered pair.
    void dump_routes(std::ostream& out) const {
        for (NodeId s = 0; s < n_; ++s) {
            for (NodeId d = 0; d < n_; ++d) {
                if (s == d)
                    continue;
                out << "route " << s << " " << d;
                for (NodeId hop : path(s, d))
                    out << " " << hop;
                out << "\n";
            }
        }
    }

    void set(NodeId from, NodeId to, NodeId next, std::uint32_t dist) {
        next_[index(from, to)] = next;
        dist_[index(from, to)] = dist;
    }

    bool operator==(const RoutingTable& other) const {
        return n_ == other.n_ && next_ == other.next_ && dist_ == other.dist_;
    }

private:
    std::size_t index(NodeId from, NodeId to) const { return from * n_ + to; }

    void check(NodeId node) const {
        if (node >= n_)
            throw std::invalid_argument("node " + std::to_string(node) +
                                        " out of range for " + std::to_string(n_) +
                                        " nodes");
    }

    std::size_t n_;
    std::vector<NodeId> next_;
    std::vector<std::uint32_t> dist_;
};

// Breadth-first search per destination over the (unit-cost) link graph.
// Requires a connected topology; the error names an unreachable pair.
inline RoutingTable compute_routing(const Topology& topology) {
    const std::size_t n = topology.node_count();
    RoutingTable table(n);
    std::vector<std::uint32_t> dist(n);

    for (NodeId dest = 0; dest < n; ++dest) {
        std::fill(dist.begin(), dist.end(), RoutingTable::kUnreachable);
        dist[dest] = 0;
        std::deque<NodeId> queue{dest};
        while (!queue.empty()) {
            const NodeId u = queue.front();
            queue.pop_front();
            for (NodeId v : topology.neighbors(u)) {
                if (dist[v] == RoutingTable::kUnreachable) {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        for (NodeId u = 0; u < n; ++u) {
            if (dist[u] == RoutingTable::kUnreachable)
                throw std::invalid_argument("topology is disconnected: no path between nodes " +
                                            std::to_string(u) + " and " + std::to_string(dest));
            if (u == dest) {
                table.set(u, dest, u, 0);
                continue;
            }
            // Neighbors are sorted ascending, so the first one on a shortest
            // path is the lowest-id tie-break.
            for (NodeId w : topology.neighbors(u)) {
                if (dist[w] + 1 == dist[u]) {
                    table.set(u, dest, w, dist[u]);
                    break;
                }
            }
        }
    }
    return table;
}

} // namespace nocsim

#endif // NOCSIM_ROUTING_HPP
