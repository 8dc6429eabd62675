#ifndef NOCSIM_TOPOLOGY_HPP
#define NOCSIM_TOPOLOGY_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace nocsim {

using NodeId = std::uint32_t;

namespace detail {

// Times are printed with fixed 6-decimal precision everywhere.
inline std::string format_time(double t) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", t);
    return buf;
}

// Sizes/bandwidths print bare when integral ("1", not "1.000000").
inline std::string format_quantity(double v) {
    if (v == std::floor(v) && std::fabs(v) < 1e15) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%lld", static_cast<long long>(v));
        return buf;
    }
    return format_time(v);
}

inline std::uint64_t pair_key(NodeId a, NodeId b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | b;
}

} // namespace detail

// Undirected link with its physical parameters.
struct LinkSpec {
    NodeId endpoint_a = 0;
    NodeId endpoint_b = 0;
    double bandwidth = 1.0;         // data-units per time-unit, > 0
    double propagation_delay = 0.0; // time-units, >= 0
};

enum class TopologyKind { Mesh2D, DiagonalMesh2D, Custom };

inline const char* to_string(TopologyKind kind) {
    switch (kind) {
        case TopologyKind::Mesh2D: return "mesh";
        case TopologyKind::DiagonalMesh2D: return "diagonal_mesh";
        case TopologyKind::Custom: return "custom";
    }
    return "?";
}

// Immutable undirected node/link graph. Grid topologies number nodes
// row-major: id = row * width + col. Neighbor lists are kept sorted
// ascending so every query is deterministic.
class Topology {
public:
    Topology(TopologyKind kind, std::size_t node_count, std::size_t width,
             std::size_t height, std::vector<LinkSpec> links)
        : kind_(kind), width_(width), height_(height), links_(std::move(links)) {
        if (node_count == 0)
            throw std::invalid_argument("topology must have at least one node");
        if (node_count > static_cast<std::size_t>(UINT32_MAX))
            throw std::invalid_argument("topology too large");
        if (kind != TopologyKind::Custom && width * height != node_count)
            throw std::invalid_argument("grid topology requires node_count = width * height");

        adjacency_.resize(node_count);
        for (std::size_t i = 0; i < links_.size(); ++i) {
            const LinkSpec& l = links_[i];
            const std::string where =
                "link " + std::to_string(i) + " (" + std::to_string(l.endpoint_a) +
                "," + std::to_string(l.endpoint_b) + ")";
            if (l.endpoint_a >= node_count || l.endpoint_b >= node_count)
                throw std::invalid_argument(where + ": endpoint out of range for " +
                                            std::to_string(node_count) + " nodes");
            if (l.endpoint_a == l.endpoint_b)
                throw std::invalid_argument(where + ": self-loop");
            if (!(l.bandwidth > 0.0))
                throw std::invalid_argument(where + ": bandwidth must be > 0");
            if (!(l.propagation_delay >= 0.0))
                throw std::invalid_argument(where + ": propagation delay must be >= 0");
            auto [it, inserted] =
                link_index_.emplace(detail::pair_key(l.endpoint_a, l.endpoint_b),
                                    static_cast<std::uint32_t>(i));
            if (!inserted)
                throw std::invalid_argument(where + ": duplicate of link " +
                                            std::to_string(it->second));
            adjacency_[l.endpoint_a].push_back(l.endpoint_b);
            adjacency_[l.endpoint_b].push_back(l.endpoint_a);
        }
        for (auto& nb : adjacency_)
            std::sort(nb.begin(), nb.end());
    }

    std::size_t node_count() const { return adjacency_.size(); }
    TopologyKind kind() const { return kind_; }
    std::size_t width() const { return width_; }
    std::size_t height() const { return height_; }
    const std::vector<LinkSpec>& links() const { return links_; }

    // Sorted ascending, duplicate-free.
    const std::vector<NodeId>& neighbors(NodeId node) const {
        check_node(node);
        return adjacency_[node];
    }

    std::size_t degree(NodeId node) const { return neighbors(node).size(); }

    bool adjacent(NodeId u, NodeId v) const {
        check_node(u);
        check_node(v);
        return link_index_.count(detail::pair_key(u, v)) != 0;
    }

    const LinkSpec& link_between(NodeId u, NodeId v) const {
        check_node(u);
        check_node(v);
        auto it = link_index_.find(detail::pair_key(u, v));
        if (it == link_index_.end())
            throw std::invalid_argument("no link between nodes " + std::to_string(u) +
                                        " and " + std::to_string(v));
        return links_[it->second];
    }

    // Edge-list text format, loadable by load_topology().
    void write_edge_list(std::ostream& out) const {
        out << "nodes " << node_count() << "\n";
        for (const LinkSpec& l : links_)
            out << "link " << l.endpoint_a << " " << l.endpoint_b << " "
                << detail::format_quantity(l.bandwidth) << " "
                << detail::format_quantity(l.propagation_delay) << "\n";
    }

private:
    void check_node(NodeId node) const {
        if (node >= adjacency_.size())
            throw std::invalid_argument("node " + std::to_string(node) +
                                        " out of range for " +
                                        std::to_string(adjacency_.size()) + " nodes");
    }

    TopologyKind kind_;
    std::size_t width_ = 0;
    std::size_t height_ = 0;
    std::vector<LinkSpec> links_;
    std::vector<std::vector<NodeId>> adjacency_;
    std::unordered_map<std::uint64_t, std::uint32_t> link_index_;
};

// Grid with links between horizontally and vertically adjacent nodes.
inline Topology build_mesh2d(std::size_t width, std::size_t height,
                             double bandwidth, double propagation_delay) {
    if (width < 1 || height < 1)
        throw std::invalid_argument("mesh dimensions must be at least 1x1");
    std::vector<LinkSpec> links;
    links.reserve(height * (width - 1) + width * (height - 1));
    for (std::size_t row = 0; row < height; ++row) {
        for (std::size_t col = 0; col < width; ++col) {
            const NodeId id = static_cast<NodeId>(row * width + col);
            if (col + 1 < width)
                links.push_back({id, id + 1, bandwidth, propagation_delay});
            if (row + 1 < height)
                links.push_back({id, static_cast<NodeId>(id + width), bandwidth,
                                 propagation_delay});
        }
    }
    return Topology(TopologyKind::Mesh2D, width * height, width, height,
                    std::move(links));
}

// Mesh plus both diagonals of every unit cell (king's-graph connectivity).
inline Topology build_diagonal_mesh2d(std::size_t width, std::size_t height,
                                      double bandwidth, double propagation_delay) {
    if (width < 1 || height < 1)
        throw std::invalid_argument("mesh dimensions must be at least 1x1");
    std::vector<LinkSpec> links;
    links.reserve(height * (width - 1) + width * (height - 1) +
                  2 * (width - 1) * (height - 1));
    for (std::size_t row = 0; row < height; ++row) {
        for (std::size_t col = 0; col < width; ++col) {
            const NodeId id = static_cast<NodeId>(row * width + col);
            if (col + 1 < width)
                links.push_back({id, id + 1, bandwidth, propagation_delay});
            if (row + 1 < height)
                links.push_back({id, static_cast<NodeId>(id + width), bandwidth,
                                 propagation_delay});
            if (row + 1 < height && col + 1 < width)
                links.push_back({id, static_cast<NodeId>(id + width + 1), bandwidth,
                                 propagation_delay});
            if (row + 1 < height && col >= 1)
                links.push_back({id, static_cast<NodeId>(id + width - 1), bandwidth,
                                 propagation_delay});
        }
    }
    return Topology(TopologyKind::DiagonalMesh2D, width * height, width, height,
                    std::move(links));
}

inline Topology build_custom(std::size_t node_count, std::vector<LinkSpec> links) {
    return Topology(TopologyKind::Custom, node_count, 0, 0, std::move(links));
}

// Plain-text edge-list loader. Format:
//   nodes <count>
//   link <a> <b> <bandwidth> <delay>
// '#' begins a comment; blank lines are ignored.
inline Topology parse_topology(std::istream& in, const std::string& name = "topology") {
    std::string line;
    std::size_t line_no = 0;
    bool have_nodes = false;
    std::size_t node_count = 0;
    std::vector<LinkSpec> links;

    auto fail = [&](const std::string& what) -> std::runtime_error {
        return std::runtime_error(name + ", line " + std::to_string(line_no) + ": " + what);
    };

    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        std::istringstream ls(line);
        std::string word;
        if (!(ls >> word))
            continue;
        if (word == "nodes") {
            if (have_nodes)
                throw fail("duplicate 'nodes' line");
            long long count = 0;
            if (!(ls >> count) || count < 1)
                throw fail("'nodes' requires a positive count");
            node_count = static_cast<std::size_t>(count);
            have_nodes = true;
        } else if (word == "link") {
            if (!have_nodes)
                throw fail("'link' before 'nodes'");
            long long a = -1, b = -1;
            double bw = 0.0, delay = 0.0;
            if (!(ls >> a >> b >> bw >> delay))
                throw fail("'link' requires: <a> <b> <bandwidth> <delay>");
            if (a < 0 || b < 0 || static_cast<std::size_t>(a) >= node_count ||
                static_cast<std::size_t>(b) >= node_count)
                throw fail("link endpoint out of range");
            links.push_back({static_cast<NodeId>(a), static_cast<NodeId>(b), bw, delay});
        } else {
            throw fail("unknown directive '" + word + "'");
        }
        std::string extra;
        if (ls >> extra)
            throw fail("trailing text '" + extra + "'");
    }
    if (!have_nodes)
        throw std::runtime_error(name + ": missing 'nodes' line");
    try {
        return build_custom(node_count, std::move(links));
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error(name + ": " + e.what());
    }
}

inline Topology load_topology(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open topology file: " + path);
    return parse_topology(in, path);
}

} // namespace nocsim

#endif // NOCSIM_TOPOLOGY_HPP
