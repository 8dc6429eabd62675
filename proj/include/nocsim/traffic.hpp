#ifndef NOCSIM_TRAFFIC_HPP
#define NOCSIM_TRAFFIC_HPP

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>

#include "nocsim/topology.hpp"

namespace nocsim {

using Rng = std::mt19937_64;

enum class TrafficKind { LocalityRandom, FixedComplement, UniformRandom };

inline const char* to_string(TrafficKind kind) {
    switch (kind) {
        case TrafficKind::LocalityRandom: return "locality";
        case TrafficKind::FixedComplement: return "fixed";
        case TrafficKind::UniformRandom: return "uniform";
    }
    return "?";
}

// Destination-selection policy. LocalityRandom picks a random neighbor of the
// source with probability range1 and a random non-neighbor otherwise, so the
// same model adapts to whichever topology it runs on. FixedComplement pairs
// node i with node (N-1)-i. UniformRandom is the conventional baseline.
struct TrafficModel {
    TrafficKind kind = TrafficKind::UniformRandom;
    double range1 = 0.0; // LocalityRandom only

    static TrafficModel locality(double range1) {
        if (!(range1 >= 0.0 && range1 <= 1.0))
            throw std::invalid_argument("traffic.range1 must be within [0, 1]");
        return {TrafficKind::LocalityRandom, range1};
    }
    static TrafficModel fixed_complement() { return {TrafficKind::FixedComplement, 0.0}; }
    static TrafficModel uniform_random() { return {TrafficKind::UniformRandom, 0.0}; }
};

// Rejects model/topology combinations where some source's selection pool is
// empty, instead of silently redistributing probability.
inline void validate_traffic_model(const TrafficModel& model, const Topology& topology) {
    const std::size_t n = topology.node_count();
    switch (model.kind) {
        case TrafficKind::FixedComplement:
            return;
        case TrafficKind::UniformRandom:
            if (n < 2)
                throw std::invalid_argument("uniform traffic requires at least 2 nodes");
            return;
        case TrafficKind::LocalityRandom:
            if (!(model.range1 >= 0.0 && model.range1 <= 1.0))
                throw std::invalid_argument("traffic.range1 must be within [0, 1]");
            if (n < 2)
                throw std::invalid_argument("locality traffic requires at least 2 nodes");
            for (NodeId v = 0; v < n; ++v) {
                const std::size_t deg = topology.degree(v);
                if (model.range1 > 0.0 && deg == 0)
                    throw std::invalid_argument("node " + std::to_string(v) +
                                                " has no neighbors; locality traffic with range1 > 0 "
                                                "is unsatisfiable");
                if (model.range1 < 1.0 && deg == n - 1)
                    throw std::invalid_argument("node " + std::to_string(v) +
                                                " has no non-neighbors; locality traffic with "
                                                "range1 < 1 is unsatisfiable");
            }
            return;
    }
}

namespace detail {

inline std::size_t uniform_index(Rng& rng, std::size_t count) {
    return std::uniform_int_distribution<std::size_t>(0, count - 1)(rng);
}

// k-th node (ascending) that is neither the source nor one of its neighbors.
inline NodeId nth_non_neighbor(const Topology& topology, NodeId source, std::size_t k) {
    const auto& nb = topology.neighbors(source);
    std::size_t nb_at = 0;
    for (NodeId v = 0; v < topology.node_count(); ++v) {
        if (v == source)
            continue;
        if (nb_at < nb.size() && nb[nb_at] == v) {
            ++nb_at;
            continue;
        }
        if (k == 0)
            return v;
        --k;
    }
    throw std::logic_error("non-neighbor pool exhausted");
}

} // namespace detail

// Picks a destination for one packet from `source`. Never returns the source.
// FixedComplement returns nullopt at its fixed point (the middle node of an
// odd-sized network), which generates no traffic.
inline std::optional<NodeId> select_destination(const TrafficModel& model,
                                                const Topology& topology,
                                                NodeId source, Rng& rng) {
    const std::size_t n = topology.node_count();
    if (source >= n)
        throw std::invalid_argument("source node " + std::to_string(source) +
                                    " out of range");
    switch (model.kind) {
        case TrafficKind::FixedComplement: {
            const NodeId dest = static_cast<NodeId>(n - 1 - source);
            if (dest == source)
                return std::nullopt;
            return dest;
        }
        case TrafficKind::UniformRandom: {
            const std::size_t j = detail::uniform_index(rng, n - 1);
            return static_cast<NodeId>(j >= source ? j + 1 : j);
        }
        case TrafficKind::LocalityRandom: {
            const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
            const auto& nb = topology.neighbors(source);
            if (u < model.range1)
                return nb[detail::uniform_index(rng, nb.size())];
            const std::size_t pool = n - 1 - nb.size();
            return detail::nth_non_neighbor(topology, source,
                                            detail::uniform_index(rng, pool));
        }
    }
    throw std::logic_error("unhandled traffic kind");
}

enum class InjectionDiscipline { Deterministic, Poisson };

inline const char* to_string(InjectionDiscipline d) {
    return d == InjectionDiscipline::Deterministic ? "deterministic" : "poisson";
}

// Per-node packet injection process; every node injects at the same rate.
struct InjectionProcess {
    double rate = 1.0;        // packets per node per time-unit, > 0
    InjectionDiscipline discipline = InjectionDiscipline::Poisson;
    double packet_size = 1.0; // data-units, > 0
};

inline void validate_injection_process(const InjectionProcess& process) {
    if (!(process.rate > 0.0))
        throw std::invalid_argument("traffic.rate must be > 0");
    if (!(process.packet_size > 0.0))
        throw std::invalid_argument("packet.size must be > 0");
}

// Next injection instant, strictly after `now`. Deterministic spacing is
// exactly 1/rate; Poisson gaps are exponential with mean 1/rate.
inline double next_injection_time(const InjectionProcess& process, double now, Rng& rng) {
    if (!(process.rate > 0.0))
        throw std::invalid_argument("traffic.rate must be > 0");
    if (process.discipline == InjectionDiscipline::Deterministic)
        return now + 1.0 / process.rate;
    std::exponential_distribution<double> gap(process.rate);
    double g = gap(rng);
    while (!(g > 0.0))
        g = gap(rng);
    return now + g;
}

} // namespace nocsim

#endif // NOCSIM_TRAFFIC_HPP
