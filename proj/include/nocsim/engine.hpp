#ifndef NOCSIM_ENGINE_HPP
#define NOCSIM_ENGINE_HPP

#include <algorithm>
#include <cstdint>
#include <deque>
#include <optional>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "nocsim/routing.hpp"
#include "nocsim/topology.hpp"
#include "nocsim/trace.hpp"
#include "nocsim/traffic.hpp"

namespace nocsim {

struct Packet {
    PacketId id = 0;
    NodeId source = 0;
    NodeId destination = 0;
    double size = 0.0;
    double created_at = 0.0;
    std::optional<double> delivered_at;
};

// Serialization plus propagation for one link transfer.
inline double transmit_time(double packet_size, double bandwidth, double propagation_delay) {
    if (!(bandwidth > 0.0))
        throw std::invalid_argument("bandwidth must be > 0");
    return packet_size / bandwidth + propagation_delay;
}

enum class EnqueueResult { Accepted, Dropped };

// One store-and-forward output queue: FIFO, drop-tail. The packet currently
// being transmitted occupies the port, not the queue; `capacity` 0 means
// unbounded.
struct OutputPort {
    NodeId owner = 0;
    NodeId toward = 0;
    double bandwidth = 1.0;
    double propagation_delay = 0.0;
    std::deque<PacketId> queue;
    bool busy = false;
    double busy_until = 0.0;

    EnqueueResult enqueue(PacketId packet, std::size_t capacity) {
        if (capacity != 0 && queue.size() >= capacity)
            return EnqueueResult::Dropped;
        queue.push_back(packet);
        return EnqueueResult::Accepted;
    }
};

struct SimParams {
    double duration = 10000.0;
    double warmup = 0.0;            // carried through to metrics; the trace is complete
    double switch_delay = 0.0;      // per-hop processing latency
    std::size_t queue_capacity = 1000; // packets per output port, 0 = unbounded
    double monitor_interval = 100.0;   // queue sampling period, 0 disables
    double injection_latency = 0.0;    // resource-to-router handoff latency
};

inline void validate_sim_params(const SimParams& p) {
    if (!(p.duration > 0.0))
        throw std::invalid_argument("sim.duration must be > 0");
    if (!(p.warmup >= 0.0) || p.warmup >= p.duration)
        throw std::invalid_argument("sim.warmup must be within [0, duration)");
    if (!(p.switch_delay >= 0.0))
        throw std::invalid_argument("switch.delay must be >= 0");
    if (!(p.monitor_interval >= 0.0))
        throw std::invalid_argument("monitor.interval must be >= 0");
    if (!(p.injection_latency >= 0.0))
        throw std::invalid_argument("injection latency must be >= 0");
}

struct SimResult {
    std::vector<TraceRecord> trace;
    std::uint64_t injected = 0;
    std::uint64_t delivered = 0;
    std::uint64_t dropped = 0;
    std::uint64_t in_flight = 0; // counted from queues and pending arrivals
    std::vector<QueueSample> queue_samples;
    std::vector<Packet> packets;
};

// A packet injected at a known time, for open-loop and single-packet runs.
struct PacketInjection {
    double time = 0.0;
    NodeId source = 0;
    NodeId destination = 0;
    double size = 1.0;
};

namespace detail {

// Single-run event loop. Strictly single-threaded; all randomness comes from
// one seeded stream, and events are processed in (time, sequence) order, so a
// run is bit-for-bit reproducible.
class Simulator {
public:
    Simulator(const Topology& topology, const RoutingTable& table, const SimParams& params)
        : topo_(topology), table_(table), params_(params) {
        validate_sim_params(params);
        if (table.node_count() != topology.node_count())
            throw std::invalid_argument(
                "routing table built for " + std::to_string(table.node_count()) +
                " nodes but topology has " + std::to_string(topology.node_count()));
        const std::size_t n = topo_.node_count();
        port_offset_.resize(n + 1, 0);
        for (NodeId u = 0; u < n; ++u)
            port_offset_[u + 1] = port_offset_[u] + topo_.degree(u);
        ports_.reserve(port_offset_[n]);
        for (NodeId u = 0; u < n; ++u) {
            for (NodeId v : topo_.neighbors(u)) {
                const LinkSpec& link = topo_.link_between(u, v);
                OutputPort port;
                port.owner = u;
                port.toward = v;
                port.bandwidth = link.bandwidth;
                port.propagation_delay = link.propagation_delay;
                ports_.push_back(std::move(port));
            }
        }
    }

    SimResult run_traffic(const TrafficModel& model, const InjectionProcess& process,
                          std::uint64_t seed) {
        validate_traffic_model(model, topo_);
        validate_injection_process(process);
        model_ = &model;
        process_ = &process;
        rng_.seed(seed);
        for (NodeId node = 0; node < topo_.node_count(); ++node)
            schedule({next_injection_time(process, 0.0, rng_), 0, EventKind::Inject, node, 0, 0});
        return run();
    }

    SimResult run_schedule(std::span<const PacketInjection> injections) {
        scripted_ = injections;
        for (std::size_t i = 0; i < injections.size(); ++i) {
            const PacketInjection& inj = injections[i];
            if (inj.source >= topo_.node_count() || inj.destination >= topo_.node_count())
                throw std::invalid_argument("injection endpoint out of range");
            if (inj.source == inj.destination)
                throw std::invalid_argument("injection source equals destination");
            if (!(inj.size > 0.0))
                throw std::invalid_argument("injection size must be > 0");
            if (!(inj.time >= 0.0))
                throw std::invalid_argument("injection time must be >= 0");
            schedule({inj.time, 0, EventKind::Inject, inj.source, i, 0});
        }
        return run();
    }

private:
    enum class EventKind { Inject, LinkArrival, PortFree, MonitorSample };

    struct Event {
        double time;
        std::uint64_t sequence;
        EventKind kind;
        NodeId node;          // Inject, LinkArrival
        std::uint64_t packet; // LinkArrival; scripted-injection index
        std::uint32_t port;   // PortFree
    };

    struct EventAfter {
        bool operator()(const Event& a, const Event& b) const {
            if (a.time != b.time)
                return a.time > b.time;
            return a.sequence > b.sequence;
        }
    };

    SimResult run() {
        if (params_.monitor_interval > 0.0)
            schedule({params_.monitor_interval, 0, EventKind::MonitorSample, 0, 0, 0});

        while (!events_.empty() && events_.top().time <= params_.duration) {
            const Event ev = events_.top();
            events_.pop();
            switch (ev.kind) {
                case EventKind::Inject: handle_inject(ev); break;
                case EventKind::LinkArrival:
                    --pending_arrivals_;
                    arrive(ev.packet, ev.node, ev.time);
                    break;
                case EventKind::PortFree: handle_port_free(ev); break;
                case EventKind::MonitorSample: handle_monitor(ev.time); break;
            }
        }

        std::uint64_t waiting = 0;
        for (const OutputPort& port : ports_)
            waiting += port.queue.size();
        result_.in_flight = waiting + pending_arrivals_;
        if (result_.injected != result_.delivered + result_.dropped + result_.in_flight)
            throw std::logic_error("packet conservation violated");
        result_.packets = std::move(packets_);
        return std::move(result_);
    }

    void handle_inject(const Event& ev) {
        if (scripted_.empty()) {
            // Fixed draw order per injection: destination first, then the next
            // injection gap, so traces are reproducible.
            const std::optional<NodeId> dest =
                select_destination(*model_, topo_, ev.node, rng_);
            const double next = next_injection_time(*process_, ev.time, rng_);
            if (dest)
                inject_packet(ev.node, *dest, process_->packet_size, ev.time);
            schedule({next, 0, EventKind::Inject, ev.node, 0, 0});
        } else {
            const PacketInjection& inj = scripted_[ev.packet];
            inject_packet(inj.source, inj.destination, inj.size, ev.time);
        }
    }

    void inject_packet(NodeId source, NodeId destination, double size, double now) {
        const PacketId id = packets_.size();
        packets_.push_back({id, source, destination, size, now, std::nullopt});
        ++result_.injected;
        emit(TraceEvent::GEN, now, source, id);
        if (params_.injection_latency > 0.0) {
            schedule({now + params_.injection_latency, 0, EventKind::LinkArrival,
                      source, id, 0});
            ++pending_arrivals_;
        } else {
            arrive(id, source, now);
        }
    }

    // A packet is fully received at `node` (store-and-forward): deliver it or
    // queue it on the output port chosen by the routing table.
    void arrive(PacketId id, NodeId node, double now) {
        Packet& pkt = packets_[id];
        if (node == pkt.destination) {
            pkt.delivered_at = now;
            ++result_.delivered;
            emit(TraceEvent::RCV, now, node, id);
            return;
        }
        const NodeId next = table_.next_hop(node, pkt.destination);
        const std::uint32_t pi = port_index(node, next);
        OutputPort& port = ports_[pi];
        if (port.enqueue(id, params_.queue_capacity) == EnqueueResult::Dropped) {
            ++result_.dropped;
            emit(TraceEvent::DRP, now, node, id);
            return;
        }
        emit(TraceEvent::ENQ, now, node, id);
        if (!port.busy)
            start_service(pi, now);
    }

    // Dequeue the head packet and occupy the port for switch_delay plus
    // serialization; the packet lands at the next node one propagation later.
    void start_service(std::uint32_t pi, double now) {
        OutputPort& port = ports_[pi];
        const PacketId id = port.queue.front();
        port.queue.pop_front();
        emit(TraceEvent::DEQ, now, port.owner, id);
        const double finish =
            now + params_.switch_delay + packets_[id].size / port.bandwidth;
        port.busy = true;
        port.busy_until = finish;
        schedule({finish, 0, EventKind::PortFree, 0, 0, pi});
        schedule({finish + port.propagation_delay, 0, EventKind::LinkArrival,
                  port.toward, id, 0});
        ++pending_arrivals_;
    }

    void handle_port_free(const Event& ev) {
        OutputPort& port = ports_[ev.port];
        port.busy = false;
        if (!port.queue.empty())
            start_service(ev.port, ev.time);
    }

    void handle_monitor(double now) {
        for (const OutputPort& port : ports_)
            result_.queue_samples.push_back({now, port.owner, port.toward, port.queue.size()});
        schedule({now + params_.monitor_interval, 0, EventKind::MonitorSample, 0, 0, 0});
    }

    std::uint32_t port_index(NodeId u, NodeId v) const {
        const auto& nb = topo_.neighbors(u);
        const auto it = std::lower_bound(nb.begin(), nb.end(), v);
        if (it == nb.end() || *it != v)
            throw std::invalid_argument(
                "routing table inconsistent with topology: node " + std::to_string(u) +
                " has no link toward " + std::to_string(v));
        return static_cast<std::uint32_t>(port_offset_[u] + (it - nb.begin()));
    }

    void schedule(Event ev) {
        ev.sequence = next_sequence_++;
        events_.push(ev);
    }

    void emit(TraceEvent event, double time, NodeId node, PacketId id) {
        if (time < last_emit_time_)
            throw std::logic_error("trace emitted out of order");
        last_emit_time_ = time;
        const Packet& pkt = packets_[id];
        result_.trace.push_back({event, time, node, id, pkt.source, pkt.destination, pkt.size});
    }

    const Topology& topo_;
    const RoutingTable& table_;
    SimParams params_;

    const TrafficModel* model_ = nullptr;
    const InjectionProcess* process_ = nullptr;
    std::span<const PacketInjection> scripted_;
    Rng rng_;

    std::vector<OutputPort> ports_;
    std::vector<std::size_t> port_offset_;
    std::vector<Packet> packets_;
    std::priority_queue<Event, std::vector<Event>, EventAfter> events_;
    std::uint64_t next_sequence_ = 0;
    std::uint64_t pending_arrivals_ = 0;
    double last_emit_time_ = 0.0;
    SimResult result_;
};

} // namespace detail

// Closed-loop run: every node injects per the process, destinations come from
// the traffic model. Deterministic given (inputs, seed).
inline SimResult run_simulation(const Topology& topology, const RoutingTable& table,
                                const TrafficModel& model, const InjectionProcess& process,
                                const SimParams& params, std::uint64_t seed) {
    detail::Simulator sim(topology, table, params);
    return sim.run_traffic(model, process, seed);
}

// Open-loop run driven by an explicit injection schedule (no randomness).
inline SimResult run_injection_schedule(const Topology& topology, const RoutingTable& table,
                                        std::span<const PacketInjection> injections,
                                        const SimParams& params) {
    detail::Simulator sim(topology, table, params);
    return sim.run_schedule(injections);
}

} // namespace nocsim

#endif // NOCSIM_ENGINE_HPP
