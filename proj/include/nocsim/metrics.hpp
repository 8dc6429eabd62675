#ifndef NOCSIM_METRICS_HPP
#define NOCSIM_METRICS_HPP

#include <cstdint>
#include <map>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "nocsim/trace.hpp"

namespace nocsim {

struct DelaySample {
    PacketId packet = 0;
    double delay = 0.0;
};

// End-to-end delays of delivered packets, one per GEN/RCV pair, restricted to
// packets generated at or after `warmup`. Sorted by packet id so downstream
// sums have a fixed left-to-right order.
inline std::vector<DelaySample> delivered_delays(std::span<const TraceRecord> trace,
                                                 double warmup = 0.0) {
    std::unordered_map<PacketId, double> gen_time;
    std::map<PacketId, double> delays;
    for (const TraceRecord& r : trace) {
        if (r.event == TraceEvent::GEN)
            gen_time.emplace(r.packet, r.time);
        else if (r.event == TraceEvent::RCV) {
            auto it = gen_time.find(r.packet);
            if (it != gen_time.end() && it->second >= warmup)
                delays[r.packet] = r.time - it->second;
        }
    }
    std::vector<DelaySample> out;
    out.reserve(delays.size());
    for (const auto& [id, delay] : delays)
        out.push_back({id, delay});
    return out;
}

// Average packet delay over delivered packets. Undelivered packets have no
// measurable delay and are reported separately, never folded into the mean.
inline double average_packet_delay(std::span<const TraceRecord> trace, double warmup = 0.0) {
    const std::vector<DelaySample> samples = delivered_delays(trace, warmup);
    if (samples.empty())
        throw std::runtime_error("no delivered packets after warmup; average delay undefined");
    double sum = 0.0;
    for (const DelaySample& s : samples)
        sum += s.delay;
    return sum / static_cast<double>(samples.size());
}

// Delivered packets (generated at or after warmup) per time-unit.
inline double throughput(std::span<const TraceRecord> trace, double duration,
                         double warmup = 0.0) {
    if (!(duration > warmup))
        throw std::invalid_argument("throughput window requires duration > warmup");
    return static_cast<double>(delivered_delays(trace, warmup).size()) / (duration - warmup);
}

struct Metrics {
    double avg_delay = 0.0;
    std::uint64_t generated = 0;
    std::uint64_t delivered = 0;
    std::uint64_t dropped = 0;
    double throughput = 0.0;
    double max_delay = 0.0;
};

// Summary statistics over the attribution window: a packet counts if it was
// generated at or after warmup (the trace ends at the run's duration, so every
// RCV in it was delivered in time).
inline Metrics compute_metrics(std::span<const TraceRecord> trace, double duration,
                               double warmup = 0.0) {
    if (!(duration > warmup))
        throw std::invalid_argument("metrics window requires duration > warmup");
    std::unordered_map<PacketId, double> gen_time;
    Metrics m;
    for (const TraceRecord& r : trace) {
        switch (r.event) {
            case TraceEvent::GEN:
                gen_time.emplace(r.packet, r.time);
                if (r.time >= warmup)
                    ++m.generated;
                break;
            case TraceEvent::DRP: {
                auto it = gen_time.find(r.packet);
                if (it != gen_time.end() && it->second >= warmup)
                    ++m.dropped;
                break;
            }
            default:
                break;
        }
    }
    const std::vector<DelaySample> samples = delivered_delays(trace, warmup);
    if (samples.empty())
        throw std::runtime_error("no delivered packets after warmup; average delay undefined");
    double sum = 0.0;
    double max = 0.0;
    for (const DelaySample& s : samples) {
        sum += s.delay;
        if (s.delay > max)
            max = s.delay;
    }
    m.delivered = samples.size();
    m.avg_delay = sum / static_cast<double>(samples.size());
    m.max_delay = max;
    m.throughput = static_cast<double>(samples.size()) / (duration - warmup);
    return m;
}

inline void write_metrics_summary(std::ostream& out, const Metrics& m) {
    out << "avg_delay = " << detail::format_time(m.avg_delay) << "\n"
        << "generated = " << m.generated << "\n"
        << "delivered = " << m.delivered << "\n"
        << "dropped = " << m.dropped << "\n"
        << "throughput = " << detail::format_time(m.throughput) << "\n"
        << "max_delay = " << detail::format_time(m.max_delay) << "\n";
}

struct QueueStats {
    double mean = 0.0;
    std::uint64_t max = 0;
    std::uint64_t samples = 0;
};

// Time-unweighted mean and max occupancy per (node, toward) port.
inline std::map<std::pair<NodeId, NodeId>, QueueStats>
queue_statistics(std::span<const QueueSample> samples) {
    std::map<std::pair<NodeId, NodeId>, QueueStats> stats;
    std::map<std::pair<NodeId, NodeId>, std::uint64_t> totals;
    for (const QueueSample& s : samples) {
        const auto key = std::make_pair(s.node, s.toward);
        QueueStats& q = stats[key];
        totals[key] += s.length;
        if (s.length > q.max)
            q.max = s.length;
        ++q.samples;
    }
    for (auto& [key, q] : stats)
        q.mean = static_cast<double>(totals[key]) / static_cast<double>(q.samples);
    return stats;
}

} // namespace nocsim

#endif // NOCSIM_METRICS_HPP
