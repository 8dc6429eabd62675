#ifndef NOCSIM_TRACE_HPP
#define NOCSIM_TRACE_HPP

#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "nocsim/topology.hpp"

namespace nocsim {

using PacketId = std::uint64_t;

enum class TraceEvent { GEN, ENQ, DEQ, RCV, DRP };

inline const char* to_string(TraceEvent e) {
    switch (e) {
        case TraceEvent::GEN: return "GEN";
        case TraceEvent::ENQ: return "ENQ";
        case TraceEvent::DEQ: return "DEQ";
        case TraceEvent::RCV: return "RCV";
        case TraceEvent::DRP: return "DRP";
    }
    return "?";
}

// One event-log row: `<EVT> <time> <node> <pkt_id> <src> <dst> <size>`.
struct TraceRecord {
    TraceEvent event = TraceEvent::GEN;
    double time = 0.0;
    NodeId node = 0;
    PacketId packet = 0;
    NodeId src = 0;
    NodeId dst = 0;
    double size = 0.0;

    bool operator==(const TraceRecord&) const = default;
};

// Instantaneous output-queue occupancy, written as
// `Q <time> <node> <toward> <length>`.
struct QueueSample {
    double time = 0.0;
    NodeId node = 0;
    NodeId toward = 0;
    std::uint64_t length = 0;

    bool operator==(const QueueSample&) const = default;
};

inline void write_trace_record(std::ostream& out, const TraceRecord& r) {
    out << to_string(r.event) << " " << detail::format_time(r.time) << " " << r.node
        << " " << r.packet << " " << r.src << " " << r.dst << " "
        << detail::format_quantity(r.size) << "\n";
}

inline void write_trace(std::ostream& out, std::span<const TraceRecord> trace) {
    for (const TraceRecord& r : trace)
        write_trace_record(out, r);
}

inline void write_queue_samples(std::ostream& out, std::span<const QueueSample> samples) {
    for (const QueueSample& s : samples)
        out << "Q " << detail::format_time(s.time) << " " << s.node << " " << s.toward
            << " " << s.length << "\n";
}

// Strict parser for the engine's trace format. Rejects malformed lines with
// their line number and enforces the GEN-before-RCV structure.
inline std::vector<TraceRecord> parse_trace(std::istream& in) {
    std::vector<TraceRecord> out;
    std::unordered_set<PacketId> generated;
    std::unordered_set<PacketId> received;
    std::string line;
    std::size_t line_no = 0;

    auto fail = [&](const std::string& what) -> std::runtime_error {
        return std::runtime_error("trace line " + std::to_string(line_no) + ": " + what);
    };

    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string evt;
        TraceRecord r;
        long long node = -1, src = -1, dst = -1;
        if (!(ls >> evt >> r.time >> node >> r.packet >> src >> dst >> r.size))
            throw fail("malformed record");
        std::string extra;
        if (ls >> extra)
            throw fail("trailing text '" + extra + "'");
        if (node < 0 || src < 0 || dst < 0)
            throw fail("negative node id");
        r.node = static_cast<NodeId>(node);
        r.src = static_cast<NodeId>(src);
        r.dst = static_cast<NodeId>(dst);

        if (evt == "GEN") r.event = TraceEvent::GEN;
        else if (evt == "ENQ") r.event = TraceEvent::ENQ;
        else if (evt == "DEQ") r.event = TraceEvent::DEQ;
        else if (evt == "RCV") r.event = TraceEvent::RCV;
        else if (evt == "DRP") r.event = TraceEvent::DRP;
        else throw fail("unknown event '" + evt + "'");

        if (r.event == TraceEvent::GEN && !generated.insert(r.packet).second)
            throw fail("duplicate GEN for packet " + std::to_string(r.packet));
        if (r.event == TraceEvent::RCV) {
            if (!generated.count(r.packet))
                throw fail("RCV for packet " + std::to_string(r.packet) + " without GEN");
            if (!received.insert(r.packet).second)
                throw fail("duplicate RCV for packet " + std::to_string(r.packet));
        }
        out.push_back(r);
    }
    return out;
}

} // namespace nocsim

#endif // NOCSIM_TRACE_HPP
