#ifndef NOCSIM_CONFIG_HPP
#define NOCSIM_CONFIG_HPP

#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "nocsim/engine.hpp"
#include "nocsim/topology.hpp"
#include "nocsim/traffic.hpp"

namespace nocsim {

// Fully validated run configuration; see parse_config() for the file format.
struct SimConfig {
    TopologyKind topology_kind = TopologyKind::Mesh2D;
    std::size_t width = 4;
    std::size_t height = 4;
    std::string topology_file;

    double bandwidth = 1.0;
    double propagation_delay = 1.0;
    double switch_delay = 0.0;
    std::size_t queue_capacity = 1000;

    TrafficModel traffic;          // traffic.model is required
    double rate = 0.0;             // traffic.rate is required
    InjectionDiscipline discipline = InjectionDiscipline::Poisson;
    double packet_size = 1.0;

    double duration = 10000.0;
    double warmup = 0.0;
    std::uint64_t seed = 1;
    double monitor_interval = 100.0;
};

namespace detail {

struct ConfigEntry {
    std::string value;
    std::size_t line = 0;
    bool consumed = false;
};

class ConfigReader {
public:
    explicit ConfigReader(std::istream& in) {
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (auto hash = line.find('#'); hash != std::string::npos)
                line.erase(hash);
            const std::string trimmed = trim(line);
            if (trimmed.empty())
                continue;
            const auto eq = trimmed.find('=');
            if (eq == std::string::npos)
                throw err(line_no, "expected 'key = value'");
            const std::string key = trim(trimmed.substr(0, eq));
            const std::string value = trim(trimmed.substr(eq + 1));
            if (key.empty())
                throw err(line_no, "empty key");
            if (value.empty())
                throw err(line_no, "empty value for key '" + key + "'");
            auto [it, inserted] = entries_.emplace(key, ConfigEntry{value, line_no, false});
            if (!inserted)
                throw err(line_no, "duplicate key '" + key + "' (first set on line " +
                                       std::to_string(it->second.line) + ")");
        }
    }

    bool has(const std::string& key) const { return entries_.count(key) != 0; }

    std::optional<std::string> take(const std::string& key) {
        auto it = entries_.find(key);
        if (it == entries_.end())
            return std::nullopt;
        it->second.consumed = true;
        return it->second.value;
    }

    std::size_t line_of(const std::string& key) const {
        auto it = entries_.find(key);
        return it == entries_.end() ? 0 : it->second.line;
    }

    double take_double(const std::string& key, double fallback) {
        auto raw = take(key);
        if (!raw)
            return fallback;
        try {
            std::size_t used = 0;
            const double v = std::stod(*raw, &used);
            if (used != raw->size())
                throw std::invalid_argument("trailing text");
            return v;
        } catch (const std::exception&) {
            throw key_err(key, "expected a number, got '" + *raw + "'");
        }
    }

    std::uint64_t take_unsigned(const std::string& key, std::uint64_t fallback) {
        auto raw = take(key);
        if (!raw)
            return fallback;
        try {
            if (!raw->empty() && (*raw)[0] == '-')
                throw std::invalid_argument("negative");
            std::size_t used = 0;
            const std::uint64_t v = std::stoull(*raw, &used);
            if (used != raw->size())
                throw std::invalid_argument("trailing text");
            return v;
        } catch (const std::exception&) {
            throw key_err(key, "expected a non-negative integer, got '" + *raw + "'");
        }
    }

    std::runtime_error key_err(const std::string& key, const std::string& what) const {
        return err(line_of(key), key + ": " + what);
    }

    void finish() const {
        for (const auto& [key, entry] : entries_)
            if (!entry.consumed)
                throw err(entry.line, "unknown key '" + key + "'");
    }

private:
    static std::runtime_error err(std::size_t line, const std::string& what) {
        return std::runtime_error("config line " + std::to_string(line) + ": " + what);
    }

    static std::string trim(const std::string& s) {
        const auto first = s.find_first_not_of(" \t\r");
        if (first == std::string::npos)
            return "";
        const auto last = s.find_last_not_of(" \t\r");
        return s.substr(first, last - first + 1);
    }

    std::map<std::string, ConfigEntry> entries_;
};

} // namespace detail

// Flat `key = value` configuration with '#' comments. Unknown keys are
// rejected. traffic.model and traffic.rate are required (and traffic.range1
// with the locality model); everything else has a default.
inline SimConfig parse_config(std::istream& in) {
    detail::ConfigReader reader(in);
    SimConfig cfg;

    if (auto kind = reader.take("topology.kind")) {
        if (*kind == "mesh") cfg.topology_kind = TopologyKind::Mesh2D;
        else if (*kind == "diagonal_mesh") cfg.topology_kind = TopologyKind::DiagonalMesh2D;
        else if (*kind == "custom") cfg.topology_kind = TopologyKind::Custom;
        else throw reader.key_err("topology.kind",
                                  "must be one of mesh, diagonal_mesh, custom");
    }
    const bool custom = cfg.topology_kind == TopologyKind::Custom;
    if (custom) {
        if (reader.has("topology.width") || reader.has("topology.height"))
            throw reader.key_err(reader.has("topology.width") ? "topology.width"
                                                              : "topology.height",
                                 "not valid with topology.kind = custom");
        auto file = reader.take("topology.file");
        if (!file)
            throw std::runtime_error("missing required key: topology.file "
                                     "(topology.kind = custom)");
        cfg.topology_file = *file;
    } else if (reader.has("topology.file")) {
        throw reader.key_err("topology.file", "only valid with topology.kind = custom");
    } else {
        const std::uint64_t w = reader.take_unsigned("topology.width", 4);
        const std::uint64_t h = reader.take_unsigned("topology.height", 4);
        if (w < 1)
            throw reader.key_err("topology.width", "must be >= 1");
        if (h < 1)
            throw reader.key_err("topology.height", "must be >= 1");
        cfg.width = static_cast<std::size_t>(w);
        cfg.height = static_cast<std::size_t>(h);
    }

    cfg.bandwidth = reader.take_double("link.bandwidth", 1.0);
    if (!(cfg.bandwidth > 0.0))
        throw reader.key_err("link.bandwidth", "must be > 0");
    cfg.propagation_delay = reader.take_double("link.propagation_delay", 1.0);
    if (!(cfg.propagation_delay >= 0.0))
        throw reader.key_err("link.propagation_delay", "must be >= 0");
    cfg.switch_delay = reader.take_double("switch.delay", 0.0);
    if (!(cfg.switch_delay >= 0.0))
        throw reader.key_err("switch.delay", "must be >= 0");
    cfg.queue_capacity = static_cast<std::size_t>(reader.take_unsigned("queue.capacity", 1000));

    auto model = reader.take("traffic.model");
    if (!model)
        throw std::runtime_error("missing required key: traffic.model");
    if (*model == "locality") {
        if (!reader.has("traffic.range1"))
            throw std::runtime_error("missing required key: traffic.range1 "
                                     "(traffic.model = locality)");
        const double range1 = reader.take_double("traffic.range1", 0.0);
        if (!(range1 >= 0.0 && range1 <= 1.0))
            throw reader.key_err("traffic.range1", "must be within [0, 1]");
        cfg.traffic = TrafficModel::locality(range1);
    } else if (*model == "fixed") {
        cfg.traffic = TrafficModel::fixed_complement();
    } else if (*model == "uniform") {
        cfg.traffic = TrafficModel::uniform_random();
    } else {
        throw reader.key_err("traffic.model", "must be one of locality, fixed, uniform");
    }
    if (cfg.traffic.kind != TrafficKind::LocalityRandom && reader.has("traffic.range1"))
        throw reader.key_err("traffic.range1", "only valid with traffic.model = locality");

    if (!reader.has("traffic.rate"))
        throw std::runtime_error("missing required key: traffic.rate");
    cfg.rate = reader.take_double("traffic.rate", 0.0);
    if (!(cfg.rate > 0.0))
        throw reader.key_err("traffic.rate", "must be > 0");

    if (auto disc = reader.take("traffic.discipline")) {
        if (*disc == "deterministic") cfg.discipline = InjectionDiscipline::Deterministic;
        else if (*disc == "poisson") cfg.discipline = InjectionDiscipline::Poisson;
        else throw reader.key_err("traffic.discipline",
                                  "must be one of deterministic, poisson");
    }

    cfg.packet_size = reader.take_double("packet.size", 1.0);
    if (!(cfg.packet_size > 0.0))
        throw reader.key_err("packet.size", "must be > 0");

    cfg.duration = reader.take_double("sim.duration", 10000.0);
    if (!(cfg.duration > 0.0))
        throw reader.key_err("sim.duration", "must be > 0");
    cfg.warmup = reader.take_double("sim.warmup", 0.0);
    if (!(cfg.warmup >= 0.0) || cfg.warmup >= cfg.duration)
        throw reader.key_err("sim.warmup", "must be within [0, sim.duration)");
    cfg.seed = reader.take_unsigned("sim.seed", 1);
    cfg.monitor_interval = reader.take_double("monitor.interval", 100.0);
    if (!(cfg.monitor_interval >= 0.0))
        throw reader.key_err("monitor.interval", "must be >= 0");

    reader.finish();
    return cfg;
}

inline SimConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open config file: " + path);
    try {
        return parse_config(in);
    } catch (const std::runtime_error& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

inline Topology build_topology(const SimConfig& cfg) {
    switch (cfg.topology_kind) {
        case TopologyKind::Mesh2D:
            return build_mesh2d(cfg.width, cfg.height, cfg.bandwidth, cfg.propagation_delay);
        case TopologyKind::DiagonalMesh2D:
            return build_diagonal_mesh2d(cfg.width, cfg.height, cfg.bandwidth,
                                         cfg.propagation_delay);
        case TopologyKind::Custom:
            return load_topology(cfg.topology_file);
    }
    throw std::logic_error("unhandled topology kind");
}

inline InjectionProcess injection_process_of(const SimConfig& cfg) {
    return {cfg.rate, cfg.discipline, cfg.packet_size};
}

inline SimParams sim_params_of(const SimConfig& cfg) {
    SimParams params;
    params.duration = cfg.duration;
    params.warmup = cfg.warmup;
    params.switch_delay = cfg.switch_delay;
    params.queue_capacity = cfg.queue_capacity;
    params.monitor_interval = cfg.monitor_interval;
    return params;
}

} // namespace nocsim

#endif // NOCSIM_CONFIG_HPP
