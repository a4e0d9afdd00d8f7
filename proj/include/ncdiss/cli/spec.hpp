#pragma once

// Experiment specification shared by the ncsim subcommands, and its JSON form.
//
//   {
//     "topology": "line" | "grid" | "file",
//     "d": 30,                      spacing in meters (line, grid)
//     "sizes": [23, 27, 30, 35],    line; grid sizes must be perfect squares
//     "grid": ["5x6", "6x6"],       grid shapes, rows x cols (overrides sizes)
//     "positions": "nodes.csv",     file; relative to the config file
//     "power_dbm": -16.99 | [...],  or "power_w": 2e-5 | [...]
//     "noise_w": 4e-14, "z_db": 45, "eta": 2,
//     "q": 8, "r": 4, "trials": 200, "seed": 1,
//     "protocol": "nc" | "baseline" | "both" | ["nc", "baseline"],
//     "max_slots": 0, "skip_idle": false, "workers": 1,
//     "out": "result.csv", "trace": false
//   }

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ncdiss/engine.hpp"
#include "ncdiss/errors.hpp"
#include "ncdiss/radio.hpp"

namespace ncdiss::cli {

enum class TopologyKind { line, grid, file };

inline std::string_view to_string(TopologyKind k) {
    switch (k) {
        case TopologyKind::line: return "line";
        case TopologyKind::grid: return "grid";
        case TopologyKind::file: return "file";
    }
    return "?";
}

inline TopologyKind parse_topology_kind(std::string_view s) {
    if (s == "line") return TopologyKind::line;
    if (s == "grid") return TopologyKind::grid;
    if (s == "file") return TopologyKind::file;
    throw config_error("unknown topology '" + std::string(s) + "' (line, grid, file)");
}

struct GridShape {
    std::size_t rows = 0;
    std::size_t cols = 0;
    friend bool operator==(const GridShape&, const GridShape&) = default;
};

inline GridShape parse_grid_shape(std::string_view s) {
    const auto x = s.find('x');
    auto to_size = [&](std::string_view part) {
        std::size_t v = 0;
        const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
        if (ec != std::errc{} || ptr != part.data() + part.size() || v == 0) {
            throw config_error("bad grid shape '" + std::string(s) + "' (expected RxC)");
        }
        return v;
    };
    if (x == std::string_view::npos) throw config_error("bad grid shape '" + std::string(s) + "' (expected RxC)");
    return {to_size(s.substr(0, x)), to_size(s.substr(x + 1))};
}

inline std::string format_grid_shape(const GridShape& g) {
    return std::to_string(g.rows) + "x" + std::to_string(g.cols);
}

/// One network layout to simulate; the label goes into the topology column.
struct Layout {
    std::string label;
    std::size_t n = 0;
    std::optional<double> spacing;
    std::vector<NodePosition> positions;
};

struct ExperimentSpec {
    TopologyKind topology = TopologyKind::line;
    double d = 30.0;
    std::vector<std::size_t> sizes;
    std::vector<GridShape> grid;
    std::string positions_path;
    std::vector<double> power_w{20e-6};
    double noise_w = 4e-14;
    double z_db = 45.0;
    double eta = 2.0;
    unsigned q = 8;
    std::size_t r = 4;
    std::size_t trials = 200;
    std::uint64_t seed = 1;
    std::vector<Protocol> protocols{Protocol::network_coding, Protocol::random_selection};
    std::uint64_t max_slots = 0;
    bool skip_idle = false;
    unsigned workers = 1;
    std::string out;
    bool trace = false;

    ChannelParams channel(double power) const { return ChannelParams{power, noise_w, z_db, eta}; }

    SimConfig sim_config(Protocol p) const {
        SimConfig c;
        c.q = q;
        c.r = r;
        c.protocol = p;
        c.trials = trials;
        c.seed = seed;
        c.max_slots = max_slots;
        c.record_trace = trace;
        c.skip_idle = skip_idle;
        c.workers = workers;
        return c;
    }

    bool has_protocol(Protocol p) const { return std::find(protocols.begin(), protocols.end(), p) != protocols.end(); }

    /// Expands the topology part into concrete layouts, in spec order.
    std::vector<Layout> layouts() const {
        std::vector<Layout> out;
        switch (topology) {
            case TopologyKind::line:
                for (std::size_t n : sizes) out.push_back({"line", n, d, line_topology(n, d)});
                break;
            case TopologyKind::grid:
                for (const auto& g : grid) {
                    out.push_back({"grid:" + format_grid_shape(g), g.rows * g.cols, d, grid_topology(g.rows, g.cols, d)});
                }
                break;
            case TopologyKind::file: {
                auto pos = load_positions(positions_path);
                const std::size_t n = pos.size();
                if (n < 2) throw config_error("positions file needs at least 2 nodes");
                out.push_back({"file", n, std::nullopt, std::move(pos)});
                break;
            }
        }
        return out;
    }

    /// Fills derived fields and checks invariants; throws config_error.
    void finalize() {
        if (topology == TopologyKind::grid && grid.empty()) {
            for (std::size_t n : sizes) {
                const auto side = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n))));
                if (side * side != n) {
                    throw config_error("grid size " + std::to_string(n) + " is not a perfect square; use --grid RxC");
                }
                grid.push_back({side, side});
            }
        }
        if (topology == TopologyKind::grid) {
            sizes.clear();
            for (const auto& g : grid) sizes.push_back(g.rows * g.cols);
        }
        if (topology == TopologyKind::file) {
            if (positions_path.empty()) throw config_error("file topology needs a positions path");
            std::ifstream probe(positions_path);
            if (!probe) throw config_error("cannot read positions file '" + positions_path + "'");
        } else {
            if (sizes.empty()) throw config_error("sizes list is empty");
            for (std::size_t n : sizes) {
                if (n < 2) throw config_error("network sizes must be at least 2");
            }
            if (!(d > 0.0) || !std::isfinite(d)) throw config_error("spacing d must be positive");
        }
        if (power_w.empty()) throw config_error("power list is empty");
        for (double p : power_w) channel(p).validate();
        if (protocols.empty()) throw config_error("no protocol selected");
        if (q != 1 && q != 4 && q != 8 && q != 16) throw config_error("q must be 1, 4, 8 or 16");
        if (r == 0) throw config_error("r must be positive");
        if (trials == 0) throw config_error("trials must be positive");
        if (workers == 0) throw config_error("workers must be positive");
        if (trace && out.empty()) throw config_error("--trace needs --out (traces go to a sidecar file)");
    }
};

inline std::vector<Protocol> parse_protocol_set(std::string_view s) {
    if (s == "both") return {Protocol::network_coding, Protocol::random_selection};
    if (auto p = parse_protocol(s)) return {*p};
    throw config_error("unknown protocol '" + std::string(s) + "' (nc, baseline, both)");
}

namespace detail {

template <class T>
std::vector<T> scalar_or_list(const nlohmann::json& v) {
    if (v.is_array()) return v.get<std::vector<T>>();
    return {v.get<T>()};
}

}  // namespace detail

/// Reads a JSON spec on top of `s`. Unknown keys are rejected so typos do
/// not pass silently.
inline ExperimentSpec spec_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {},
                                     ExperimentSpec s = {}) {
    if (!j.is_object()) throw config_error("config must be a JSON object");
    try {
        for (const auto& [key, v] : j.items()) {
            if (key == "topology") s.topology = parse_topology_kind(v.get<std::string>());
            else if (key == "d") s.d = v.get<double>();
            else if (key == "sizes") s.sizes = detail::scalar_or_list<std::size_t>(v);
            else if (key == "grid") {
                s.grid.clear();
                for (const auto& g : detail::scalar_or_list<std::string>(v)) s.grid.push_back(parse_grid_shape(g));
            } else if (key == "positions") {
                std::filesystem::path p = v.get<std::string>();
                s.positions_path = (p.is_relative() && !base_dir.empty() ? base_dir / p : p).string();
            } else if (key == "power_dbm") {
                s.power_w.clear();
                for (double dbm : detail::scalar_or_list<double>(v)) s.power_w.push_back(dbm_to_watts(dbm));
            } else if (key == "power_w") s.power_w = detail::scalar_or_list<double>(v);
            else if (key == "noise_w") s.noise_w = v.get<double>();
            else if (key == "z_db") s.z_db = v.get<double>();
            else if (key == "eta") s.eta = v.get<double>();
            else if (key == "q") s.q = v.get<unsigned>();
            else if (key == "r") s.r = v.get<std::size_t>();
            else if (key == "trials") s.trials = v.get<std::size_t>();
            else if (key == "seed") s.seed = v.get<std::uint64_t>();
            else if (key == "protocol") {
                s.protocols.clear();
                for (const auto& name : detail::scalar_or_list<std::string>(v)) {
                    for (Protocol p : parse_protocol_set(name)) {
                        if (!s.has_protocol(p)) s.protocols.push_back(p);
                    }
                }
            } else if (key == "max_slots") s.max_slots = v.get<std::uint64_t>();
            else if (key == "skip_idle") s.skip_idle = v.get<bool>();
            else if (key == "workers") s.workers = v.get<unsigned>();
            else if (key == "out") s.out = v.get<std::string>();
            else if (key == "trace") s.trace = v.get<bool>();
            else throw config_error("unknown config key '" + key + "'");
        }
    } catch (const nlohmann::json::exception& e) {
        throw config_error(std::string("bad config value: ") + e.what());
    }
    return s;
}

inline ExperimentSpec load_spec(const std::string& path, ExperimentSpec defaults = {}) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot read config '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw config_error("config '" + path + "' is not valid JSON: " + e.what());
    }
    return spec_from_json(j, std::filesystem::path(path).parent_path(), std::move(defaults));
}

}  // namespace ncdiss::cli
