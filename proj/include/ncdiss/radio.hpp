#pragma once

// Node placement and the Rayleigh-fading reception model.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ncdiss/errors.hpp"

namespace ncdiss {

struct NodePosition {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const NodePosition&, const NodePosition&) = default;
};

inline double distance(const NodePosition& a, const NodePosition& b) { return std::hypot(a.x - b.x, a.y - b.y); }

inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }

/// Transmit power and noise in watts, capture threshold in dB.
struct ChannelParams {
    double tx_power_w = 20e-6;
    double noise_w = 4e-14;
    double capture_threshold_db = 45.0;
    double path_loss_exponent = 2.0;

    double threshold_linear() const { return std::pow(10.0, capture_threshold_db / 10.0); }

    void validate() const {
        if (!(tx_power_w > 0.0) || !std::isfinite(tx_power_w)) throw config_error("tx power must be > 0");
        if (!(noise_w > 0.0) || !std::isfinite(noise_w)) throw config_error("noise power must be > 0");
        if (!std::isfinite(capture_threshold_db)) throw config_error("capture threshold must be finite");
        if (!(path_loss_exponent >= 1.0)) throw config_error("path loss exponent must be >= 1");
    }
};

/// Pr(s / N0 >= z) for received power s ~ Exp(mean P * d^-eta):
/// exp(-z * N0 * d^eta / P). Distance 0 gives 1.
inline double reception_probability(const ChannelParams& params, double distance_m) {
    if (distance_m < 0.0) throw config_error("negative distance");
    if (distance_m == 0.0) return 1.0;
    const double exponent = params.threshold_linear() * params.noise_w *
                            std::pow(distance_m, params.path_loss_exponent) / params.tx_power_w;
    return std::exp(-exponent);
}

/// N x N link success probabilities, probs(u, v) = P(u transmits, v decodes).
/// Diagonal is 0.
class ReceptionMatrix {
public:
    ReceptionMatrix() = default;

    explicit ReceptionMatrix(std::size_t n) : n_(n), probs_(n * n, 0.0) {}

    ReceptionMatrix(std::size_t n, std::vector<double> row_major) : n_(n), probs_(std::move(row_major)) {
        if (probs_.size() != n * n) throw config_error("reception matrix needs N*N entries");
        for (std::size_t u = 0; u < n_; ++u) {
            for (std::size_t v = 0; v < n_; ++v) {
                const double p = probs_[u * n_ + v];
                if (!(p >= 0.0 && p <= 1.0)) throw config_error("reception probability outside [0,1]");
            }
            probs_[u * n_ + u] = 0.0;
        }
    }

    std::size_t size() const noexcept { return n_; }
    double operator()(std::size_t u, std::size_t v) const { return probs_[u * n_ + v]; }
    std::span<const double> row(std::size_t u) const { return {probs_.data() + u * n_, n_}; }

    void set(std::size_t u, std::size_t v, double p) {
        if (!(p >= 0.0 && p <= 1.0)) throw config_error("reception probability outside [0,1]");
        if (u != v) probs_[u * n_ + v] = p;
    }

    // sum over u != v of P_uv
    double off_diagonal_sum() const {
        double total = 0.0;
        for (std::size_t u = 0; u < n_; ++u) {
            for (std::size_t v = 0; v < n_; ++v) {
                if (u != v) total += probs_[u * n_ + v];
            }
        }
        return total;
    }

    bool is_symmetric() const {
        for (std::size_t u = 0; u < n_; ++u) {
            for (std::size_t v = u + 1; v < n_; ++v) {
                if (probs_[u * n_ + v] != probs_[v * n_ + u]) return false;
            }
        }
        return true;
    }

private:
    std::size_t n_ = 0;
    std::vector<double> probs_;
};

inline ReceptionMatrix build_reception_matrix(const std::vector<NodePosition>& positions,
                                              const ChannelParams& params) {
    params.validate();
    if (positions.empty()) throw config_error("reception matrix needs at least one node");
    const std::size_t n = positions.size();
    ReceptionMatrix m(n);
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = u + 1; v < n; ++v) {
            const double p = reception_probability(params, distance(positions[u], positions[v]));
            m.set(u, v, p);
            m.set(v, u, p);
        }
    }
    return m;
}

// Every off-diagonal entry equal to p.
inline ReceptionMatrix complete_graph(std::size_t n, double p) {
    ReceptionMatrix m(n);
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = 0; v < n; ++v) m.set(u, v, p);
    }
    return m;
}

// Only |u - v| = 1 links, each with probability p.
inline ReceptionMatrix nearest_neighbor_chain(std::size_t n, double p) {
    ReceptionMatrix m(n);
    for (std::size_t u = 0; u + 1 < n; ++u) {
        m.set(u, u + 1, p);
        m.set(u + 1, u, p);
    }
    return m;
}

// --- topologies ------------------------------------------------------------

inline std::vector<NodePosition> line_topology(std::size_t n, double spacing) {
    if (n == 0) throw config_error("line topology needs N >= 1");
    if (!(spacing > 0.0)) throw config_error("node spacing must be positive");
    std::vector<NodePosition> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = {static_cast<double>(i) * spacing, 0.0};
    return out;
}

// m rows by n columns, node index = row * n + col, x along columns.
inline std::vector<NodePosition> grid_topology(std::size_t rows, std::size_t cols, double spacing) {
    if (rows == 0 || cols == 0) throw config_error("grid topology needs m, n >= 1");
    if (!(spacing > 0.0)) throw config_error("node spacing must be positive");
    std::vector<NodePosition> out;
    out.reserve(rows * cols);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            out.push_back({static_cast<double>(c) * spacing, static_cast<double>(r) * spacing});
        }
    }
    return out;
}

namespace radio_detail {

inline std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

inline double parse_number(const std::string& field, std::size_t line_no) {
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(field, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != field.size() || field.empty() || !std::isfinite(value)) {
        throw config_error("positions line " + std::to_string(line_no) + ": bad number '" + field + "'");
    }
    return value;
}

}  // namespace radio_detail

/// Parses `node_id,x,y` CSV (header required). Rows may come in any order
/// but ids must be exactly 0..N-1.
inline std::vector<NodePosition> parse_positions(std::istream& in) {
    using radio_detail::trim;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    std::map<std::size_t, NodePosition> by_id;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        for (std::string f; std::getline(ss, f, ',');) fields.push_back(trim(f));
        if (!header_seen) {
            if (fields != std::vector<std::string>{"node_id", "x", "y"}) {
                throw config_error("positions file must start with header 'node_id,x,y'");
            }
            header_seen = true;
            continue;
        }
        if (fields.size() != 3) {
            throw config_error("positions line " + std::to_string(line_no) + ": expected 3 fields");
        }
        const double id = radio_detail::parse_number(fields[0], line_no);
        if (id < 0 || id != std::floor(id)) {
            throw config_error("positions line " + std::to_string(line_no) + ": node_id must be a non-negative integer");
        }
        const auto key = static_cast<std::size_t>(id);
        if (!by_id.emplace(key, NodePosition{radio_detail::parse_number(fields[1], line_no),
                                             radio_detail::parse_number(fields[2], line_no)})
                 .second) {
            throw config_error("positions file: duplicate node_id " + std::to_string(key));
        }
    }
    if (!header_seen) throw config_error("positions file is empty");
    if (by_id.empty()) throw config_error("positions file has no nodes");
    std::vector<NodePosition> out;
    out.reserve(by_id.size());
    for (const auto& [id, pos] : by_id) {
        if (id != out.size()) throw config_error("positions file: node ids must be dense from 0");
        out.push_back(pos);
    }
    return out;
}

inline std::vector<NodePosition> load_positions(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot read positions file '" + path + "'");
    return parse_positions(in);
}

// --- connectivity ----------------------------------------------------------

enum class Connectivity { fully_connected, sparsely_connected, intermediate, disconnected };

inline std::string_view to_string(Connectivity c) {
    switch (c) {
        case Connectivity::fully_connected: return "fully_connected";
        case Connectivity::sparsely_connected: return "sparsely_connected";
        case Connectivity::intermediate: return "intermediate";
        case Connectivity::disconnected: return "disconnected";
    }
    return "unknown";
}

/// Links with P_uv > zero_tolerance count as in range. |V_u| includes u
/// itself. Connectivity is strong connectivity of the directed link graph.
inline Connectivity classify_connectivity(const ReceptionMatrix& m, double zero_tolerance = 1e-12,
                                          double sparse_ratio = 0.2) {
    const std::size_t n = m.size();
    if (n <= 1) return Connectivity::fully_connected;

    auto reaches_all = [&](bool transpose) {
        std::vector<char> seen(n, 0);
        std::vector<std::size_t> stack{0};
        seen[0] = 1;
        std::size_t count = 1;
        while (!stack.empty()) {
            const std::size_t u = stack.back();
            stack.pop_back();
            for (std::size_t v = 0; v < n; ++v) {
                const double p = transpose ? m(v, u) : m(u, v);
                if (!seen[v] && u != v && p > zero_tolerance) {
                    seen[v] = 1;
                    ++count;
                    stack.push_back(v);
                }
            }
        }
        return count == n;
    };

    bool full = true;
    std::size_t max_range = 0;
    for (std::size_t u = 0; u < n; ++u) {
        std::size_t in_range = 1;
        for (std::size_t v = 0; v < n; ++v) {
            if (u == v) continue;
            if (m(u, v) > zero_tolerance) {
                ++in_range;
            } else {
                full = false;
            }
        }
        max_range = std::max(max_range, in_range);
    }
    if (full) return Connectivity::fully_connected;
    if (!reaches_all(false) || !reaches_all(true)) return Connectivity::disconnected;
    if (static_cast<double>(max_range) / static_cast<double>(n) <= sparse_ratio) {
        return Connectivity::sparsely_connected;
    }
    return Connectivity::intermediate;
}

}  // namespace ncdiss
