#pragma once

// Slotted Monte-Carlo simulation of all-to-all dissemination.
//
// Each slot one node, chosen uniformly, captures the channel and broadcasts;
// every other node v decodes independently with probability P(tx, v).
// Network coding nodes broadcast a random combination of their basis;
// random-selection nodes broadcast one stored information packet.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "ncdiss/coding.hpp"
#include "ncdiss/errors.hpp"
#include "ncdiss/galois.hpp"
#include "ncdiss/radio.hpp"
#include "ncdiss/random.hpp"
#include "ncdiss/stats.hpp"

namespace ncdiss {

enum class Protocol { network_coding, random_selection };

inline std::string_view to_string(Protocol p) {
    return p == Protocol::network_coding ? "nc" : "random_selection";
}

inline std::optional<Protocol> parse_protocol(std::string_view s) {
    if (s == "nc") return Protocol::network_coding;
    if (s == "random_selection" || s == "baseline") return Protocol::random_selection;
    return std::nullopt;
}

struct SimConfig {
    unsigned q = 8;
    std::size_t r = 4;
    Protocol protocol = Protocol::network_coding;
    std::size_t trials = 200;
    std::uint64_t seed = 1;
    std::uint64_t max_slots = 0;  // 0 selects 50 * N^2
    bool record_trace = false;
    // Jump over slots in which nobody decodes anything. Same law as the
    // slot-by-slot process; needed when links are weak (low tx power).
    bool skip_idle = false;
    unsigned workers = 1;

    std::uint64_t slot_cap(std::size_t n) const {
        return max_slots != 0 ? max_slots : 50 * static_cast<std::uint64_t>(n) * n;
    }

    void validate(std::size_t n) const {
        if (trials < 1) throw config_error("trials must be >= 1");
        if (r < 1) throw config_error("payload length r must be >= 1");
        if (workers < 1) throw config_error("workers must be >= 1");
        if (slot_cap(n) < n) throw config_error("max_slots must be >= N");
        FieldContext check(q);
        (void)check;
    }
};

struct TrialResult {
    std::uint64_t stopping_time = 0;
    bool completed = false;
    // Every node decoded all N packets exactly (checked on completion).
    bool decoded = false;
    // D(t) for t = 0..stopping_time when recording was requested.
    std::vector<std::uint64_t> dimension_trace;
};

/// Draws the transmitter and receiver set of a slot, either slot by slot or
/// conditioned on at least one reception.
class LinkSampler {
public:
    explicit LinkSampler(const ReceptionMatrix& m) : n_(m.size()), links_(n_), probs_(n_), any_from_(n_), weight_(n_) {
        double total = 0.0;
        for (std::size_t tx = 0; tx < n_; ++tx) {
            for (std::size_t v = 0; v < n_; ++v) {
                if (v != tx && m(tx, v) > 0.0) {
                    links_[tx].push_back(v);
                    probs_[tx].push_back(m(tx, v));
                }
            }
            // any_from_[tx][k] = P(at least one success among links k..end)
            auto& any = any_from_[tx];
            any.assign(links_[tx].size(), 0.0);
            double log_none = 0.0;
            for (std::size_t k = links_[tx].size(); k-- > 0;) {
                log_none += std::log1p(-probs_[tx][k]);
                any[k] = -std::expm1(log_none);
            }
            weight_[tx] = any.empty() ? 0.0 : any.front();
            total += weight_[tx];
        }
        cumulative_.resize(n_);
        double acc = 0.0;
        for (std::size_t tx = 0; tx < n_; ++tx) cumulative_[tx] = (acc += weight_[tx]);
        active_ = n_ == 0 ? 0.0 : total / static_cast<double>(n_);
    }

    static constexpr std::uint64_t never = std::numeric_limits<std::uint64_t>::max();

    // Probability that a slot delivers to at least one node.
    double active_probability() const noexcept { return active_; }

    std::size_t uniform_transmitter(Rng& rng) const { return static_cast<std::size_t>(rng.below(n_)); }

    void draw_receivers(Rng& rng, std::size_t tx, std::vector<std::size_t>& out) const {
        out.clear();
        const auto& links = links_[tx];
        const auto& probs = probs_[tx];
        for (std::size_t k = 0; k < links.size(); ++k) {
            if (rng.bernoulli(probs[k])) out.push_back(links[k]);
        }
    }

    // Number of slots up to and including the next active one, or `never`.
    std::uint64_t slots_until_active(Rng& rng) const {
        if (!(active_ > 0.0)) return never;
        if (active_ >= 1.0) return 1;
        const double u = 1.0 - rng.uniform();  // (0, 1]
        const double failures = std::floor(std::log(u) / std::log1p(-active_));
        if (!(failures < 9.0e18)) return never;
        return static_cast<std::uint64_t>(failures) + 1;
    }

    // Transmitter of an active slot: P(tx | active) proportional to P(tx delivers to anyone).
    std::size_t active_transmitter(Rng& rng) const {
        const double target = rng.uniform() * cumulative_.back();
        auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
        auto tx = static_cast<std::size_t>(it - cumulative_.begin());
        if (tx >= n_) tx = n_ - 1;
        while (weight_[tx] == 0.0) tx = tx == 0 ? n_ - 1 : tx - 1;
        return tx;
    }

    // Receiver set conditioned on being non-empty.
    void draw_active_receivers(Rng& rng, std::size_t tx, std::vector<std::size_t>& out) const {
        out.clear();
        const auto& links = links_[tx];
        const auto& probs = probs_[tx];
        const auto& any = any_from_[tx];
        bool found = false;
        for (std::size_t k = 0; k < links.size(); ++k) {
            const double p = found ? probs[k] : probs[k] / any[k];
            if (rng.bernoulli(p)) {
                found = true;
                out.push_back(links[k]);
            }
        }
    }

private:
    std::size_t n_;
    std::vector<std::vector<std::size_t>> links_;
    std::vector<std::vector<double>> probs_;
    std::vector<std::vector<double>> any_from_;
    std::vector<double> weight_;
    std::vector<double> cumulative_;
    double active_ = 0.0;
};

namespace engine_detail {

class CodingNodes {
public:
    CodingNodes(const FieldContext& field, std::size_t n, std::size_t r, Rng& rng) {
        packets_.reserve(n);
        buffers_.reserve(n);
        for (std::size_t u = 0; u < n; ++u) {
            InformationPacket packet{u, std::vector<Element>(r)};
            for (auto& s : packet.symbols) s = static_cast<Element>(rng.below(field.order()));
            buffers_.push_back(SubspaceBuffer::with_packet(field, packet, n));
            packets_.push_back(std::move(packet));
        }
        complete_ = n == 1 ? 1 : 0;
    }

    std::size_t complete() const noexcept { return complete_; }
    std::uint64_t total_increase() const noexcept { return increase_; }

    void deliver(std::size_t tx, std::span<const std::size_t> receivers, Rng& rng) {
        targets_.clear();
        for (std::size_t u : receivers) {
            if (!buffers_[u].full()) targets_.push_back(u);
        }
        if (targets_.empty()) return;
        buffers_[tx].encode_into(rng, message_);
        for (std::size_t u : targets_) {
            if (buffers_[u].insert(message_)) {
                ++increase_;
                if (buffers_[u].full()) ++complete_;
            }
        }
    }

    bool all_decode() const {
        for (const auto& b : buffers_) {
            if (b.decode() != packets_) return false;
        }
        return true;
    }

private:
    std::vector<InformationPacket> packets_;
    std::vector<SubspaceBuffer> buffers_;
    std::vector<std::size_t> targets_;
    CodedMessage message_;
    std::size_t complete_ = 0;
    std::uint64_t increase_ = 0;
};

class SelectionNodes {
public:
    explicit SelectionNodes(std::size_t n) : n_(n), has_(n * n, 0), held_(n) {
        for (std::size_t u = 0; u < n; ++u) {
            has_[u * n + u] = 1;
            held_[u].push_back(u);
        }
        complete_ = n == 1 ? 1 : 0;
    }

    std::size_t complete() const noexcept { return complete_; }
    std::uint64_t total_increase() const noexcept { return increase_; }

    void deliver(std::size_t tx, std::span<const std::size_t> receivers, Rng& rng) {
        if (receivers.empty()) return;
        const auto& stock = held_[tx];
        const std::size_t packet = stock[static_cast<std::size_t>(rng.below(stock.size()))];
        for (std::size_t u : receivers) {
            char& slot = has_[u * n_ + packet];
            if (slot) continue;
            slot = 1;
            held_[u].push_back(packet);
            ++increase_;
            if (held_[u].size() == n_) ++complete_;
        }
    }

    bool all_decode() const { return complete_ == n_; }

private:
    std::size_t n_;
    std::vector<char> has_;
    std::vector<std::vector<std::size_t>> held_;
    std::size_t complete_ = 0;
    std::uint64_t increase_ = 0;
};

template <class Nodes>
TrialResult run_slots(std::size_t n, const SimConfig& config, const LinkSampler& links, Nodes& nodes, Rng& rng) {
    TrialResult result;
    const std::uint64_t cap = config.slot_cap(n);
    auto& trace = result.dimension_trace;
    if (config.record_trace) trace.push_back(nodes.total_increase());

    std::vector<std::size_t> receivers;
    receivers.reserve(n);
    std::uint64_t slot = 0;
    while (nodes.complete() < n) {
        std::size_t tx = 0;
        if (config.skip_idle) {
            const std::uint64_t gap = links.slots_until_active(rng);
            if (gap == LinkSampler::never || gap > cap - slot) {
                if (config.record_trace) trace.resize(cap + 1, nodes.total_increase());
                result.stopping_time = cap;
                return result;
            }
            if (config.record_trace) trace.resize(slot + gap, nodes.total_increase());
            slot += gap;
            tx = links.active_transmitter(rng);
            links.draw_active_receivers(rng, tx, receivers);
        } else {
            if (slot >= cap) {
                result.stopping_time = cap;
                return result;
            }
            ++slot;
            tx = links.uniform_transmitter(rng);
            links.draw_receivers(rng, tx, receivers);
        }
        nodes.deliver(tx, receivers, rng);
        if (config.record_trace) trace.push_back(nodes.total_increase());
    }
    result.stopping_time = slot;
    result.completed = true;
    result.decoded = nodes.all_decode();
    return result;
}

}  // namespace engine_detail

inline TrialResult run_trial_nc(const ReceptionMatrix& matrix, const SimConfig& config, std::uint64_t trial_seed,
                                const FieldContext& field, const LinkSampler& links) {
    Rng rng(trial_seed);
    engine_detail::CodingNodes nodes(field, matrix.size(), config.r, rng);
    return engine_detail::run_slots(matrix.size(), config, links, nodes, rng);
}

/// One network-coding trial. Returns stopping time 0 for N = 1.
inline TrialResult run_trial_nc(const ReceptionMatrix& matrix, const SimConfig& config, std::uint64_t trial_seed) {
    if (matrix.size() == 0) throw config_error("simulation needs N >= 1");
    config.validate(matrix.size());
    const FieldContext field(config.q);
    const LinkSampler links(matrix);
    return run_trial_nc(matrix, config, trial_seed, field, links);
}

inline TrialResult run_trial_baseline(const ReceptionMatrix& matrix, const SimConfig& config,
                                      std::uint64_t trial_seed, const LinkSampler& links) {
    Rng rng(trial_seed);
    engine_detail::SelectionNodes nodes(matrix.size());
    return engine_detail::run_slots(matrix.size(), config, links, nodes, rng);
}

/// One random-selection trial.
inline TrialResult run_trial_baseline(const ReceptionMatrix& matrix, const SimConfig& config,
                                      std::uint64_t trial_seed) {
    if (matrix.size() == 0) throw config_error("simulation needs N >= 1");
    config.validate(matrix.size());
    const LinkSampler links(matrix);
    return run_trial_baseline(matrix, config, trial_seed, links);
}

struct ExperimentSummary {
    double mean = 0.0;
    double std_dev = 0.0;
    double ci95_lo = 0.0;
    double ci95_hi = 0.0;
    std::size_t trials = 0;
    std::size_t completed = 0;
    std::size_t incomplete_count = 0;
    // Completed trials whose final buffers failed to reproduce the packets.
    std::size_t decode_failures = 0;
    // No trial completed; the statistics above are meaningless.
    bool degenerate = false;
};

struct ExperimentResult {
    ExperimentSummary summary;
    std::vector<TrialResult> trials;  // in trial-index order
};

/// Runs config.trials independent trials. Trial i uses derive_seed(seed, i),
/// so results do not depend on the worker count.
inline ExperimentResult run_experiment(const ReceptionMatrix& matrix, const SimConfig& config) {
    const std::size_t n = matrix.size();
    if (n == 0) throw config_error("simulation needs N >= 1");
    config.validate(n);
    const FieldContext field(config.q);
    const LinkSampler links(matrix);

    ExperimentResult out;
    out.trials.resize(config.trials);
    auto run_one = [&](std::size_t i) {
        const std::uint64_t seed = derive_seed(config.seed, i);
        out.trials[i] = config.protocol == Protocol::network_coding
                            ? run_trial_nc(matrix, config, seed, field, links)
                            : run_trial_baseline(matrix, config, seed, links);
    };

    const unsigned workers = std::min<std::size_t>(config.workers, config.trials);
    if (workers <= 1) {
        for (std::size_t i = 0; i < config.trials; ++i) run_one(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < config.trials; i = next++) run_one(i);
            });
        }
    }

    std::vector<double> times;
    times.reserve(config.trials);
    auto& s = out.summary;
    s.trials = config.trials;
    for (const auto& t : out.trials) {
        if (t.completed) {
            times.push_back(static_cast<double>(t.stopping_time));
            if (!t.decoded) ++s.decode_failures;
        } else {
            ++s.incomplete_count;
        }
    }
    s.completed = times.size();
    s.degenerate = times.empty();
    const SampleSummary stats = summarize(times);
    s.mean = stats.mean;
    s.std_dev = stats.std_dev;
    s.ci95_lo = stats.ci95_lo;
    s.ci95_hi = stats.ci95_hi;
    return out;
}

}  // namespace ncdiss
