#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "ncdiss/bounds.hpp"
#include "ncdiss/cli/csv.hpp"
#include "ncdiss/cli/spec.hpp"
#include "ncdiss/engine.hpp"
#include "ncdiss/radio.hpp"

namespace ncdiss::cli {

enum class Command { sweep_n, sweep_power, compare, bound, simulate };

inline std::string_view to_string(Command c) {
    switch (c) {
        case Command::sweep_n: return "sweep-n";
        case Command::sweep_power: return "sweep-power";
        case Command::compare: return "compare";
        case Command::bound: return "bound";
        case Command::simulate: return "simulate";
    }
    return "?";
}

struct Report {
    std::vector<CsvRow> rows;
    bool with_ratio = false;
    // One line per experiment that did not fully complete.
    std::vector<std::string> failures;
};

/// Optional side channels. `trace` receives dimension traces as change
/// points (slot 0 and every slot where the total dimension grew);
/// `verbose` receives the exact per-stage collision bounds.
struct Sinks {
    std::ostream* trace = nullptr;
    std::ostream* verbose = nullptr;
};

inline constexpr std::string_view trace_header = "topology,N,power_w,protocol,trial,slot,total_dimension";

inline void check_preconditions(Command cmd, const ExperimentSpec& spec) {
    const std::size_t layouts = spec.topology == TopologyKind::file ? 1 : spec.sizes.size();
    switch (cmd) {
        case Command::sweep_n:
            if (spec.power_w.size() != 1) throw config_error("sweep-n takes a single transmit power");
            break;
        case Command::sweep_power:
            if (layouts != 1) throw config_error("sweep-power takes a single network size");
            break;
        case Command::compare:
            if (!spec.has_protocol(Protocol::network_coding) || !spec.has_protocol(Protocol::random_selection)) {
                throw config_error("compare needs both protocols enabled");
            }
            break;
        case Command::simulate:
            if (layouts != 1 || spec.power_w.size() != 1) {
                throw config_error("simulate takes a single size and a single transmit power");
            }
            break;
        case Command::bound:
            break;
    }
}

namespace detail {

inline CsvRow base_row(const ExperimentSpec& spec, const Layout& layout, double power, const ReceptionMatrix& m) {
    CsvRow r;
    r.topology = layout.label;
    r.n = layout.n;
    r.d = layout.spacing;
    r.power_w = power;
    r.noise_w = spec.noise_w;
    r.z_db = spec.z_db;
    r.eta = spec.eta;
    r.q = spec.q;
    r.seed = spec.seed;
    r.connectivity_class = std::string(to_string(classify_connectivity(m)));
    return r;
}

inline void dump_stages(std::ostream& out, const Layout& layout, double power, const BoundResult& b) {
    out << layout.label << " N=" << layout.n << " power_w=" << format_double(power) << '\n';
    for (std::size_t i = 0; i < b.per_stage.size(); ++i) {
        const auto& p = b.per_stage[i];
        out << "  p_" << i + 1 << " = " << p.exact << " ~ " << format_double(p.raw)
            << (p.degenerate ? " (degenerate)" : "") << '\n';
    }
}

inline void write_trace(std::ostream& out, const CsvRow& row, const ExperimentResult& result) {
    for (std::size_t t = 0; t < result.trials.size(); ++t) {
        const auto& trace = result.trials[t].dimension_trace;
        for (std::size_t s = 0; s < trace.size(); ++s) {
            if (s > 0 && trace[s] == trace[s - 1]) continue;
            out << row.topology << ',' << row.n << ',' << format_double(row.power_w) << ',' << row.protocol << ','
                << t << ',' << s << ',' << trace[s] << '\n';
        }
    }
}

inline std::string describe(const CsvRow& row) {
    return row.topology + " N=" + std::to_string(row.n) + " power_w=" + format_double(row.power_w) +
           " protocol=" + row.protocol;
}

}  // namespace detail

/// Runs one subcommand over the spec: layouts in spec order, then powers,
/// then protocols. Throws config_error on an invalid spec and
/// disconnected_network when `bound` meets a network with no usable link.
inline Report run_command(Command cmd, const ExperimentSpec& spec, const Sinks& sinks = {}) {
    check_preconditions(cmd, spec);
    Report report;
    report.with_ratio = cmd == Command::compare;
    if (sinks.trace) *sinks.trace << trace_header << '\n';

    for (const Layout& layout : spec.layouts()) {
        for (double power : spec.power_w) {
            const ReceptionMatrix m = build_reception_matrix(layout.positions, spec.channel(power));
            const CsvRow base = detail::base_row(spec, layout, power, m);

            std::optional<BoundResult> bound;
            try {
                bound = expected_stopping_bound(m);
            } catch (const disconnected_network&) {
                if (cmd == Command::bound) {
                    throw disconnected_network(layout.label + " N=" + std::to_string(layout.n) +
                                               " power_w=" + format_double(power) + ": no link has P_uv > 0");
                }
            }
            if (bound && sinks.verbose) detail::dump_stages(*sinks.verbose, layout, power, *bound);

            auto with_bound = [&](CsvRow r) {
                r.bound_degenerate = !bound || bound->degenerate;
                if (!r.bound_degenerate) r.bound_slots = bound->value;
                return r;
            };

            if (cmd == Command::bound) {
                CsvRow r = with_bound(base);
                r.protocol = "bound";
                report.rows.push_back(std::move(r));
                continue;
            }

            const std::size_t first = report.rows.size();
            for (Protocol p : spec.protocols) {
                const ExperimentResult result = run_experiment(m, spec.sim_config(p));
                const ExperimentSummary& s = result.summary;
                CsvRow r = with_bound(base);
                r.protocol = std::string(to_string(p));
                r.trials = s.trials;
                if (!s.degenerate) {
                    r.mean_slots = s.mean;
                    r.std_slots = s.std_dev;
                    r.ci95_lo = s.ci95_lo;
                    r.ci95_hi = s.ci95_hi;
                }
                if (s.incomplete_count > 0) {
                    report.failures.push_back(detail::describe(r) + ": " + std::to_string(s.incomplete_count) + " of " +
                                              std::to_string(s.trials) + " trials hit the slot cap");
                }
                if (s.decode_failures > 0) {
                    report.failures.push_back(detail::describe(r) + ": " + std::to_string(s.decode_failures) +
                                              " completed trials failed to decode");
                }
                if (sinks.trace) detail::write_trace(*sinks.trace, r, result);
                report.rows.push_back(std::move(r));
            }

            if (report.with_ratio) {
                std::optional<double> nc, baseline;
                for (std::size_t i = first; i < report.rows.size(); ++i) {
                    const auto& r = report.rows[i];
                    (r.protocol == to_string(Protocol::network_coding) ? nc : baseline) = r.mean_slots;
                }
                if (nc && baseline && *nc > 0.0) {
                    for (std::size_t i = first; i < report.rows.size(); ++i) report.rows[i].ratio = *baseline / *nc;
                }
            }
        }
    }
    return report;
}

inline void write_report(std::ostream& out, const Report& report) {
    write_header(out, report.with_ratio);
    for (const auto& r : report.rows) write_row(out, r, report.with_ratio);
}

}  // namespace ncdiss::cli
