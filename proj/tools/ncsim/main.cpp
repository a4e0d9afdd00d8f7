// ncsim: batch runner for the dissemination simulator and the stopping-time bound.
//
// Exit status: 0 when every requested experiment completed, 1 when some
// trials hit the slot cap or failed to decode (listed on stderr), 2 on an
// invalid spec or a network the bound cannot handle.

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ncdiss/cli/commands.hpp"

namespace {

using namespace ncdiss;
using namespace ncdiss::cli;

struct Flags {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> trials;
    std::optional<std::string> out;
    std::optional<std::string> topology;
    std::optional<double> d;
    std::vector<std::size_t> sizes;
    std::vector<std::string> grid;
    std::optional<std::string> positions;
    std::vector<double> power_dbm;
    std::vector<double> power_w;
    std::optional<double> noise;
    std::optional<double> z_db;
    std::optional<double> eta;
    std::optional<unsigned> q;
    std::optional<std::size_t> r;
    std::optional<std::string> protocol;
    std::optional<std::uint64_t> max_slots;
    std::optional<unsigned> workers;
    bool skip_idle = false;
    bool trace = false;
    bool verbose = false;
};

void add_flags(CLI::App& cmd, Flags& f) {
    cmd.add_option("--config", f.config, "JSON experiment spec; flags override its fields");
    cmd.add_option("--seed", f.seed, "master seed (fallback: NCSIM_SEED)");
    cmd.add_option("--trials", f.trials, "trials per experiment");
    cmd.add_option("--out", f.out, "CSV output path (default: stdout)");
    cmd.add_option("--topology", f.topology, "line, grid or file")->check(CLI::IsMember({"line", "grid", "file"}));
    cmd.add_option("--d", f.d, "node spacing in meters");
    cmd.add_option("--sizes", f.sizes, "network sizes, comma separated")->delimiter(',');
    cmd.add_option("--grid", f.grid, "grid shapes RxC, comma separated")->delimiter(',');
    cmd.add_option("--positions", f.positions, "CSV node_id,x,y for --topology file");
    cmd.add_option("--power-dbm", f.power_dbm, "transmit powers in dBm, comma separated")->delimiter(',');
    cmd.add_option("--power-w", f.power_w, "transmit powers in watts, comma separated")->delimiter(',');
    cmd.add_option("--noise", f.noise, "noise power N0 in watts");
    cmd.add_option("--z-db", f.z_db, "capture threshold in dB");
    cmd.add_option("--eta", f.eta, "path loss exponent");
    cmd.add_option("--q", f.q, "field width in bits (1, 4, 8, 16)");
    cmd.add_option("--r", f.r, "payload symbols per packet");
    cmd.add_option("--protocol", f.protocol, "nc, baseline or both")
        ->check(CLI::IsMember({"nc", "baseline", "random_selection", "both"}));
    cmd.add_option("--max-slots", f.max_slots, "per-trial slot cap (0: 50 N^2)");
    cmd.add_option("--workers", f.workers, "worker threads");
    cmd.add_flag("--skip-idle", f.skip_idle, "jump over idle slots (same distribution, faster when P is small)");
    cmd.add_flag("--trace", f.trace, "write dimension traces to <out>.trace.csv");
    cmd.add_flag("--verbose", f.verbose, "print exact per-stage bound terms to stderr");
}

ExperimentSpec build_spec(const Flags& f) {
    // seed precedence: --seed, then the config file, then NCSIM_SEED
    ExperimentSpec defaults;
    if (const char* env = std::getenv("NCSIM_SEED")) {
        const std::string_view text(env);
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), defaults.seed);
        if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
            throw config_error("NCSIM_SEED is not an unsigned integer: '" + std::string(text) + "'");
        }
    }
    ExperimentSpec s = f.config.empty() ? defaults : load_spec(f.config, defaults);
    if (f.seed) s.seed = *f.seed;
    if (f.trials) s.trials = *f.trials;
    if (f.out) s.out = *f.out;
    if (f.topology) s.topology = parse_topology_kind(*f.topology);
    if (f.d) s.d = *f.d;
    if (!f.sizes.empty()) s.sizes = f.sizes;
    if (!f.grid.empty()) {
        s.grid.clear();
        for (const auto& g : f.grid) s.grid.push_back(parse_grid_shape(g));
    }
    if (f.positions) s.positions_path = *f.positions;
    if (!f.power_dbm.empty() && !f.power_w.empty()) throw config_error("give --power-dbm or --power-w, not both");
    if (!f.power_dbm.empty()) {
        s.power_w.clear();
        for (double dbm : f.power_dbm) s.power_w.push_back(dbm_to_watts(dbm));
    }
    if (!f.power_w.empty()) s.power_w = f.power_w;
    if (f.noise) s.noise_w = *f.noise;
    if (f.z_db) s.z_db = *f.z_db;
    if (f.eta) s.eta = *f.eta;
    if (f.q) s.q = *f.q;
    if (f.r) s.r = *f.r;
    if (f.protocol) s.protocols = parse_protocol_set(*f.protocol);
    if (f.max_slots) s.max_slots = *f.max_slots;
    if (f.workers) s.workers = *f.workers;
    if (f.skip_idle) s.skip_idle = true;
    if (f.trace) s.trace = true;
    s.finalize();
    return s;
}

int run(Command cmd, const Flags& flags) {
    try {
        const ExperimentSpec spec = build_spec(flags);
        std::ofstream trace_file;
        Sinks sinks;
        if (spec.trace && cmd != Command::bound) {
            trace_file.open(spec.out + ".trace.csv");
            if (!trace_file) throw config_error("cannot write " + spec.out + ".trace.csv");
            sinks.trace = &trace_file;
        }
        if (flags.verbose) sinks.verbose = &std::cerr;

        const Report report = run_command(cmd, spec, sinks);
        if (spec.out.empty()) {
            write_report(std::cout, report);
        } else {
            std::ofstream out(spec.out);
            if (!out) throw config_error("cannot write " + spec.out);
            write_report(out, report);
        }
        for (const auto& f : report.failures) std::cerr << "incomplete: " << f << '\n';
        return report.failures.empty() ? 0 : 1;
    } catch (const config_error& e) {
        std::cerr << "ncsim " << to_string(cmd) << ": " << e.what() << '\n';
    } catch (const disconnected_network& e) {
        std::cerr << "ncsim " << to_string(cmd) << ": disconnected network: " << e.what() << '\n';
    }
    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"RLNC all-to-all dissemination simulator"};
    app.require_subcommand(1);
    Flags flags;
    const std::pair<Command, const char*> commands[] = {
        {Command::sweep_n, "one row per (size, protocol) at a fixed power"},
        {Command::sweep_power, "one row per (power, protocol) at a fixed size"},
        {Command::compare, "coded vs random selection with a baseline/nc ratio column"},
        {Command::bound, "analytic stopping-time bound only"},
        {Command::simulate, "a single configuration"},
    };
    std::vector<std::pair<CLI::App*, Command>> subs;
    for (const auto& [cmd, help] : commands) {
        CLI::App* sub = app.add_subcommand(std::string(to_string(cmd)), help);
        add_flags(*sub, flags);
        subs.emplace_back(sub, cmd);
    }
    CLI11_PARSE(app, argc, argv);
    for (const auto& [sub, cmd] : subs) {
        if (sub->parsed()) return run(cmd, flags);
    }
    return 2;
}
