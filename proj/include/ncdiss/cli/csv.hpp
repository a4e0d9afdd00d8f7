#pragma once

// Result rows. Column order is fixed:
//
//   topology,N,d,power_w,noise_w,z_db,eta,q,protocol,trials,mean_slots,
//   std_slots,ci95_lo,ci95_hi,bound_slots,bound_degenerate,
//   connectivity_class,seed
//
// `compare` appends a ratio column (baseline mean / nc mean). Empty cells
// mean "not available": d for position files, the statistics of an
// experiment in which no trial completed, bound_slots when the bound is
// degenerate, and the statistics of rows written by `bound` (protocol
// "bound", trials 0). Doubles use the shortest round-trip representation.

#include <charconv>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "ncdiss/errors.hpp"

namespace ncdiss::cli {

inline constexpr std::string_view csv_header =
    "topology,N,d,power_w,noise_w,z_db,eta,q,protocol,trials,mean_slots,std_slots,ci95_lo,ci95_hi,"
    "bound_slots,bound_degenerate,connectivity_class,seed";

struct CsvRow {
    std::string topology;
    std::size_t n = 0;
    std::optional<double> d;
    double power_w = 0.0;
    double noise_w = 0.0;
    double z_db = 0.0;
    double eta = 0.0;
    unsigned q = 0;
    std::string protocol;
    std::size_t trials = 0;
    std::optional<double> mean_slots;
    std::optional<double> std_slots;
    std::optional<double> ci95_lo;
    std::optional<double> ci95_hi;
    std::optional<double> bound_slots;
    bool bound_degenerate = false;
    std::string connectivity_class;
    std::uint64_t seed = 0;
    std::optional<double> ratio;

    friend bool operator==(const CsvRow&, const CsvRow&) = default;
};

inline std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline std::string format_optional(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

inline void write_header(std::ostream& out, bool with_ratio) {
    out << csv_header << (with_ratio ? ",ratio\n" : "\n");
}

inline void write_row(std::ostream& out, const CsvRow& r, bool with_ratio) {
    out << r.topology << ',' << r.n << ',' << format_optional(r.d) << ',' << format_double(r.power_w) << ','
        << format_double(r.noise_w) << ',' << format_double(r.z_db) << ',' << format_double(r.eta) << ',' << r.q
        << ',' << r.protocol << ',' << r.trials << ',' << format_optional(r.mean_slots) << ','
        << format_optional(r.std_slots) << ',' << format_optional(r.ci95_lo) << ',' << format_optional(r.ci95_hi)
        << ',' << format_optional(r.bound_slots) << ',' << (r.bound_degenerate ? "true" : "false") << ','
        << r.connectivity_class << ',' << r.seed;
    if (with_ratio) out << ',' << format_optional(r.ratio);
    out << '\n';
}

namespace detail {

inline std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto comma = line.find(',', start);
        out.push_back(line.substr(start, comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

template <class T>
T parse_field(std::string_view s, std::string_view column) {
    T v{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
        throw config_error("bad value '" + std::string(s) + "' in column " + std::string(column));
    }
    return v;
}

inline std::optional<double> parse_optional(std::string_view s, std::string_view column) {
    if (s.empty()) return std::nullopt;
    return parse_field<double>(s, column);
}

}  // namespace detail

/// Parses a file written by write_header/write_row.
inline std::vector<CsvRow> read_rows(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw config_error("empty result file");
    bool with_ratio = false;
    if (line == std::string(csv_header) + ",ratio") {
        with_ratio = true;
    } else if (line != csv_header) {
        throw config_error("unexpected result header '" + line + "'");
    }
    const std::size_t columns = with_ratio ? 19 : 18;
    std::vector<CsvRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = detail::split_fields(line);
        if (f.size() != columns) throw config_error("result row has " + std::to_string(f.size()) + " fields");
        using detail::parse_field;
        using detail::parse_optional;
        CsvRow r;
        r.topology = std::string(f[0]);
        r.n = parse_field<std::size_t>(f[1], "N");
        r.d = parse_optional(f[2], "d");
        r.power_w = parse_field<double>(f[3], "power_w");
        r.noise_w = parse_field<double>(f[4], "noise_w");
        r.z_db = parse_field<double>(f[5], "z_db");
        r.eta = parse_field<double>(f[6], "eta");
        r.q = parse_field<unsigned>(f[7], "q");
        r.protocol = std::string(f[8]);
        r.trials = parse_field<std::size_t>(f[9], "trials");
        r.mean_slots = parse_optional(f[10], "mean_slots");
        r.std_slots = parse_optional(f[11], "std_slots");
        r.ci95_lo = parse_optional(f[12], "ci95_lo");
        r.ci95_hi = parse_optional(f[13], "ci95_hi");
        r.bound_slots = parse_optional(f[14], "bound_slots");
        if (f[15] != "true" && f[15] != "false") throw config_error("bad bound_degenerate value");
        r.bound_degenerate = f[15] == "true";
        r.connectivity_class = std::string(f[16]);
        r.seed = parse_field<std::uint64_t>(f[17], "seed");
        if (with_ratio) r.ratio = parse_optional(f[18], "ratio");
        rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace ncdiss::cli
