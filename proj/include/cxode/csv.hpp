#ifndef CXODE_CSV_HPP
#define CXODE_CSV_HPP

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "cxode/metrics.hpp"

namespace cxode {

// Shortest decimal representation that round-trips the exact binary value.
inline std::string format_double(double x) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s) {
    double out = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    if (res.ec != std::errc())
        throw InvalidParameter("csv: cannot parse number '" + std::string(s) + "'");
    return out;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

namespace detail {

inline std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InvalidParameter("cannot open output file '" + path + "'");
    return out;
}

}  // namespace detail

// Schema: t,tau,y_0,...,y_{d-1},err_est,exact_err with exact_err left empty
// when unknown.
inline void write_trace_csv(std::ostream& out, const IntegrationTrace& trace, int dimension) {
    out << "t,tau";
    for (int i = 0; i < dimension; ++i) out << ",y_" << i;
    out << ",err_est,exact_err\n";
    for (const TraceRecord& rec : trace.records) {
        out << format_double(rec.t) << ',' << format_double(rec.tau);
        for (int i = 0; i < dimension; ++i) out << ',' << format_double(rec.state(i));
        out << ',' << format_double(rec.err_est) << ',';
        if (!std::isnan(rec.exact_err)) out << format_double(rec.exact_err);
        out << '\n';
    }
}

inline void write_trace_csv(const std::string& path, const IntegrationTrace& trace,
                            int dimension) {
    std::ofstream out = detail::open_out(path);
    write_trace_csv(out, trace, dimension);
}

inline IntegrationTrace read_trace_csv(std::istream& in) {
    IntegrationTrace trace;
    std::string line;
    if (!std::getline(in, line)) throw InvalidParameter("csv: empty trace file");
    const auto header = split_csv_line(line);
    if (header.size() < 4 || header[0] != "t")
        throw InvalidParameter("csv: unexpected trace header");
    const int dimension = static_cast<int>(header.size()) - 4;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != header.size())
            throw InvalidParameter("csv: ragged trace row");
        TraceRecord rec;
        rec.t = parse_double(fields[0]);
        rec.tau = parse_double(fields[1]);
        rec.state.resize(dimension);
        for (int i = 0; i < dimension; ++i) rec.state(i) = parse_double(fields[2 + i]);
        rec.err_est = parse_double(fields[2 + dimension]);
        const std::string& last = fields[3 + dimension];
        rec.exact_err = last.empty() ? std::numeric_limits<double>::quiet_NaN()
                                     : parse_double(last);
        rec.estimated_state = rec.state;
        trace.records.push_back(std::move(rec));
    }
    trace.accepted = trace.records.empty() ? 0 : long(trace.records.size()) - 1;
    return trace;
}

inline IntegrationTrace read_trace_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidParameter("cannot open trace file '" + path + "'");
    return read_trace_csv(in);
}

// Row-major over the grid: x varies in the outer loop.
inline void write_stability_csv(std::ostream& out, const StabilityGrid& base,
                                const StabilityGrid& composed) {
    if (base.nx != composed.nx || base.ny != composed.ny)
        throw InvalidParameter("stability csv: grid shapes differ");
    out << "x,y,mag_base,mag_composed\n";
    for (int i = 0; i < base.nx; ++i)
        for (int j = 0; j < base.ny; ++j) {
            const Complex z = base.node(i, j);
            out << format_double(z.real()) << ',' << format_double(z.imag()) << ','
                << format_double(base.at(i, j)) << ',' << format_double(composed.at(i, j))
                << '\n';
        }
}

inline void write_stability_csv(const std::string& path, const StabilityGrid& base,
                                const StabilityGrid& composed) {
    std::ofstream out = detail::open_out(path);
    write_stability_csv(out, base, composed);
}

inline void write_convergence_csv(std::ostream& out, const ConvergenceReport& report) {
    out << "tau,global_error,roc,rhs_evals,wall_time\n";
    for (std::size_t i = 0; i < report.taus.size(); ++i) {
        out << format_double(report.taus[i]) << ',' << format_double(report.global_errors[i])
            << ',';
        if (i > 0) out << format_double(report.roc_values[i - 1]);
        out << ',' << report.rhs_eval_counts[i] << ',' << format_double(report.wall_times[i])
            << '\n';
    }
}

inline void write_convergence_csv(const std::string& path, const ConvergenceReport& report) {
    std::ofstream out = detail::open_out(path);
    write_convergence_csv(out, report);
}

inline void write_comparison_csv(std::ostream& out, const std::vector<ComparisonRow>& rows) {
    out << "scheme,mode,tau,global_error,global_ratio,steps,rhs_evals,wall_time\n";
    for (const ComparisonRow& row : rows) {
        out << row.scheme << ',' << row.mode << ',' << format_double(row.tau) << ','
            << format_double(row.global_error) << ',';
        if (!std::isnan(row.ratio)) out << format_double(row.ratio);
        out << ',' << row.steps << ',' << row.rhs_evals << ',' << format_double(row.wall_time)
            << '\n';
    }
}

inline void write_comparison_csv(const std::string& path,
                                 const std::vector<ComparisonRow>& rows) {
    std::ofstream out = detail::open_out(path);
    write_comparison_csv(out, rows);
}

}  // namespace cxode

#endif
