#ifndef CXODE_METRICS_HPP
#define CXODE_METRICS_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cxode/problems.hpp"
#include "cxode/stability.hpp"

namespace cxode {

namespace detail {

// March a flow over a uniform grid without recording, landing exactly on t_end.
inline StateVec advance_fixed(const Flow& flow, const OdeProblem& prob, double t0,
                              const StateVec& y0, double tau, double t_end) {
    const FixedGrid grid = fixed_grid(t0, t_end, tau);
    StateVec y = y0;
    StateVec carry = StateVec::Zero(y.size());
    const long total = grid.full_steps + (grid.remainder > 0.0 ? 1 : 0);
    for (long n = 0; n < total; ++n) {
        const double h = n == grid.full_steps ? grid.remainder : tau;
        StepResult step = flow(prob, Complex(t0 + n * tau), y, Complex(h));
        compensated_advance(y, carry, step.state);
    }
    return y;
}

}  // namespace detail

// Trapezoid-weighted global error: interior records weighted by their own
// step, the final record by half of it. The leading record (initial state)
// is skipped.
inline double global_error(const IntegrationTrace& trace, const ExactFn& exact) {
    double acc = 0.0;
    double carry = 0.0;
    const std::size_t n = trace.records.size();
    for (std::size_t i = 1; i < n; ++i) {
        const TraceRecord& rec = trace.records[i];
        const double w = i + 1 == n ? 0.5 * rec.tau : rec.tau;
        const double term = w * (rec.state - exact(rec.t)).norm() - carry;
        const double next = acc + term;
        carry = (next - acc) - term;
        acc = next;
    }
    return acc;
}

// log10 error ratios over log10 step ratios for consecutive pairs; NaN where
// an error vanishes exactly.
inline std::vector<double> roc_sequence(const std::vector<double>& errors,
                                        const std::vector<double>& taus) {
    if (errors.size() != taus.size() || errors.size() < 2)
        throw InvalidParameter("roc_sequence: need matching sequences of length >= 2");
    std::vector<double> out;
    out.reserve(errors.size() - 1);
    for (std::size_t j = 0; j + 1 < errors.size(); ++j) {
        if (errors[j] == 0.0 || errors[j + 1] == 0.0) {
            out.push_back(std::numeric_limits<double>::quiet_NaN());
            continue;
        }
        out.push_back(std::log10(errors[j + 1] / errors[j]) /
                      std::log10(taus[j + 1] / taus[j]));
    }
    return out;
}

// Trapezoid-weighted integral of exact-over-estimate ratios. Estimates are
// floored to keep the quotient finite.
inline double global_ratio(const std::vector<double>& exact_errors,
                           const std::vector<double>& estimates,
                           const std::vector<double>& taus) {
    if (exact_errors.size() != estimates.size() || estimates.size() != taus.size())
        throw InvalidParameter("global_ratio: sequence lengths differ");
    double acc = 0.0;
    const std::size_t n = exact_errors.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double w = i + 1 == n ? 0.5 * taus[i] : taus[i];
        const double est = std::max(estimates[i], std::numeric_limits<double>::min());
        acc += w * (exact_errors[i] / est);
    }
    return acc;
}

inline std::vector<double> record_estimates(const IntegrationTrace& trace) {
    std::vector<double> out;
    for (std::size_t i = 1; i < trace.records.size(); ++i)
        out.push_back(trace.records[i].err_est);
    return out;
}

inline std::vector<double> record_taus(const IntegrationTrace& trace) {
    std::vector<double> out;
    for (std::size_t i = 1; i < trace.records.size(); ++i)
        out.push_back(trace.records[i].tau);
    return out;
}

// Pointwise trajectory errors ||y_n - y(t_n)||, skipping the initial record.
inline std::vector<double> trajectory_errors(const IntegrationTrace& trace,
                                             const ExactFn& exact) {
    std::vector<double> out;
    for (std::size_t i = 1; i < trace.records.size(); ++i)
        out.push_back((trace.records[i].state - exact(trace.records[i].t)).norm());
    return out;
}

// Per-step local error of the solution object the estimator refers to: the
// exact flow is launched from the previous trace state and compared with
// estimated_state (the embedded companion for embedded runs).
inline std::vector<double> local_errors_of_estimate(const IntegrationTrace& trace,
                                                    const ProblemSpec& spec) {
    if (!spec.ode.exact_flow)
        throw UnsupportedProblem("local error oracle needs an exact flow for '" +
                                 spec.ode.label + "'");
    std::vector<double> out;
    for (std::size_t i = 1; i < trace.records.size(); ++i) {
        const TraceRecord& prev = trace.records[i - 1];
        const TraceRecord& cur = trace.records[i];
        const RealVec truth = spec.ode.exact_flow(prev.t, prev.state, cur.t);
        out.push_back((cur.estimated_state - truth).norm());
    }
    return out;
}

// States of the problem's fixed-step reference run sampled at the given
// (ascending) times.
inline std::vector<RealVec> reference_states(const ProblemSpec& spec,
                                             const std::vector<double>& times) {
    if (!spec.reference)
        throw UnsupportedProblem("problem '" + spec.ode.label + "' declares no reference method");
    const Flow flow = make_rk_flow(make_tableau(spec.reference->scheme));
    std::vector<RealVec> out;
    out.reserve(times.size());
    StateVec y = spec.y0.cast<Complex>();
    double t = spec.t0;
    for (double target : times) {
        if (target < t - 1e-12)
            throw InvalidParameter("reference_states: times must be ascending");
        if (target > t + 1e-14)
            y = detail::advance_fixed(flow, spec.ode, t, y, spec.reference->tau, target);
        t = target;
        out.push_back(y.real());
    }
    return out;
}

// Fill the exact_err column from the closed-form solution when available,
// otherwise from the declared reference run.
inline void annotate_errors(IntegrationTrace& trace, const ProblemSpec& spec) {
    if (trace.records.empty()) return;
    if (spec.ode.exact_solution) {
        for (TraceRecord& rec : trace.records)
            rec.exact_err = (rec.state - spec.ode.exact_solution(rec.t)).norm();
        return;
    }
    std::vector<double> times;
    times.reserve(trace.records.size());
    for (const TraceRecord& rec : trace.records) times.push_back(rec.t);
    const std::vector<RealVec> ref = reference_states(spec, times);
    for (std::size_t i = 0; i < trace.records.size(); ++i)
        trace.records[i].exact_err = (trace.records[i].state - ref[i]).norm();
}

// ---- scheme tokens ----------------------------------------------------

// Token grammar: an optional leading 'c' marks the double composition;
// the rest is a tableau name or bpl<p>.
struct SchemeSpec {
    std::string token;
    bool composed = false;
    bool bpl = false;
    int bpl_order = 0;
    std::string tableau;  // empty for bpl schemes
};

inline SchemeSpec parse_scheme(const std::string& token,
                               std::optional<double> rk2_alpha = std::nullopt) {
    SchemeSpec out;
    out.token = token;
    std::string rest = token;
    if (!rest.empty() && rest[0] == 'c') {
        out.composed = true;
        rest.erase(0, 1);
    }
    if (rest.rfind("bpl", 0) == 0) {
        out.bpl = true;
        try {
            out.bpl_order = std::stoi(rest.substr(3));
        } catch (const std::exception&) {
            throw UnknownScheme("unknown scheme '" + token + "'");
        }
        if (out.bpl_order < 1) throw UnknownScheme("unknown scheme '" + token + "'");
        return out;
    }
    make_tableau(rest, rk2_alpha);  // validates the name
    out.tableau = rest;
    return out;
}

inline Flow make_base_flow(const SchemeSpec& scheme,
                           std::optional<double> rk2_alpha = std::nullopt,
                           int gauss_points = 20) {
    if (scheme.bpl) return make_bpl_flow(scheme.bpl_order, gauss_points);
    return make_rk_flow(make_tableau(scheme.tableau, rk2_alpha));
}

inline IntegrationTrace run_fixed_scheme(const SchemeSpec& scheme, const ProblemSpec& spec,
                                         double tau,
                                         std::optional<double> rk2_alpha = std::nullopt) {
    if (scheme.composed) {
        const ComposedFlow flow(make_base_flow(scheme, rk2_alpha));
        return integrate_fixed(flow, spec.ode, spec.t0, spec.y0, tau, spec.t_end);
    }
    if (!scheme.bpl) {
        const ButcherTableau tab = make_tableau(scheme.tableau, rk2_alpha);
        if (tab.b_star)
            return integrate_fixed_embedded(tab, spec.ode, spec.t0, spec.y0, tau, spec.t_end);
    }
    return integrate_fixed(make_base_flow(scheme, rk2_alpha), spec.ode, spec.t0, spec.y0, tau,
                           spec.t_end);
}

inline IntegrationTrace run_adaptive_scheme(const SchemeSpec& scheme, const ProblemSpec& spec,
                                            AdaptiveConfig cfg,
                                            std::optional<double> rk2_alpha = std::nullopt) {
    if (!scheme.composed)
        throw InvalidParameter("adaptive stepping uses the composed estimator; scheme '" +
                               scheme.token + "' is not composed");
    cfg.t_end = spec.t_end;
    const ComposedFlow flow(make_base_flow(scheme, rk2_alpha));
    return integrate_adaptive(flow, spec.ode, spec.t0, spec.y0, cfg);
}

// ---- study drivers -----------------------------------------------------

struct ConvergenceReport {
    std::vector<double> taus;
    std::vector<double> global_errors;
    std::vector<double> roc_values;  // one fewer than taus
    std::vector<long> rhs_eval_counts;
    std::vector<double> wall_times;
};

inline ConvergenceReport run_convergence_study(const SchemeSpec& scheme,
                                               const ProblemSpec& spec,
                                               const std::vector<double>& taus) {
    ConvergenceReport report;
    report.taus = taus;
    for (double tau : taus) {
        IntegrationTrace trace = run_fixed_scheme(scheme, spec, tau);
        annotate_errors(trace, spec);
        double acc = 0.0;
        const std::size_t n = trace.records.size();
        for (std::size_t i = 1; i < n; ++i) {
            const double w = i + 1 == n ? 0.5 * trace.records[i].tau : trace.records[i].tau;
            acc += w * trace.records[i].exact_err;
        }
        report.global_errors.push_back(acc);
        report.rhs_eval_counts.push_back(trace.total_rhs_evals);
        report.wall_times.push_back(trace.wall_time);
    }
    if (taus.size() >= 2) report.roc_values = roc_sequence(report.global_errors, taus);
    return report;
}

struct ComparisonRow {
    std::string scheme;
    std::string mode;  // "tau=<value>" or "adaptive"
    double tau = 0.0;
    double global_error = std::numeric_limits<double>::quiet_NaN();
    double ratio = std::numeric_limits<double>::quiet_NaN();
    long rhs_evals = 0;
    long steps = 0;
    double wall_time = 0.0;
};

inline ComparisonRow summarize_run(const SchemeSpec& scheme, const ProblemSpec& spec,
                                   IntegrationTrace& trace, double tau,
                                   const std::string& mode) {
    ComparisonRow row;
    row.scheme = scheme.token;
    row.mode = mode;
    row.tau = tau;
    annotate_errors(trace, spec);
    double acc = 0.0;
    const std::size_t n = trace.records.size();
    for (std::size_t i = 1; i < n; ++i) {
        const double w = i + 1 == n ? 0.5 * trace.records[i].tau : trace.records[i].tau;
        acc += w * trace.records[i].exact_err;
    }
    row.global_error = acc;
    row.rhs_evals = trace.total_rhs_evals;
    row.steps = trace.accepted;
    row.wall_time = trace.wall_time;
    const std::vector<double> est = record_estimates(trace);
    const bool has_estimates =
        std::any_of(est.begin(), est.end(), [](double e) { return e > 0.0; });
    if (has_estimates && spec.ode.exact_flow) {
        row.ratio = global_ratio(local_errors_of_estimate(trace, spec), est,
                                 record_taus(trace));
    }
    return row;
}

using ComparisonGrid = std::variant<std::vector<double>, AdaptiveConfig>;

// Run every scheme on the same grids (or the same adaptive settings) and
// tabulate error, estimator ratio, and cost counters.
inline std::vector<ComparisonRow> run_comparison(const std::vector<SchemeSpec>& schemes,
                                                 const ProblemSpec& spec,
                                                 const ComparisonGrid& grid) {
    std::vector<ComparisonRow> rows;
    if (const auto* taus = std::get_if<std::vector<double>>(&grid)) {
        for (const SchemeSpec& scheme : schemes)
            for (double tau : *taus) {
                IntegrationTrace trace = run_fixed_scheme(scheme, spec, tau);
                rows.push_back(summarize_run(scheme, spec, trace, tau,
                                             "tau=" + std::to_string(tau)));
            }
        return rows;
    }
    const AdaptiveConfig& cfg = std::get<AdaptiveConfig>(grid);
    for (const SchemeSpec& scheme : schemes) {
        IntegrationTrace trace = run_adaptive_scheme(scheme, spec, cfg);
        rows.push_back(summarize_run(scheme, spec, trace, cfg.tau0, "adaptive"));
    }
    return rows;
}

}  // namespace cxode

#endif
