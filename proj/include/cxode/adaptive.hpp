#ifndef CXODE_ADAPTIVE_HPP
#define CXODE_ADAPTIVE_HPP

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <vector>

#include "cxode/bpl.hpp"
#include "cxode/composition.hpp"

namespace cxode {

struct AdaptiveConfig {
    double tol = 1e-8;
    double safety = 0.9;  // C
    double tau0 = 1e-2;
    double tau_min = 1e-12;
    double tau_max = std::numeric_limits<double>::infinity();
    double growth_cap = 5.0;
    double t_end = 1.0;

    void validate() const {
        if (!(tol > 0.0)) throw InvalidParameter("adaptive: tol must be positive");
        if (!(safety > 0.0 && safety <= 1.0))
            throw InvalidParameter("adaptive: safety factor must lie in (0, 1]");
        if (!(tau_min <= tau0 && tau0 <= tau_max))
            throw InvalidParameter("adaptive: need tau_min <= tau0 <= tau_max");
        if (!(growth_cap > 1.0)) throw InvalidParameter("adaptive: growth cap must exceed 1");
    }
};

struct TraceRecord {
    double t = 0.0;
    double tau = 0.0;
    RealVec state;
    double err_est = 0.0;
    long rhs_evals = 0;
    // trajectory error against the problem's exact solution, NaN when unknown
    double exact_err = std::numeric_limits<double>::quiet_NaN();
    // the solution object err_est refers to (embedded companion for embedded
    // runs, the approximation itself otherwise)
    RealVec estimated_state;
};

struct IntegrationTrace {
    std::vector<TraceRecord> records;  // leading record holds the initial state
    long accepted = 0;
    long total_rhs_evals = 0;
    long residual_evaluations = 0;
    double wall_time = 0.0;
};

// C * tau * (tol/err)^(1/(p+1)), clamped to the per-step growth window and to
// the global [tau_min, tau_max] range.
inline double update_step(double tau, double tol, double err_est, int p,
                          const AdaptiveConfig& cfg) {
    const double raw = cfg.safety * tau * std::pow(tol / err_est, 1.0 / (p + 1));
    const double capped = std::clamp(raw, tau / cfg.growth_cap, tau * cfg.growth_cap);
    return std::clamp(capped, cfg.tau_min, cfg.tau_max);
}

inline double estimate_floor(double err_est, const RealVec& y) {
    return std::max(err_est, 1e-16 * (1.0 + y.norm()));
}

namespace detail {

class WallClock {
  public:
    double elapsed() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

  private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

// Step counts for a uniform grid; the remainder becomes a truncated final step.
struct FixedGrid {
    long full_steps;
    double remainder;
};

inline FixedGrid fixed_grid(double t0, double t_end, double tau) {
    if (!(tau > 0.0)) throw InvalidParameter("integrate_fixed: tau must be positive");
    const double span = t_end - t0;
    if (span <= 0.0) return {0, 0.0};
    const double ratio = span / tau;
    const long rounded = std::lround(ratio);
    if (rounded >= 1 && std::abs(rounded * tau - span) <= 1e-9 * std::max(1.0, span))
        return {rounded, 0.0};
    const long full = static_cast<long>(ratio);
    return {full, span - full * tau};
}

// Increment accumulation with a compensation term; keeps the trajectory
// roundoff growth down on long uniform runs.
template <typename Vec>
inline void compensated_advance(Vec& y, Vec& carry, const Vec& next) {
    const Vec delta = (next - y) + carry;
    const Vec updated = y + delta;
    carry = delta - (updated - y);
    y = updated;
}

inline void push_initial(IntegrationTrace& trace, double t0, const RealVec& y0) {
    TraceRecord rec;
    rec.t = t0;
    rec.tau = 0.0;
    rec.state = y0;
    rec.estimated_state = y0;
    trace.records.push_back(std::move(rec));
}

}  // namespace detail

// Uniform-step integration with a plain one-step flow. The error-estimate
// column stays zero (there is no estimator).
inline IntegrationTrace integrate_fixed(const Flow& flow, const OdeProblem& prob, double t0,
                                        const RealVec& y0, double tau, double t_end) {
    detail::WallClock clock;
    IntegrationTrace trace;
    const auto grid = detail::fixed_grid(t0, t_end, tau);
    const long total = grid.full_steps + (grid.remainder > 0.0 ? 1 : 0);
    if (total == 0) return trace;
    detail::push_initial(trace, t0, y0);
    StateVec y = y0.cast<Complex>();
    StateVec carry = StateVec::Zero(y.size());
    for (long n = 0; n < total; ++n) {
        const bool last_partial = n == grid.full_steps;
        const double h = last_partial ? grid.remainder : tau;
        const double t = t0 + n * tau;
        StepResult step = flow(prob, Complex(t), y, Complex(h));
        detail::compensated_advance(y, carry, step.state);
        TraceRecord rec;
        rec.t = last_partial ? t_end : t0 + (n + 1) * tau;
        rec.tau = h;
        rec.state = y.real();
        rec.rhs_evals = step.rhs_evaluations;
        rec.estimated_state = rec.state;
        trace.total_rhs_evals += step.rhs_evaluations;
        trace.records.push_back(std::move(rec));
    }
    trace.accepted = total;
    trace.wall_time = clock.elapsed();
    return trace;
}

// Uniform-step integration with the composed flow; err_est is the scaled
// imaginary-part estimate of each step.
inline IntegrationTrace integrate_fixed(const ComposedFlow& flow, const OdeProblem& prob,
                                        double t0, const RealVec& y0, double tau,
                                        double t_end) {
    detail::WallClock clock;
    IntegrationTrace trace;
    const auto grid = detail::fixed_grid(t0, t_end, tau);
    const long total = grid.full_steps + (grid.remainder > 0.0 ? 1 : 0);
    if (total == 0) return trace;
    detail::push_initial(trace, t0, y0);
    RealVec y = y0;
    RealVec carry = RealVec::Zero(y.size());
    for (long n = 0; n < total; ++n) {
        const bool last_partial = n == grid.full_steps;
        const double h = last_partial ? grid.remainder : tau;
        const double t = t0 + n * tau;
        ComposedStepOutput out = flow.step(prob, t, y, h);
        detail::compensated_advance(y, carry, out.approx);
        TraceRecord rec;
        rec.t = last_partial ? t_end : t0 + (n + 1) * tau;
        rec.tau = h;
        rec.state = y;
        rec.err_est = out.error_estimate;
        rec.rhs_evals = out.rhs_evaluations;
        rec.estimated_state = rec.state;
        trace.total_rhs_evals += out.rhs_evaluations;
        trace.records.push_back(std::move(rec));
    }
    trace.accepted = total;
    trace.wall_time = clock.elapsed();
    return trace;
}

// Uniform-step integration with an embedded pair; err_est is the weighted
// stage difference and estimated_state the lower-order companion.
inline IntegrationTrace integrate_fixed_embedded(const ButcherTableau& tab,
                                                 const OdeProblem& prob, double t0,
                                                 const RealVec& y0, double tau,
                                                 double t_end) {
    detail::WallClock clock;
    IntegrationTrace trace;
    const auto grid = detail::fixed_grid(t0, t_end, tau);
    const long total = grid.full_steps + (grid.remainder > 0.0 ? 1 : 0);
    if (total == 0) return trace;
    detail::push_initial(trace, t0, y0);
    StateVec y = y0.cast<Complex>();
    StateVec carry = StateVec::Zero(y.size());
    for (long n = 0; n < total; ++n) {
        const bool last_partial = n == grid.full_steps;
        const double h = last_partial ? grid.remainder : tau;
        const double t = t0 + n * tau;
        EmbeddedResult out = embedded_step(tab, prob, Complex(t), y, Complex(h));
        detail::compensated_advance(y, carry, out.state);
        TraceRecord rec;
        rec.t = last_partial ? t_end : t0 + (n + 1) * tau;
        rec.tau = h;
        rec.state = y.real();
        rec.err_est = out.error_estimate;
        rec.rhs_evals = out.rhs_evaluations;
        rec.estimated_state = out.companion.real();
        trace.total_rhs_evals += out.rhs_evaluations;
        trace.records.push_back(std::move(rec));
    }
    trace.accepted = total;
    trace.wall_time = clock.elapsed();
    return trace;
}

// Accept-always adaptive loop: every step is taken with the current tau, the
// imaginary-part estimate (floored) drives the next step size, and the final
// step is truncated to land on t_end.
inline IntegrationTrace integrate_adaptive(const ComposedFlow& flow, const OdeProblem& prob,
                                           double t0, const RealVec& y0,
                                           AdaptiveConfig cfg) {
    if (std::isinf(cfg.tau_max)) cfg.tau_max = cfg.t_end - t0;
    cfg.validate();
    detail::WallClock clock;
    IntegrationTrace trace;
    if (!(cfg.t_end > t0)) return trace;
    detail::push_initial(trace, t0, y0);
    RealVec y = y0;
    double t = t0;
    double tau = std::clamp(cfg.tau0, cfg.tau_min, cfg.tau_max);
    const int p = flow.base_order();
    int at_floor = 0;
    while (t < cfg.t_end - cfg.tau_min) {
        const double h = std::min(tau, cfg.t_end - t);
        ComposedStepOutput out = flow.step(prob, t, y, h);
        y = out.approx;
        t += h;
        TraceRecord rec;
        rec.t = t;
        rec.tau = h;
        rec.state = y;
        rec.err_est = out.error_estimate;
        rec.rhs_evals = out.rhs_evaluations;
        rec.estimated_state = y;
        trace.total_rhs_evals += out.rhs_evaluations;
        trace.records.push_back(std::move(rec));
        ++trace.accepted;
        tau = update_step(h, cfg.tol, estimate_floor(out.error_estimate, y), p, cfg);
        at_floor = h <= cfg.tau_min * (1.0 + 1e-12) ? at_floor + 1 : 0;
        if (at_floor >= 100)
            throw StiffnessStall("adaptive step pinned at tau_min for 100 consecutive steps");
    }
    trace.wall_time = clock.elapsed();
    return trace;
}

// Residual-controlled stepping for the BPL flow: grow the candidate step by
// the factor `growth` while the residual stays below tol, accept the last
// step that satisfied it (shrink instead when the starting step fails).
inline IntegrationTrace integrate_residual_bpl(const OdeProblem& prob, int p, int gauss_points,
                                               double t0, const RealVec& y0, double tol,
                                               double tau_start, double growth, double t_end,
                                               double tau_min = 1e-12) {
    if (!(tol > 0.0)) throw InvalidParameter("residual stepping: tol must be positive");
    if (!(growth > 1.0)) throw InvalidParameter("residual stepping: growth factor must exceed 1");
    if (!(tau_start > 0.0)) throw InvalidParameter("residual stepping: tau_start must be positive");
    detail::WallClock clock;
    IntegrationTrace trace;
    if (!(t_end > t0)) return trace;
    detail::push_initial(trace, t0, y0);
    StateVec y = y0.cast<Complex>();
    double t = t0;
    double tau = tau_start;
    while (t < t_end - tau_min) {
        const double cap = t_end - t;
        tau = std::min(tau, cap);
        double res = bpl_residual(prob, t, y, tau, p, gauss_points);
        ++trace.residual_evaluations;
        trace.total_rhs_evals += p + 1;
        if (res < tol) {
            while (tau < cap) {
                const double trial = std::min(tau * growth, cap);
                const double rtrial =
                    bpl_residual(prob, t, y, trial, p, gauss_points);
                ++trace.residual_evaluations;
                trace.total_rhs_evals += p + 1;
                if (rtrial >= tol) break;
                tau = trial;
                res = rtrial;
            }
        } else {
            while (res >= tol && tau > tau_min) {
                tau = std::max(tau / growth, tau_min);
                res = bpl_residual(prob, t, y, tau, p, gauss_points);
                ++trace.residual_evaluations;
                trace.total_rhs_evals += p + 1;
            }
        }
        y = bpl_step(prob, Complex(t), y, Complex(tau), p, gauss_points);
        trace.total_rhs_evals += p;
        t += tau;
        TraceRecord rec;
        rec.t = t;
        rec.tau = tau;
        rec.state = y.real();
        rec.err_est = res;
        rec.rhs_evals = p;
        rec.estimated_state = rec.state;
        trace.records.push_back(std::move(rec));
        ++trace.accepted;
    }
    trace.wall_time = clock.elapsed();
    return trace;
}

}  // namespace cxode

#endif
