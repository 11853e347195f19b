#ifndef CXODE_PROBLEMS_HPP
#define CXODE_PROBLEMS_HPP

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "cxode/adaptive.hpp"
#include "cxode/lambert_w.hpp"
#include "cxode/problem.hpp"

namespace cxode {

struct ReferenceMethod {
    std::string scheme;
    double tau = 0.0;
};

// A benchmark problem: the ODE itself plus its default interval, initial
// state, parameter values, and (when no closed form exists) the fixed-step
// reference recipe used to measure errors.
struct ProblemSpec {
    OdeProblem ode;
    double t0 = 0.0;
    double t_end = 1.0;
    RealVec y0;
    std::map<std::string, double> parameters;
    std::optional<ReferenceMethod> reference;
};

using ParamMap = std::map<std::string, double>;

namespace detail {

inline double param(const ParamMap& params, const std::string& key, double fallback) {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

inline double quad_g(double t, double lambda) {
    if (t == 0.0) return 0.0;
    auto integrand = [lambda](double u) {
        return u * std::sin(u) * std::exp(lambda * std::cos(u));
    };
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        integrand, 0.0, t, 12, 1e-13);
}

// 1 / (W(d e^{d-s}) + 1) with the large-exponent path handled in log space
inline double lambert_profile(double d, double s) {
    if (d == 0.0) return 1.0;
    double w;
    if (d > 0.0) {
        w = lambert_w_of_exp(std::log(d) + d - s);
    } else {
        w = lambert_w(d * std::exp(d - s));
    }
    return 1.0 / (w + 1.0);
}

}  // namespace detail

inline ProblemSpec make_problem(const std::string& name, const ParamMap& params = {}) {
    ProblemSpec spec;
    spec.parameters = params;

    if (name == "cubic") {
        const double y0 = detail::param(params, "y0", 1.0);
        spec.ode.dimension = 1;
        spec.ode.label = "cubic";
        spec.t0 = detail::param(params, "t0", 0.0);
        spec.t_end = detail::param(params, "tEnd", 2.0);
        spec.y0 = RealVec::Constant(1, y0);
        spec.ode.rhs = [](Complex, const StateVec& y) {
            StateVec f(1);
            f(0) = -y(0) * y(0) * y(0);
            return f;
        };
        spec.ode.jacobian = [](Complex, const StateVec& y) {
            ComplexMat j(1, 1);
            j(0, 0) = -3.0 * y(0) * y(0);
            return j;
        };
        spec.ode.jet_rhs = [](const TaylorJet&, const std::vector<TaylorJet>& y) {
            return std::vector<TaylorJet>{-(y[0] * y[0] * y[0])};
        };
        spec.ode.exact_flow = [](double t0, const RealVec& y0v, double t) {
            RealVec out(1);
            out(0) = y0v(0) / std::sqrt(1.0 + 2.0 * y0v(0) * y0v(0) * (t - t0));
            return out;
        };
        const double start0 = spec.t0;
        const RealVec init = spec.y0;
        const ExactFlowFn flow = spec.ode.exact_flow;
        spec.ode.exact_solution = [flow, start0, init](double t) { return flow(start0, init, t); };
        return spec;
    }

    if (name == "example1") {
        const double lambda = detail::param(params, "lambda", 1.0);
        if (lambda == 0.0) throw InvalidParameter("example1: lambda must be nonzero");
        const double y0 = detail::param(params, "y0", 1.0);
        spec.ode.dimension = 1;
        spec.ode.label = "example1";
        spec.t0 = detail::param(params, "t0", 0.0);
        spec.t_end = detail::param(params, "tEnd", 5.0 * std::numbers::pi);
        spec.y0 = RealVec::Constant(1, y0);
        spec.ode.rhs = [lambda](Complex t, const StateVec& y) {
            StateVec f(1);
            f(0) = std::exp(-lambda * y(0)) + std::sin(t);
            return f;
        };
        spec.ode.jacobian = [lambda](Complex, const StateVec& y) {
            ComplexMat j(1, 1);
            j(0, 0) = -lambda * std::exp(-lambda * y(0));
            return j;
        };
        spec.ode.jet_rhs = [lambda](const TaylorJet& t, const std::vector<TaylorJet>& y) {
            return std::vector<TaylorJet>{jet_exp(-lambda * y[0]) + jet_sin(t)};
        };
        // e^{lambda y} solves a linear equation; the integration constant is
        // fitted to the launch state.
        spec.ode.exact_flow = [lambda](double t0, const RealVec& y0v, double t) {
            const double c = (std::exp(lambda * y0v(0)) - lambda * t0) *
                                 std::exp(lambda * std::cos(t0)) -
                             lambda * lambda * detail::quad_g(t0, lambda);
            const double u = lambda * t + (lambda * lambda * detail::quad_g(t, lambda) + c) *
                                              std::exp(-lambda * std::cos(t));
            if (!(u > 0.0)) throw OutOfDomain("example1: exact solution left its domain");
            RealVec out(1);
            out(0) = std::log(u) / lambda;
            return out;
        };
        const double start0 = spec.t0;
        const RealVec init = spec.y0;
        const ExactFlowFn flow = spec.ode.exact_flow;
        spec.ode.exact_solution = [flow, start0, init](double t) { return flow(start0, init, t); };
        return spec;
    }

    if (name == "lambert") {
        const double delta = detail::param(params, "delta", 0.01);
        if (delta == 0.0) throw InvalidParameter("lambert: delta must be nonzero");
        spec.ode.dimension = 1;
        spec.ode.label = "lambert";
        spec.t0 = detail::param(params, "t0", 0.0);
        spec.t_end = detail::param(params, "tEnd", 2.0 / delta);
        spec.y0 = RealVec::Constant(1, delta);
        spec.ode.rhs = [](Complex, const StateVec& y) {
            StateVec f(1);
            f(0) = y(0) * y(0) - y(0) * y(0) * y(0);
            return f;
        };
        spec.ode.jacobian = [](Complex, const StateVec& y) {
            ComplexMat j(1, 1);
            j(0, 0) = 2.0 * y(0) - 3.0 * y(0) * y(0);
            return j;
        };
        spec.ode.jet_rhs = [](const TaylorJet&, const std::vector<TaylorJet>& y) {
            const TaylorJet y2 = y[0] * y[0];
            return std::vector<TaylorJet>{y2 - y2 * y[0]};
        };
        spec.ode.exact_flow = [](double t0, const RealVec& y0v, double t) {
            const double d = 1.0 / y0v(0) - 1.0;
            RealVec out(1);
            out(0) = detail::lambert_profile(d, t - t0);
            return out;
        };
        const double start0 = spec.t0;
        const RealVec init = spec.y0;
        const ExactFlowFn flow = spec.ode.exact_flow;
        spec.ode.exact_solution = [flow, start0, init](double t) { return flow(start0, init, t); };
        return spec;
    }

    if (name == "lotkaVolterra") {
        const double alpha = detail::param(params, "alpha", 1.0);
        const double beta = detail::param(params, "beta", 1.0);
        const double delta = detail::param(params, "delta", 1.0);
        const double eta = detail::param(params, "eta", 1.0);
        spec.ode.dimension = 2;
        spec.ode.label = "lotkaVolterra";
        spec.t0 = detail::param(params, "t0", 0.0);
        spec.t_end = detail::param(params, "tEnd", 20.0);
        spec.y0 = RealVec(2);
        spec.y0 << detail::param(params, "u0", 2.0), detail::param(params, "v0", 1.0);
        spec.ode.rhs = [alpha, beta, delta, eta](Complex, const StateVec& y) {
            StateVec f(2);
            f(0) = alpha * y(0) - beta * y(0) * y(1);
            f(1) = -delta * y(1) + eta * y(0) * y(1);
            return f;
        };
        spec.ode.jacobian = [alpha, beta, delta, eta](Complex, const StateVec& y) {
            ComplexMat j(2, 2);
            j(0, 0) = alpha - beta * y(1);
            j(0, 1) = -beta * y(0);
            j(1, 0) = eta * y(1);
            j(1, 1) = -delta + eta * y(0);
            return j;
        };
        spec.ode.jet_rhs = [alpha, beta, delta, eta](const TaylorJet&,
                                                     const std::vector<TaylorJet>& y) {
            const TaylorJet uv = y[0] * y[1];
            return std::vector<TaylorJet>{alpha * y[0] - beta * uv, -delta * y[1] + eta * uv};
        };
        spec.ode.invariant = [alpha, beta, delta, eta](const RealVec& y) {
            if (!(y(0) > 0.0) || !(y(1) > 0.0))
                throw InvariantUndefined("lotkaVolterra: state left the positive quadrant");
            return beta * y(1) + eta * y(0) - alpha * std::log(y(1)) - delta * std::log(y(0));
        };
        spec.reference = ReferenceMethod{"rk4", 1e-5};
        return spec;
    }

    if (name == "duffingVdP") {
        const double r = detail::param(params, "r", 0.3);
        const double g = detail::param(params, "g", 0.0);
        const double a = detail::param(params, "a", -1.0);
        const double b = detail::param(params, "b", 1.0);
        const double c = detail::param(params, "c", 0.5);
        const double w = detail::param(params, "w", 1.2);
        spec.ode.dimension = 2;
        spec.ode.label = "duffingVdP";
        spec.t0 = detail::param(params, "t0", 0.0);
        spec.t_end = detail::param(params, "tEnd", 100.0);
        spec.y0 = RealVec(2);
        spec.y0 << detail::param(params, "u0", 1.0), detail::param(params, "v0", 0.0);
        spec.ode.rhs = [r, g, a, b, c, w](Complex t, const StateVec& y) {
            StateVec f(2);
            f(0) = y(1);
            f(1) = -(r + g * y(0) * y(0)) * y(1) - a * y(0) - b * y(0) * y(0) * y(0) +
                   c * std::cos(w * t);
            return f;
        };
        spec.ode.jacobian = [r, g, a, b](Complex, const StateVec& y) {
            ComplexMat j(2, 2);
            j(0, 0) = 0.0;
            j(0, 1) = 1.0;
            j(1, 0) = -2.0 * g * y(0) * y(1) - a - 3.0 * b * y(0) * y(0);
            j(1, 1) = -(r + g * y(0) * y(0));
            return j;
        };
        spec.ode.jet_rhs = [r, g, a, b, c, w](const TaylorJet& t,
                                              const std::vector<TaylorJet>& y) {
            const TaylorJet u2 = y[0] * y[0];
            TaylorJet accel = -(r * y[1]) - g * (u2 * y[1]) - a * y[0] - b * (u2 * y[0]);
            if (c != 0.0) accel = accel + c * jet_cos(w * t);
            return std::vector<TaylorJet>{y[1], accel};
        };
        if (r == 0.0 && g == 0.0) {
            spec.ode.invariant = [a, b](const RealVec& y) {
                return 0.5 * y(1) * y(1) + 0.5 * a * y(0) * y(0) +
                       0.25 * b * y(0) * y(0) * y(0) * y(0);
            };
        }
        spec.reference = ReferenceMethod{"grk2", 1e-3};
        return spec;
    }

    throw UnknownProblem("unknown problem '" + name + "'");
}

// Per-record |F(y_n) - F(y_0)| along a trace.
inline std::vector<double> first_integral_drift(const IntegrationTrace& trace,
                                                const ProblemSpec& spec) {
    if (!spec.ode.invariant)
        throw InvariantUndefined("problem '" + spec.ode.label + "' has no first integral");
    std::vector<double> out;
    out.reserve(trace.records.size());
    if (trace.records.empty()) return out;
    const double f0 = spec.ode.invariant(trace.records.front().state);
    for (const TraceRecord& rec : trace.records)
        out.push_back(std::abs(spec.ode.invariant(rec.state) - f0));
    return out;
}

// Flat key=value parameter files; keys may carry a "problem." prefix.
inline ParamMap load_param_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidParameter("cannot open parameter file '" + path + "'");
    ParamMap out;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            const auto from = s.find_first_not_of(" \t\r");
            const auto to = s.find_last_not_of(" \t\r");
            return from == std::string::npos ? std::string() : s.substr(from, to - from + 1);
        };
        std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.rfind("problem.", 0) == 0) key.erase(0, 8);
        if (key.empty() || value.empty()) continue;
        try {
            out[key] = std::stod(value);
        } catch (const std::exception&) {
            throw InvalidParameter("bad value for '" + key + "' in " + path);
        }
    }
    return out;
}

}  // namespace cxode

#endif
