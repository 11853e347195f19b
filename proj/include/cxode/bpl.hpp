#ifndef CXODE_BPL_HPP
#define CXODE_BPL_HPP

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "cxode/flow.hpp"
#include "cxode/problem.hpp"

namespace cxode {

// Taylor coefficients Y_0..Y_p of the solution around (t, y), from the
// recurrence Y_{k+1} = (rhs jet)_k / (k+1) built with jet arithmetic.
inline std::vector<StateVec> taylor_coefficients(const OdeProblem& prob, Complex t,
                                                 const StateVec& y, int p) {
    if (!prob.jet_rhs)
        throw UnsupportedProblem("taylor_coefficients: problem '" + prob.label +
                                 "' provides no jet rhs");
    const int d = prob.dimension;
    const std::size_t len = std::size_t(p) + 1;
    TaylorJet tj = TaylorJet::variable(t, len);
    std::vector<TaylorJet> yj(d, TaylorJet(len));
    for (int i = 0; i < d; ++i) yj[i][0] = y(i);
    for (int k = 0; k < p; ++k) {
        const std::vector<TaylorJet> f = prob.jet_rhs(tj, yj);
        for (int i = 0; i < d; ++i) yj[i][std::size_t(k) + 1] = f[i][k] / double(k + 1);
    }
    std::vector<StateVec> out(len, StateVec(d));
    for (std::size_t k = 0; k < len; ++k)
        for (int i = 0; i < d; ++i) out[k](i) = yj[i][k];
    return out;
}

// (B y)_k = Y_{k+1} / k!
inline std::vector<Complex> borel_transform(const std::vector<Complex>& series) {
    if (series.size() < 2)
        throw InvalidParameter("borel_transform: need at least two coefficients");
    std::vector<Complex> out(series.size() - 1);
    double factorial = 1.0;
    for (std::size_t k = 0; k < out.size(); ++k) {
        if (k > 1) factorial *= double(k);
        out[k] = series[k + 1] / factorial;
    }
    return out;
}

// Rational q/r with r(0) = 1 matching the input series through order dq+dr.
struct PadeApproximant {
    Eigen::VectorXcd numerator;
    Eigen::VectorXcd denominator;
    int requested_dr = 0;
    int effective_dr = 0;
    bool degraded = false;

    Complex numerator_value(Complex xi) const { return horner(numerator, xi); }
    Complex denominator_value(Complex xi) const { return horner(denominator, xi); }
    Complex evaluate(Complex xi) const { return horner(numerator, xi) / horner(denominator, xi); }

    std::pair<Complex, Complex> evaluate_with_derivative(Complex xi) const {
        const Complex q = horner(numerator, xi);
        const Complex qd = horner_derivative(numerator, xi);
        const Complex r = horner(denominator, xi);
        const Complex rd = horner_derivative(denominator, xi);
        return {q / r, (qd * r - q * rd) / (r * r)};
    }

    static Complex horner(const Eigen::VectorXcd& p, Complex x) {
        Complex v(0.0);
        for (Eigen::Index i = p.size() - 1; i >= 0; --i) v = v * x + p(i);
        return v;
    }
    static Complex horner_derivative(const Eigen::VectorXcd& p, Complex x) {
        Complex v(0.0);
        for (Eigen::Index i = p.size() - 1; i >= 1; --i) v = v * x + double(i) * p(i);
        return v;
    }
};

// Denominator from the dr x dr Toeplitz system; on a (numerically) singular
// system the denominator degree is reduced and the solve retried, down to the
// plain truncated polynomial at dr = 0.
inline PadeApproximant pade_approximant(const std::vector<Complex>& series, int dq, int dr) {
    if (dq < 0 || dr < 0 || series.size() < std::size_t(dq + dr) + 1)
        throw InvalidParameter("pade_approximant: series too short for requested degrees");
    PadeApproximant out;
    out.requested_dr = dr;
    auto coeff = [&](int i) -> Complex {
        return (i >= 0 && i < int(series.size())) ? series[std::size_t(i)] : Complex(0.0);
    };
    for (int deg = dr; deg >= 1; --deg) {
        Eigen::MatrixXcd m(deg, deg);
        Eigen::VectorXcd rhs(deg);
        for (int row = 0; row < deg; ++row) {
            rhs(row) = -coeff(dq + 1 + row);
            for (int col = 0; col < deg; ++col) m(row, col) = coeff(dq + row - col);
        }
        Eigen::FullPivLU<Eigen::MatrixXcd> lu(m);
        if (!lu.isInvertible()) continue;
        Eigen::VectorXcd rtail = lu.solve(rhs);
        if (!rtail.allFinite()) continue;
        out.denominator.resize(deg + 1);
        out.denominator(0) = Complex(1.0);
        out.denominator.tail(deg) = rtail;
        out.numerator.resize(dq + 1);
        for (int i = 0; i <= dq; ++i) {
            Complex s(0.0);
            for (int j = 0; j <= std::min(i, deg); ++j) s += out.denominator(j) * coeff(i - j);
            out.numerator(i) = s;
        }
        out.effective_dr = deg;
        out.degraded = deg != dr;
        return out;
    }
    out.numerator.resize(dq + 1);
    for (int i = 0; i <= dq; ++i) out.numerator(i) = coeff(i);
    out.denominator.resize(1);
    out.denominator(0) = Complex(1.0);
    out.effective_dr = 0;
    out.degraded = dr != 0;
    return out;
}

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    int count = 0;
};

// Gauss-Laguerre nodes and weights: Newton iteration on the Laguerre
// recurrence from the usual initial guesses.
inline QuadratureRule gauss_laguerre(int n) {
    if (n < 1 || n > 64) throw InvalidParameter("gauss_laguerre: need 1 <= n <= 64");
    QuadratureRule rule;
    rule.count = n;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    double z = 0.0;
    for (int i = 0; i < n; ++i) {
        if (i == 0) {
            z = 3.0 / (1.0 + 2.4 * n);
        } else if (i == 1) {
            z += 15.0 / (1.0 + 2.5 * n);
        } else {
            const double ai = i - 1;
            z += ((1.0 + 2.55 * ai) / (1.9 * ai)) * (z - rule.nodes[i - 2]);
        }
        double pp = 0.0, p2 = 0.0;
        bool converged = false;
        for (int it = 0; it < 100; ++it) {
            double p1 = 1.0;
            p2 = 0.0;
            for (int j = 1; j <= n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j - 1.0 - z) * p2 - (j - 1.0) * p3) / j;
            }
            pp = n * (p1 - p2) / z;
            const double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) <= 1e-15 * (1.0 + std::abs(z))) {
                converged = true;
                break;
            }
        }
        if (!converged || !std::isfinite(z))
            throw QuadratureFailure("gauss_laguerre: node iteration did not converge");
        rule.nodes[i] = z;
        rule.weights[i] = -1.0 / (pp * n * p2);
    }
    return rule;
}

namespace detail {

struct Resummation {
    std::vector<PadeApproximant> pade;  // one per state component
    StateVec y0;
    int gauss_points = 0;
};

// Borel transform and Pade extrapolation of each component's Taylor series.
inline Resummation resum(const OdeProblem& prob, Complex t, const StateVec& y, int p,
                         int gauss_points) {
    if (p < 1) throw InvalidOrder("bpl: truncation order must be >= 1");
    const std::vector<StateVec> coeffs = taylor_coefficients(prob, t, y, p);
    const int dq = (p + 1 - 1) / 2;  // ceil((p-1)/2)
    const int dr = (p - 1) / 2;
    Resummation out;
    out.y0 = y;
    out.gauss_points = gauss_points;
    out.pade.reserve(prob.dimension);
    for (int i = 0; i < prob.dimension; ++i) {
        std::vector<Complex> series(coeffs.size());
        for (std::size_t k = 0; k < coeffs.size(); ++k) series[k] = coeffs[k](i);
        out.pade.push_back(pade_approximant(borel_transform(series), dq, dr));
    }
    return out;
}

inline const QuadratureRule& cached_rule(int n) {
    thread_local QuadratureRule rule;
    if (rule.count != n) rule = gauss_laguerre(n);
    return rule;
}

inline StateVec laplace_sum(const Resummation& rs, Complex tau) {
    const QuadratureRule& rule = cached_rule(rs.gauss_points);
    const int d = static_cast<int>(rs.pade.size());
    StateVec out = rs.y0;
    for (int i = 0; i < d; ++i) {
        Complex acc(0.0);
        for (int k = 0; k < rule.count; ++k) {
            const Complex xi = rule.nodes[k] * tau;
            if (std::abs(rs.pade[i].denominator_value(xi)) < 1e-13)
                throw PoleOnContour("bpl: Pade pole on the quadrature contour");
            acc += rule.weights[k] * rs.pade[i].evaluate(xi);
        }
        out(i) += tau * acc;
    }
    return out;
}

}  // namespace detail

// One Borel-Pade-Laplace step of truncation order p:
// y + tau * sum_i Pd(xi_i * tau) * w_i, componentwise.
inline StateVec bpl_step(const OdeProblem& prob, Complex t, const StateVec& y, Complex tau,
                         int p, int gauss_points = 20) {
    if (tau == Complex(0.0)) throw InvalidParameter("bpl_step: tau must be nonzero");
    return detail::laplace_sum(detail::resum(prob, t, y, p, gauss_points), tau);
}

// || d/dtau Phi_tau(y) - f(t + tau, Phi_tau(y)) || with the derivative taken
// analytically through the rational approximants.
inline double bpl_residual(const OdeProblem& prob, double t, const StateVec& y, double tau,
                           int p, int gauss_points = 20) {
    const detail::Resummation rs = detail::resum(prob, Complex(t), y, p, gauss_points);
    const QuadratureRule& rule = detail::cached_rule(gauss_points);
    const int d = prob.dimension;
    StateVec state = rs.y0;
    StateVec derivative(d);
    for (int i = 0; i < d; ++i) {
        Complex acc(0.0), dacc(0.0);
        for (int k = 0; k < rule.count; ++k) {
            const Complex xi = rule.nodes[k] * tau;
            if (std::abs(rs.pade[i].denominator_value(xi)) < 1e-13)
                throw PoleOnContour("bpl: Pade pole on the quadrature contour");
            const auto [v, dv] = rs.pade[i].evaluate_with_derivative(xi);
            acc += rule.weights[k] * v;
            dacc += rule.weights[k] * (v + tau * rule.nodes[k] * dv);
        }
        state(i) += tau * acc;
        derivative(i) = dacc;
    }
    const StateVec f = prob.rhs(Complex(t + tau), state);
    if (!f.allFinite()) throw NonFiniteRhs("rhs returned a non-finite value");
    return (derivative - f).norm();
}

inline Flow make_bpl_flow(int p, int gauss_points = 20) {
    return Flow("bpl" + std::to_string(p), p,
                [p, gauss_points](const OdeProblem& prob, Complex t, const StateVec& y,
                                  Complex tau) {
                    StepResult out;
                    out.state = bpl_step(prob, t, y, tau, p, gauss_points);
                    out.increment = out.state - y;
                    out.rhs_evaluations = p;  // jet evaluations of the rhs
                    return out;
                });
}

}  // namespace cxode

#endif
