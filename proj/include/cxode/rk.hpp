#ifndef CXODE_RK_HPP
#define CXODE_RK_HPP

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <vector>

#include "cxode/problem.hpp"
#include "cxode/tableau.hpp"

namespace cxode {

struct StepResult {
    StateVec state;      // y + increment
    StateVec increment;  // tau * sum_i b_i K_i, kept separate for roundoff hygiene
    long rhs_evaluations = 0;
    long newton_iterations = 0;
};

enum class StageSolver { automatic, forward_substitution, newton };

namespace detail {

inline StateVec eval_rhs(const OdeProblem& prob, Complex t, const StateVec& y, long& evals) {
    StateVec f = prob.rhs(t, y);
    ++evals;
    if (!f.allFinite()) throw NonFiniteRhs("rhs returned a non-finite value");
    return f;
}

inline ComplexMat rhs_jacobian(const OdeProblem& prob, Complex t, const StateVec& y,
                               long& evals) {
    if (prob.jacobian) return prob.jacobian(t, y);
    // central differences; f is analytic so a real perturbation suffices
    const int d = prob.dimension;
    const double h = 1e-7 * (1.0 + y.norm());
    ComplexMat j(d, d);
    for (int k = 0; k < d; ++k) {
        StateVec yp = y, ym = y;
        yp(k) += h;
        ym(k) -= h;
        j.col(k) = (eval_rhs(prob, t, yp, evals) - eval_rhs(prob, t, ym, evals)) / (2.0 * h);
    }
    return j;
}

struct StageSet {
    ComplexMat k;  // d x s, column i is K_i
    long rhs_evaluations = 0;
    long newton_iterations = 0;
};

inline StageSet stages_forward(const ButcherTableau& tab, const OdeProblem& prob, Complex t,
                               const StateVec& y, Complex tau) {
    const int s = tab.stage_count();
    const int d = prob.dimension;
    StageSet out;
    out.k.resize(d, s);
    for (int i = 0; i < s; ++i) {
        StateVec yi = y;
        for (int j = 0; j < i; ++j)
            if (tab.a(i, j) != 0.0) yi += tau * tab.a(i, j) * out.k.col(j);
        out.k.col(i) = eval_rhs(prob, t + tab.c(i) * tau, yi, out.rhs_evaluations);
    }
    return out;
}

inline StageSet stages_newton(const ButcherTableau& tab, const OdeProblem& prob, Complex t,
                              const StateVec& y, Complex tau) {
    const int s = tab.stage_count();
    const int d = prob.dimension;
    constexpr int max_iterations = 50;
    StageSet out;
    out.k.resize(d, s);
    const StateVec f0 = eval_rhs(prob, t, y, out.rhs_evaluations);
    for (int i = 0; i < s; ++i) out.k.col(i) = f0;

    Eigen::VectorXcd residual(s * d);
    Eigen::MatrixXcd jac(s * d, s * d);
    const double data_scale = 1.0 + y.norm() + f0.norm();
    double previous = std::numeric_limits<double>::infinity();
    for (int iter = 0; iter <= max_iterations; ++iter) {
        double knorm = 0.0;
        std::vector<StateVec> stage_states(s);
        for (int i = 0; i < s; ++i) {
            StateVec yi = y;
            for (int j = 0; j < s; ++j)
                if (tab.a(i, j) != 0.0) yi += tau * tab.a(i, j) * out.k.col(j);
            stage_states[i] = yi;
            residual.segment(i * d, d) =
                out.k.col(i) - eval_rhs(prob, t + tab.c(i) * tau, yi, out.rhs_evaluations);
            knorm += out.k.col(i).squaredNorm();
        }
        knorm = std::sqrt(knorm);
        const double rnorm = residual.norm();
        if (knorm > 1e8 * data_scale)
            throw StageSolveFailure("stage Newton iteration diverged", rnorm);
        const double scale = 1.0 + knorm;
        if (rnorm <= 1.5e-16 * scale) return out;
        // stagnation at an acceptable level counts as converged
        if (rnorm <= 1e-12 * scale && rnorm >= 0.5 * previous) return out;
        if (iter == max_iterations) {
            if (rnorm <= 1e-12 * scale) return out;
            throw StageSolveFailure("stage Newton iteration did not converge", rnorm);
        }
        previous = rnorm;

        for (int i = 0; i < s; ++i) {
            const ComplexMat jf =
                rhs_jacobian(prob, t + tab.c(i) * tau, stage_states[i], out.rhs_evaluations);
            for (int j = 0; j < s; ++j) {
                ComplexMat block = -tau * tab.a(i, j) * jf;
                if (i == j) block += ComplexMat::Identity(d, d);
                jac.block(i * d, j * d, d, d) = block;
            }
        }
        Eigen::VectorXcd delta = jac.partialPivLu().solve(-residual);
        if (!delta.allFinite())
            throw StageSolveFailure("singular stage Jacobian", rnorm);
        for (int i = 0; i < s; ++i) out.k.col(i) += delta.segment(i * d, d);
        ++out.newton_iterations;
    }
    return out;
}

inline StageSet compute_stages(const ButcherTableau& tab, const OdeProblem& prob, Complex t,
                               const StateVec& y, Complex tau, StageSolver solver) {
    const bool forward = solver == StageSolver::forward_substitution ||
                         (solver == StageSolver::automatic && tab.is_explicit());
    if (forward && !tab.is_explicit())
        throw InvalidParameter("forward substitution requires an explicit tableau");
    return forward ? stages_forward(tab, prob, t, y, tau)
                   : stages_newton(tab, prob, t, y, tau);
}

}  // namespace detail

// One Runge-Kutta step y + tau * sum_i b_i K_i. Stages come from forward
// substitution for explicit tableaux and from a Newton iteration on the
// stacked stage system otherwise.
inline StepResult rk_step(const ButcherTableau& tab, const OdeProblem& prob, Complex t,
                          const StateVec& y, Complex tau,
                          StageSolver solver = StageSolver::automatic) {
    if (tau == Complex(0.0)) throw InvalidParameter("rk_step: tau must be nonzero");
    detail::StageSet st = detail::compute_stages(tab, prob, t, y, tau, solver);
    StepResult out;
    out.increment = StateVec::Zero(prob.dimension);
    for (int i = 0; i < tab.stage_count(); ++i) out.increment += tau * tab.b(i) * st.k.col(i);
    out.state = y + out.increment;
    out.rhs_evaluations = st.rhs_evaluations;
    out.newton_iterations = st.newton_iterations;
    return out;
}

struct EmbeddedResult {
    StateVec state;        // weights b
    StateVec companion;    // weights b_star
    double error_estimate = 0.0;
    long rhs_evaluations = 0;
};

// Both weight sets applied to the same stages; the estimate is the norm of
// the weighted stage difference.
inline EmbeddedResult embedded_step(const ButcherTableau& tab, const OdeProblem& prob,
                                    Complex t, const StateVec& y, Complex tau) {
    if (!tab.b_star)
        throw InvalidParameter("embedded_step: tableau '" + tab.name + "' has no b_star");
    detail::StageSet st =
        detail::compute_stages(tab, prob, t, y, tau, StageSolver::automatic);
    EmbeddedResult out;
    StateVec inc = StateVec::Zero(prob.dimension);
    StateVec inc_star = StateVec::Zero(prob.dimension);
    StateVec diff = StateVec::Zero(prob.dimension);
    for (int i = 0; i < tab.stage_count(); ++i) {
        inc += tau * tab.b(i) * st.k.col(i);
        inc_star += tau * (*tab.b_star)(i) * st.k.col(i);
        diff += tau * (tab.b(i) - (*tab.b_star)(i)) * st.k.col(i);
    }
    out.state = y + inc;
    out.companion = y + inc_star;
    out.error_estimate = diff.norm();
    out.rhs_evaluations = st.rhs_evaluations;
    return out;
}

}  // namespace cxode

#endif
