#ifndef CXODE_COMPOSITION_HPP
#define CXODE_COMPOSITION_HPP

#include <cmath>
#include <numbers>

#include "cxode/flow.hpp"

namespace cxode {

// Conjugate step fractions for the double composition of an order-p method,
// together with the constant scaling the imaginary-part error estimate.
struct CompositionCoefficients {
    int order = 0;  // order p of the base method
    Complex gamma1;
    Complex gamma2;
    double c_hat1 = 0.0;
    double c_hat2 = 0.0;
    double c_hat = 0.0;
};

// gamma1 = 1/2 + (i/2) sin(pi/(p+1)) / (1 + cos(pi/(p+1))), gamma2 its
// conjugate. These satisfy gamma1 + gamma2 = 1 and
// gamma1^(p+1) + gamma2^(p+1) = 0.
inline CompositionCoefficients gamma_coefficients(int p) {
    if (p < 1) throw InvalidOrder("composition requires order p >= 1");
    CompositionCoefficients out;
    out.order = p;
    const double theta = std::numbers::pi / (p + 1);
    const double half_b = 0.5 * std::sin(theta) / (1.0 + std::cos(theta));
    out.gamma1 = Complex(0.5, half_b);
    out.gamma2 = Complex(0.5, -half_b);
    return out;
}

struct ErrorConstants {
    double c_hat1 = 0.0;
    double c_hat2 = 0.0;
    double c_hat = 0.0;
};

// C1 from the f_y term, C2 from the remaining order-(p+2) terms with the
// coefficient ratio taken as p+2; the estimate uses the larger magnitude.
inline ErrorConstants error_constant(int p, Complex gamma1, Complex gamma2) {
    if (p < 1) throw InvalidOrder("error_constant requires order p >= 1");
    const Complex g21 = gamma2 * std::pow(gamma1, p + 1);
    const Complex g12 = gamma1 * std::pow(gamma2, p + 1);
    if (std::abs(g21.imag()) < 1e-300 || std::abs(g12.imag()) < 1e-300)
        throw DegenerateCoefficients("error_constant: vanishing imaginary denominator");
    const Complex sum_p2 = std::pow(gamma1, p + 2) + std::pow(gamma2, p + 2);
    ErrorConstants out;
    out.c_hat1 = std::abs(g21.real() / g21.imag());
    out.c_hat2 = std::abs(g12.real() / g12.imag() +
                          double(p + 2) * sum_p2.real() / g12.imag());
    out.c_hat = std::max(out.c_hat1, out.c_hat2);
    return out;
}

inline CompositionCoefficients composition_coefficients(int p) {
    CompositionCoefficients out = gamma_coefficients(p);
    const ErrorConstants ec = error_constant(p, out.gamma1, out.gamma2);
    out.c_hat1 = ec.c_hat1;
    out.c_hat2 = ec.c_hat2;
    out.c_hat = ec.c_hat;
    return out;
}

struct ComposedStepOutput {
    RealVec approx;           // real part, the order-(p+1) approximation
    double error_estimate = 0.0;  // c_hat * ||imaginary part||
    StateVec raw_complex;
    long rhs_evaluations = 0;
    long newton_iterations = 0;
};

// Apply the base flow with step gamma1*tau, then gamma2*tau from t + gamma1*tau.
inline ComposedStepOutput composed_step(const Flow& base, const OdeProblem& prob, double t,
                                        const RealVec& y, double tau,
                                        const CompositionCoefficients& coeff) {
    if (!(tau > 0.0)) throw InvalidParameter("composed_step: tau must be positive");
    const StateVec y0 = y.cast<Complex>();
    StepResult first = base(prob, Complex(t), y0, coeff.gamma1 * tau);
    StepResult second =
        base(prob, Complex(t) + coeff.gamma1 * tau, first.state, coeff.gamma2 * tau);
    ComposedStepOutput out;
    // join the substep increments before touching y: the intermediate state's
    // rounding then enters only through the rhs, not at full state magnitude
    out.raw_complex = y0 + (first.increment + second.increment);
    out.approx = out.raw_complex.real();
    out.error_estimate = coeff.c_hat * out.raw_complex.imag().norm();
    out.rhs_evaluations = first.rhs_evaluations + second.rhs_evaluations;
    out.newton_iterations = first.newton_iterations + second.newton_iterations;
    return out;
}

// A base flow bundled with its composition coefficients.
class ComposedFlow {
  public:
    explicit ComposedFlow(Flow base)
        : base_(std::move(base)), coeff_(composition_coefficients(base_.order())) {}

    ComposedStepOutput step(const OdeProblem& prob, double t, const RealVec& y,
                            double tau) const {
        return composed_step(base_, prob, t, y, tau, coeff_);
    }

    const Flow& base() const { return base_; }
    const CompositionCoefficients& coefficients() const { return coeff_; }
    int base_order() const { return base_.order(); }
    std::string name() const { return "c" + base_.name(); }

  private:
    Flow base_;
    CompositionCoefficients coeff_;
};

}  // namespace cxode

#endif
