#ifndef CXODE_PROBLEM_HPP
#define CXODE_PROBLEM_HPP

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "cxode/jet.hpp"

namespace cxode {

using StateVec = Eigen::VectorXcd;
using RealVec = Eigen::VectorXd;
using ComplexMat = Eigen::MatrixXcd;

using RhsFn = std::function<StateVec(Complex, const StateVec&)>;
using JacobianFn = std::function<ComplexMat(Complex, const StateVec&)>;
using JetRhsFn =
    std::function<std::vector<TaylorJet>(const TaylorJet&, const std::vector<TaylorJet>&)>;
using ExactFn = std::function<RealVec(double)>;
// Exact flow launched from an arbitrary state: (t0, y0, t) -> y(t)
using ExactFlowFn = std::function<RealVec(double, const RealVec&, double)>;
using InvariantFn = std::function<double(const RealVec&)>;

// Right-hand side of dy/dt = f(t, y), extended to complex time and state.
// Optional members are empty std::functions when not available.
struct OdeProblem {
    int dimension = 1;
    std::string label;
    RhsFn rhs;
    JacobianFn jacobian;
    JetRhsFn jet_rhs;
    ExactFn exact_solution;
    ExactFlowFn exact_flow;
    InvariantFn invariant;
};

}  // namespace cxode

#endif
