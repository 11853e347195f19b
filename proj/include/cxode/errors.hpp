#ifndef CXODE_ERRORS_HPP
#define CXODE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace cxode {

struct UnknownScheme : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct UnknownProblem : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct InvalidParameter : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct InvalidOrder : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct OutOfDomain : std::domain_error {
    using std::domain_error::domain_error;
};

struct DegenerateCoefficients : std::domain_error {
    using std::domain_error::domain_error;
};

struct NonFiniteRhs : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Newton iteration on the stage system did not converge.
struct StageSolveFailure : std::runtime_error {
    double residual_norm;
    StageSolveFailure(const std::string& what, double residual)
        : std::runtime_error(what), residual_norm(residual) {}
};

struct PoleAtZ : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct QuadratureFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PoleOnContour : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnsupportedProblem : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvariantUndefined : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct StiffnessStall : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace cxode

#endif
