#ifndef CXODE_CXODE_HPP
#define CXODE_CXODE_HPP

// One-step ODE integration with complex double composition: the real part of
// the composed step gains one order of accuracy and the imaginary part serves
// as a built-in local error estimate for adaptive stepping. Includes a
// Butcher-tableau Runge-Kutta engine (explicit and implicit), a
// Borel-Pade-Laplace integrator, linear stability tooling, benchmark
// problems, and the measurement harness.

#include "cxode/adaptive.hpp"
#include "cxode/bpl.hpp"
#include "cxode/composition.hpp"
#include "cxode/csv.hpp"
#include "cxode/errors.hpp"
#include "cxode/flow.hpp"
#include "cxode/jet.hpp"
#include "cxode/lambert_w.hpp"
#include "cxode/metrics.hpp"
#include "cxode/problem.hpp"
#include "cxode/problems.hpp"
#include "cxode/rk.hpp"
#include "cxode/stability.hpp"
#include "cxode/tableau.hpp"

#endif
