#ifndef CXODE_STABILITY_HPP
#define CXODE_STABILITY_HPP

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "cxode/composition.hpp"
#include "cxode/tableau.hpp"

namespace cxode {

// P(z) = 1 + z * b^T (I - z A)^{-1} * ones, by direct linear solve so the
// rational case (implicit tableaux) needs no special handling.
inline Complex stability_value(const ButcherTableau& tab, const Eigen::VectorXd& weights,
                               Complex z) {
    const int s = tab.stage_count();
    ComplexMat m = ComplexMat::Identity(s, s) - z * tab.a.cast<Complex>();
    Eigen::FullPivLU<ComplexMat> lu(m);
    if (!lu.isInvertible()) throw PoleAtZ("stability polynomial pole");
    Eigen::VectorXcd x = lu.solve(Eigen::VectorXcd::Ones(s));
    if (!x.allFinite()) throw PoleAtZ("stability polynomial pole");
    Complex acc(0.0);
    for (int i = 0; i < s; ++i) acc += weights(i) * x(i);
    return Complex(1.0) + z * acc;
}

inline Complex stability_value(const ButcherTableau& tab, Complex z) {
    return stability_value(tab, tab.b, z);
}

// Re(P(gamma2 z) * P(gamma1 z)), the amplification factor of the composed scheme.
inline double composed_stability_value(const ButcherTableau& tab, Complex gamma1,
                                       Complex gamma2, Complex z) {
    const Complex p1 = stability_value(tab, gamma1 * z);
    const Complex p2 = stability_value(tab, gamma2 * z);
    return (p2 * p1).real();
}

inline double stability_magnitude(const ButcherTableau& tab, Complex z) {
    try {
        return std::abs(stability_value(tab, z));
    } catch (const PoleAtZ&) {
        return std::numeric_limits<double>::infinity();
    }
}

inline double composed_stability_magnitude(const ButcherTableau& tab, Complex gamma1,
                                           Complex gamma2, Complex z) {
    try {
        return std::abs(composed_stability_value(tab, gamma1, gamma2, z));
    } catch (const PoleAtZ&) {
        return std::numeric_limits<double>::infinity();
    }
}

using MagnitudeFn = std::function<double(Complex)>;

// |P| sampled over a rectangle; node (i, j) sits at
// z = xmin + i*dx + I*(ymin + j*dy). Membership in the stability region is
// value <= 1.
struct StabilityGrid {
    double xmin = 0, xmax = 0, ymin = 0, ymax = 0;
    int nx = 0, ny = 0;
    std::vector<double> values;  // row-major over (i, j)

    double& at(int i, int j) { return values[std::size_t(i) * ny + j]; }
    double at(int i, int j) const { return values[std::size_t(i) * ny + j]; }

    Complex node(int i, int j) const {
        const double dx = (xmax - xmin) / (nx - 1);
        const double dy = (ymax - ymin) / (ny - 1);
        return Complex(xmin + i * dx, ymin + j * dy);
    }
};

inline StabilityGrid scan_region(const MagnitudeFn& magnitude, double xmin, double xmax,
                                 double ymin, double ymax, int nx, int ny) {
    if (nx < 2 || ny < 2) throw InvalidParameter("scan_region: need nx, ny >= 2");
    StabilityGrid g;
    g.xmin = xmin;
    g.xmax = xmax;
    g.ymin = ymin;
    g.ymax = ymax;
    g.nx = nx;
    g.ny = ny;
    g.values.resize(std::size_t(nx) * ny);
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j) g.at(i, j) = magnitude(g.node(i, j));
    return g;
}

// Leftmost point of the stability region on the negative real axis, found by
// a 0.01-step scan over [-100, 0] and bisection to 1e-10. Returns -infinity
// when the whole scan range stays inside (the A-stable case).
inline double real_axis_crossing(const MagnitudeFn& magnitude) {
    constexpr double scan_limit = -100.0;
    constexpr double coarse = 0.01;
    double last_inside = std::numeric_limits<double>::quiet_NaN();
    const long n = std::lround(-scan_limit / coarse);
    for (long k = n; k >= 0; --k) {
        const double x = -double(k) * coarse;
        if (magnitude(Complex(x, 0.0)) <= 1.0) {
            last_inside = x;
            break;
        }
    }
    if (std::isnan(last_inside))
        return 0.0;  // region touches only the origin
    if (last_inside <= scan_limit + 0.5 * coarse)
        return -std::numeric_limits<double>::infinity();
    double inside = last_inside;
    double outside = last_inside - coarse;
    while (inside - outside > 1e-10) {
        const double mid = 0.5 * (inside + outside);
        (magnitude(Complex(mid, 0.0)) <= 1.0 ? inside : outside) = mid;
    }
    return 0.5 * (inside + outside);
}

}  // namespace cxode

#endif
