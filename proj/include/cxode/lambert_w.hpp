#ifndef CXODE_LAMBERT_W_HPP
#define CXODE_LAMBERT_W_HPP

#include <cmath>

#include "cxode/errors.hpp"

namespace cxode {

namespace detail {

inline double halley_w(double w, double z) {
    for (int i = 0; i < 60; ++i) {
        const double ew = std::exp(w);
        const double f = w * ew - z;
        const double denom = ew * (w + 1.0) - (w + 2.0) * f / (2.0 * (w + 1.0));
        const double dw = f / denom;
        w -= dw;
        if (std::abs(dw) <= 2e-16 * (1.0 + std::abs(w))) break;
    }
    return w;
}

}  // namespace detail

// Principal branch of W e^W = z for real z >= -1/e.
inline double lambert_w(double z) {
    if (z == 0.0) return 0.0;
    if (z < -std::exp(-1.0)) throw OutOfDomain("lambert_w: argument below -1/e");
    const double u = std::exp(1.0) * z + 1.0;  // 0 at the branch point
    double w;
    if (u < 0.5) {
        const double p = std::sqrt(2.0 * u);
        w = -1.0 + p - p * p / 3.0 + 11.0 * p * p * p / 72.0;
    } else if (z > 3.0) {
        const double l = std::log(z);
        w = l - std::log(l);
    } else {
        w = std::log1p(z);
    }
    return detail::halley_w(w, z);
}

// W(e^l) without forming e^l, for exponents past the overflow range:
// solves w + log(w) = l.
inline double lambert_w_of_exp(double l) {
    if (l < 700.0) return lambert_w(std::exp(l));
    double w = l - std::log(l);
    for (int i = 0; i < 60; ++i) {
        const double f = w + std::log(w) - l;
        const double dw = f * w / (w + 1.0);
        w -= dw;
        if (std::abs(dw) <= 2e-16 * (1.0 + std::abs(w))) break;
    }
    return w;
}

}  // namespace cxode

#endif
