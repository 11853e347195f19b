#ifndef CXODE_JET_HPP
#define CXODE_JET_HPP

#include <cassert>
#include <cmath>
#include <complex>
#include <vector>

#include "cxode/errors.hpp"

namespace cxode {

using Complex = std::complex<double>;

// Truncated power series in the step variable: coefficients[k] multiplies tau^k.
// All binary operations require matching truncation lengths; products are
// Cauchy convolutions truncated at the common order.
class TaylorJet {
  public:
    TaylorJet() = default;
    explicit TaylorJet(std::size_t length) : coef_(length, Complex(0.0)) {}

    static TaylorJet constant(Complex value, std::size_t length) {
        TaylorJet j(length);
        if (length > 0) j.coef_[0] = value;
        return j;
    }

    // value + tau, the series of the integration variable itself
    static TaylorJet variable(Complex value, std::size_t length) {
        TaylorJet j(length);
        if (length > 0) j.coef_[0] = value;
        if (length > 1) j.coef_[1] = Complex(1.0);
        return j;
    }

    std::size_t length() const { return coef_.size(); }
    Complex& operator[](std::size_t k) { return coef_[k]; }
    const Complex& operator[](std::size_t k) const { return coef_[k]; }

    friend TaylorJet operator+(const TaylorJet& a, const TaylorJet& b) {
        assert(a.length() == b.length());
        TaylorJet r(a.length());
        for (std::size_t k = 0; k < r.length(); ++k) r.coef_[k] = a.coef_[k] + b.coef_[k];
        return r;
    }

    friend TaylorJet operator-(const TaylorJet& a, const TaylorJet& b) {
        assert(a.length() == b.length());
        TaylorJet r(a.length());
        for (std::size_t k = 0; k < r.length(); ++k) r.coef_[k] = a.coef_[k] - b.coef_[k];
        return r;
    }

    friend TaylorJet operator-(const TaylorJet& a) {
        TaylorJet r(a.length());
        for (std::size_t k = 0; k < r.length(); ++k) r.coef_[k] = -a.coef_[k];
        return r;
    }

    friend TaylorJet operator*(const TaylorJet& a, const TaylorJet& b) {
        assert(a.length() == b.length());
        TaylorJet r(a.length());
        for (std::size_t k = 0; k < r.length(); ++k) {
            Complex s(0.0);
            for (std::size_t i = 0; i <= k; ++i) s += a.coef_[i] * b.coef_[k - i];
            r.coef_[k] = s;
        }
        return r;
    }

    friend TaylorJet operator*(Complex s, const TaylorJet& a) {
        TaylorJet r(a.length());
        for (std::size_t k = 0; k < r.length(); ++k) r.coef_[k] = s * a.coef_[k];
        return r;
    }
    friend TaylorJet operator*(const TaylorJet& a, Complex s) { return s * a; }
    friend TaylorJet operator*(double s, const TaylorJet& a) { return Complex(s) * a; }
    friend TaylorJet operator*(const TaylorJet& a, double s) { return Complex(s) * a; }

    friend TaylorJet operator+(const TaylorJet& a, Complex s) {
        TaylorJet r = a;
        if (r.length() > 0) r.coef_[0] += s;
        return r;
    }
    friend TaylorJet operator+(Complex s, const TaylorJet& a) { return a + s; }
    friend TaylorJet operator-(const TaylorJet& a, Complex s) { return a + (-s); }
    friend TaylorJet operator-(Complex s, const TaylorJet& a) { return (-a) + s; }

    friend TaylorJet operator/(const TaylorJet& a, const TaylorJet& b);

  private:
    std::vector<Complex> coef_;
};

inline TaylorJet jet_reciprocal(const TaylorJet& u) {
    const std::size_t n = u.length();
    if (n == 0 || u[0] == Complex(0.0))
        throw InvalidParameter("jet_reciprocal: leading coefficient is zero");
    TaylorJet r(n);
    r[0] = Complex(1.0) / u[0];
    for (std::size_t k = 1; k < n; ++k) {
        Complex s(0.0);
        for (std::size_t j = 1; j <= k; ++j) s += u[j] * r[k - j];
        r[k] = -s / u[0];
    }
    return r;
}

inline TaylorJet operator/(const TaylorJet& a, const TaylorJet& b) {
    return a * jet_reciprocal(b);
}

inline TaylorJet jet_exp(const TaylorJet& u) {
    const std::size_t n = u.length();
    TaylorJet e(n);
    if (n == 0) return e;
    e[0] = std::exp(u[0]);
    for (std::size_t k = 1; k < n; ++k) {
        Complex s(0.0);
        for (std::size_t j = 1; j <= k; ++j) s += double(j) * u[j] * e[k - j];
        e[k] = s / double(k);
    }
    return e;
}

inline std::pair<TaylorJet, TaylorJet> jet_sin_cos(const TaylorJet& u) {
    const std::size_t n = u.length();
    TaylorJet s(n), c(n);
    if (n == 0) return {s, c};
    s[0] = std::sin(u[0]);
    c[0] = std::cos(u[0]);
    for (std::size_t k = 1; k < n; ++k) {
        Complex as(0.0), ac(0.0);
        for (std::size_t j = 1; j <= k; ++j) {
            as += double(j) * u[j] * c[k - j];
            ac += double(j) * u[j] * s[k - j];
        }
        s[k] = as / double(k);
        c[k] = -ac / double(k);
    }
    return {s, c};
}

inline TaylorJet jet_sin(const TaylorJet& u) { return jet_sin_cos(u).first; }
inline TaylorJet jet_cos(const TaylorJet& u) { return jet_sin_cos(u).second; }

inline TaylorJet jet_pow(const TaylorJet& u, int n) {
    if (n < 0) return jet_reciprocal(jet_pow(u, -n));
    TaylorJet r = TaylorJet::constant(Complex(1.0), u.length());
    TaylorJet base = u;
    while (n > 0) {
        if (n & 1) r = r * base;
        base = base * base;
        n >>= 1;
    }
    return r;
}

}  // namespace cxode

#endif
