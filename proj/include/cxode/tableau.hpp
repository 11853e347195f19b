#ifndef CXODE_TABLEAU_HPP
#define CXODE_TABLEAU_HPP

#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <string>

#include "cxode/errors.hpp"

namespace cxode {

// Runge-Kutta coefficients (A, b, c), optionally with an embedded companion
// weight vector b_star of lower order.
struct ButcherTableau {
    std::string name;
    int order = 0;
    std::optional<int> embedded_order;
    Eigen::MatrixXd a;
    Eigen::VectorXd b;
    Eigen::VectorXd c;
    std::optional<Eigen::VectorXd> b_star;

    int stage_count() const { return static_cast<int>(b.size()); }

    bool is_explicit() const {
        for (int i = 0; i < a.rows(); ++i)
            for (int j = i; j < a.cols(); ++j)
                if (a(i, j) != 0.0) return false;
        return true;
    }

    void validate(double tol = 1e-14) const {
        const int s = stage_count();
        if (s < 1 || a.rows() != s || a.cols() != s || c.size() != s)
            throw InvalidParameter("tableau '" + name + "': inconsistent dimensions");
        for (int i = 0; i < s; ++i)
            if (std::abs(c(i) - a.row(i).sum()) > tol)
                throw InvalidParameter("tableau '" + name + "': row-sum condition violated");
        if (std::abs(b.sum() - 1.0) > tol)
            throw InvalidParameter("tableau '" + name + "': weights do not sum to one");
        if (b_star) {
            if (b_star->size() != s)
                throw InvalidParameter("tableau '" + name + "': embedded weight size mismatch");
            if (std::abs(b_star->sum() - 1.0) > tol)
                throw InvalidParameter("tableau '" + name + "': embedded weights do not sum to one");
        }
    }
};

// Registry of the schemes used throughout: rk1, rk2 (parametrised by alpha,
// midpoint by default), classical rk4, the 2-stage Gauss method grk2, the
// 3-stage Lobatto IIIA method, and the embedded pairs bs3 and dop5.
inline ButcherTableau make_tableau(const std::string& name,
                                   std::optional<double> alpha = std::nullopt) {
    ButcherTableau t;
    t.name = name;
    if (name == "rk1") {
        t.order = 1;
        t.a = Eigen::MatrixXd::Zero(1, 1);
        t.b = Eigen::VectorXd::Ones(1);
        t.c = Eigen::VectorXd::Zero(1);
    } else if (name == "rk2") {
        const double al = alpha.value_or(0.5);
        if (al == 0.0) throw InvalidParameter("rk2: alpha must be nonzero");
        t.order = 2;
        t.a = Eigen::MatrixXd::Zero(2, 2);
        t.a(1, 0) = al;
        t.b.resize(2);
        t.b << 1.0 - 1.0 / (2.0 * al), 1.0 / (2.0 * al);
        t.c.resize(2);
        t.c << 0.0, al;
    } else if (name == "rk4") {
        t.order = 4;
        t.a = Eigen::MatrixXd::Zero(4, 4);
        t.a(1, 0) = 0.5;
        t.a(2, 1) = 0.5;
        t.a(3, 2) = 1.0;
        t.b.resize(4);
        t.b << 1.0 / 6, 1.0 / 3, 1.0 / 3, 1.0 / 6;
        t.c.resize(4);
        t.c << 0.0, 0.5, 0.5, 1.0;
    } else if (name == "grk2") {
        const double s3 = std::sqrt(3.0);
        t.order = 4;
        t.a.resize(2, 2);
        t.a << 0.25, 0.25 - s3 / 6.0, 0.25 + s3 / 6.0, 0.25;
        t.b.resize(2);
        t.b << 0.5, 0.5;
        t.c.resize(2);
        t.c << 0.5 - s3 / 6.0, 0.5 + s3 / 6.0;
    } else if (name == "lobattoIIIA3") {
        t.order = 4;
        t.a.resize(3, 3);
        t.a << 0.0, 0.0, 0.0,
               5.0 / 24, 1.0 / 3, -1.0 / 24,
               1.0 / 6, 2.0 / 3, 1.0 / 6;
        t.b.resize(3);
        t.b << 1.0 / 6, 2.0 / 3, 1.0 / 6;
        t.c.resize(3);
        t.c << 0.0, 0.5, 1.0;
    } else if (name == "bs3") {
        t.order = 3;
        t.embedded_order = 2;
        t.a = Eigen::MatrixXd::Zero(4, 4);
        t.a(1, 0) = 0.5;
        t.a(2, 1) = 0.75;
        t.a(3, 0) = 2.0 / 9;
        t.a(3, 1) = 1.0 / 3;
        t.a(3, 2) = 4.0 / 9;
        t.b.resize(4);
        t.b << 2.0 / 9, 1.0 / 3, 4.0 / 9, 0.0;
        t.c.resize(4);
        t.c << 0.0, 0.5, 0.75, 1.0;
        Eigen::VectorXd bs(4);
        bs << 7.0 / 24, 0.25, 1.0 / 3, 1.0 / 8;
        t.b_star = bs;
    } else if (name == "dop5") {
        t.order = 5;
        t.embedded_order = 4;
        t.a = Eigen::MatrixXd::Zero(7, 7);
        t.a(1, 0) = 1.0 / 5;
        t.a(2, 0) = 3.0 / 40;
        t.a(2, 1) = 9.0 / 40;
        t.a(3, 0) = 44.0 / 45;
        t.a(3, 1) = -56.0 / 15;
        t.a(3, 2) = 32.0 / 9;
        t.a(4, 0) = 19372.0 / 6561;
        t.a(4, 1) = -25360.0 / 2187;
        t.a(4, 2) = 64448.0 / 6561;
        t.a(4, 3) = -212.0 / 729;
        t.a(5, 0) = 9017.0 / 3168;
        t.a(5, 1) = -355.0 / 33;
        t.a(5, 2) = 46732.0 / 5247;
        t.a(5, 3) = 49.0 / 176;
        t.a(5, 4) = -5103.0 / 18656;
        t.a(6, 0) = 35.0 / 384;
        t.a(6, 2) = 500.0 / 1113;
        t.a(6, 3) = 125.0 / 192;
        t.a(6, 4) = -2187.0 / 6784;
        t.a(6, 5) = 11.0 / 84;
        t.b.resize(7);
        t.b << 35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84, 0.0;
        Eigen::VectorXd bs(7);
        bs << 5179.0 / 57600, 0.0, 7571.0 / 16695, 393.0 / 640, -92097.0 / 339200,
              187.0 / 2100, 1.0 / 40;
        t.b_star = bs;
        t.c = t.a.rowwise().sum();
    } else {
        throw UnknownScheme("unknown scheme '" + name + "'");
    }
    t.validate();
    return t;
}

}  // namespace cxode

#endif
