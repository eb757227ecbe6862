// Test-only oracles, independent of the library's computation paths.
#pragma once

#include <cmath>
#include <vector>

#include "pmom/cyclotomic.hpp"
#include "pmom/elliptic.hpp"

namespace pmom::oracle {

// res(A, B) over Q by the plain Euclidean recurrence.
inline Rational resultant_q(std::vector<Rational> A, std::vector<Rational> B) {
    auto trim = [](std::vector<Rational>& v) {
        while (!v.empty() && v.back() == 0) v.pop_back();
    };
    trim(A);
    trim(B);
    Rational acc(1);
    bool neg = false;
    while (true) {
        if (B.empty()) return Rational(0);
        size_t da = A.size() - 1, db = B.size() - 1;
        if (db == 0) {
            Rational r = acc;
            for (size_t i = 0; i < da; ++i) r *= B[0];
            return neg ? -r : r;
        }
        std::vector<Rational> R = A;
        Rational lb = B[db];
        for (size_t sh = da - db + 1; sh-- > 0;) {
            Rational c = R[db + sh] / lb;
            if (c != 0)
                for (size_t i = 0; i <= db; ++i) R[i + sh] -= c * B[i];
        }
        trim(R);
        size_t dr = R.empty() ? 0 : R.size() - 1;
        if ((da % 2) && (db % 2)) neg = !neg;
        for (size_t i = 0; i < da - dr; ++i) acc *= lb;
        A = std::move(B);
        B = std::move(R);
    }
}

// Norm as Res(Phi_{p^n}, A); the library's valuation path uses relative
// norms down the tower instead.
inline Rational norm_by_resultant(const Cyclotomic& x) {
    const long p = x.prime();
    const unsigned n = x.level();
    if (n == 0) return x.coeff(0);
    size_t block = upow(p, n - 1);
    std::vector<Rational> Phi((static_cast<size_t>(p) - 1) * block + 1, Rational(0));
    for (long j = 0; j < p; ++j) Phi[static_cast<size_t>(j) * block] = 1;
    std::vector<Rational> A(x.degree());
    for (size_t k = 0; k < x.degree(); ++k) A[k] = x.coeff(k);
    return resultant_q(std::move(Phi), std::move(A));
}

inline PadicVal valuation_by_resultant(const Cyclotomic& x) {
    if (x.is_zero()) return PadicVal::infinity();
    Rational nm = norm_by_resultant(x);
    if (nm == 0) return PadicVal::infinity();
    PadicVal v = vp_rational(nm, x.prime());
    return PadicVal(v.value() / Rational(static_cast<long>(phi_ppow(x.prime(), x.level()))));
}

// Point count over F_ell by raw enumeration of the affine plane.
inline long ap_naive(const CurveConfig& c, long ell) {
    long count = 1;
    for (long xx = 0; xx < ell; ++xx)
        for (long yy = 0; yy < ell; ++yy) {
            long long v = (long long)yy * yy + (long long)c.a1 * xx % ell * yy +
                          (long long)c.a3 * yy - ((long long)xx * xx % ell) * xx -
                          (long long)c.a2 * xx % ell * xx - (long long)c.a4 * xx - c.a6;
            v %= ell;
            if (v < 0) v += ell;
            if (v == 0) ++count;
        }
    return ell + 1 - count;
}

// Real Neron period by Simpson quadrature of 2 c_inf int_{e1}^{inf} dx/sqrt(q),
// double precision; good to ~1e-10 which is plenty for a cross-check.
inline double real_period_quadrature(const CurveConfig& c) {
    double b2 = c.a1 * (double)c.a1 + 4.0 * c.a2;
    double b4 = 2.0 * c.a4 + (double)c.a1 * c.a3;
    double b6 = (double)c.a3 * c.a3 + 4.0 * c.a6;
    // real roots of 4x^3 + b2 x^2 + 2 b4 x + b6
    double A = b2 / 4, B = b4 / 2, C = b6 / 4;
    double q = (3 * B - A * A) / 9, r = (9 * A * B - 27 * C - 2 * A * A * A) / 54;
    double det = q * q * q + r * r;
    double e1;
    int nroots;
    double e2 = 0, e3 = 0;
    if (det >= 0) {
        double s = std::cbrt(r + std::sqrt(det)), t = std::cbrt(r - std::sqrt(det));
        e1 = s + t - A / 3;
        nroots = 1;
    } else {
        double theta = std::acos(r / std::sqrt(-q * q * q));
        double x0 = 2 * std::sqrt(-q) * std::cos(theta / 3) - A / 3;
        double x1 = 2 * std::sqrt(-q) * std::cos((theta + 2 * M_PI) / 3) - A / 3;
        double x2 = 2 * std::sqrt(-q) * std::cos((theta + 4 * M_PI) / 3) - A / 3;
        e1 = std::max({x0, x1, x2});
        e3 = std::min({x0, x1, x2});
        e2 = x0 + x1 + x2 - e1 - e3;
        nroots = 3;
    }
    // monic quadratic R with q(x) = 4 (x - e1) R(x)
    double p1, q0;
    if (nroots == 3) {
        p1 = -(e2 + e3);
        q0 = e2 * e3;
    } else {
        p1 = b2 / 4 + e1;
        q0 = b4 / 2 + e1 * p1;
    }
    auto integrand = [&](double th) {
        double t = std::tan(th);
        double x = e1 + t * t;
        double R = (x + p1) * x + q0;
        return (1 + t * t) / std::sqrt(R);
    };
    const int N = 20000;
    double h = (M_PI / 2) / N, sum = 0;
    for (int i = 0; i <= N; ++i) {
        double th = i * h;
        double f = (i == N) ? 1.0 : integrand(th);
        double w = (i == 0 || i == N) ? 1 : (i % 2 ? 4 : 2);
        sum += w * f;
    }
    double omega1 = 2 * sum * h / 3;
    return nroots == 3 ? 2 * omega1 : omega1;
}

}  // namespace pmom::oracle
