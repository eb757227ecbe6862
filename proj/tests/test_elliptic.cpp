#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <numeric>

#include "oracles.hpp"
#include "pmom/elliptic.hpp"

using namespace pmom;

namespace {

// L(E,1) = 2 sum a_n/n e^{-2 pi n / sqrt N} for Fricke eigenvalue -1
double l_value_series(EllipticCurve& E) {
    double s = 0, y = 2 * M_PI / std::sqrt(static_cast<double>(E.conductor()));
    for (long n = 1; n < 60; ++n) s += E.an(n) / static_cast<double>(n) * std::exp(-y * n);
    return 2 * s;
}

}  // namespace

TEST_CASE("traces of Frobenius by point counting") {
    EllipticCurve E(curve_11a1());
    CHECK(E.ap(2) == -2);
    CHECK(E.ap(7) == -2);
    CHECK(E.ap(13) == 4);
    for (long ell : {2L, 3L, 5L, 7L, 13L, 17L, 19L, 23L})
        CHECK(E.ap(ell) == oracle::ap_naive(E.config(), ell));
    CHECK_THROWS_AS(E.ap(11), std::invalid_argument);

    // Hasse bound and 5-torsion divisibility of the point counts
    for (long ell : {3L, 7L, 13L, 19L, 29L, 71L}) {
        long a = E.ap(ell);
        CHECK(static_cast<double>(a) * a <= 4.0 * ell);
        CHECK((ell + 1 - a) % 5 == 0);
    }
}

TEST_CASE("multiplicative extension of coefficients") {
    EllipticCurve E(curve_11a1());
    CHECK(E.an(1) == 1);
    CHECK(E.an(4) == E.ap(2) * E.ap(2) - 2);
    CHECK(E.an(14) == E.ap(2) * E.ap(7));
    CHECK(E.an(11) == 1);
    CHECK(E.an(121) == 1);
    // Euler recurrence at a prime power
    CHECK(E.an(8) == E.ap(2) * E.an(4) - 2 * E.an(2));
}

TEST_CASE("taylor-wiles classification") {
    EllipticCurve E(curve_11a1());
    CHECK(E.is_taylor_wiles(3, 7));
    CHECK(E.is_taylor_wiles(3, 13));
    CHECK(E.is_taylor_wiles(3, 19));
    CHECK_FALSE(E.is_taylor_wiles(3, 5));   // 5 != 1 mod 3
    CHECK_FALSE(E.is_taylor_wiles(5, 11));  // divides the conductor
    CHECK(E.ap(31) == 7);
    CHECK_FALSE(E.is_taylor_wiles(5, 31));  // a_31 = 7 = 2 mod 5
}

TEST_CASE("real period of 11a1") {
    EllipticCurve E(curve_11a1());
    CHECK(E.discriminant() < 0);
    MpReal omega = E.real_period(40);
    double om = omega.to_double();
    CHECK(om == doctest::Approx(1.26920930).epsilon(1e-8));
    // against the L-value: <0>+ = 1/5 means Omega = 5 L(E,1)
    CHECK(om == doctest::Approx(5 * l_value_series(E)).epsilon(1e-10));
    // against direct quadrature
    CHECK(om == doctest::Approx(oracle::real_period_quadrature(E.config())).epsilon(1e-8));
    // higher precision agrees with the coarser value
    CHECK(E.real_period(80).to_double() == doctest::Approx(om).epsilon(1e-14));
}

TEST_CASE("real period with positive discriminant (37a1)") {
    EllipticCurve E(curve_37a1());
    CHECK(E.discriminant() > 0);
    double om = E.real_period(40).to_double();
    CHECK(om == doctest::Approx(oracle::real_period_quadrature(E.config())).epsilon(1e-8));
}

TEST_CASE("fricke eigenvalues resolved numerically") {
    CurveConfig c11 = curve_11a1();
    c11.fricke_sign = 0;
    EllipticCurve E11(c11);
    (void)E11.modular_symbol(0, 1, +1, E11.default_denominator_bound(), 12);
    CHECK(E11.fricke() == -1);

    CurveConfig c37 = curve_37a1();
    c37.fricke_sign = 0;
    EllipticCurve E37(c37);
    (void)E37.modular_symbol(1, 3, +1, E37.default_denominator_bound(), 12);
    CHECK(E37.fricke() == +1);
}

TEST_CASE("base point symbol and L-value") {
    EllipticCurve E(curve_11a1());
    CHECK(E.modular_symbol(0, 1, +1, E.default_denominator_bound(), 12) == Rational(1, 5));
    // rank one: L(37a1, 1) = 0
    EllipticCurve E37(curve_37a1());
    CHECK(E37.modular_symbol(0, 1, +1, E37.default_denominator_bound(), 12) == 0);
}

TEST_CASE("symbol relations on 11a1") {
    EllipticCurve E(curve_11a1());
    Int bound = E.default_denominator_bound();
    for (long q : {3L, 7L, 10L, 23L}) {
        for (long a = 1; a < q; ++a) {
            if (std::gcd(a, q) != 1) continue;
            Rational s = E.modular_symbol(a, q, +1, bound, 12);
            CHECK(E.modular_symbol(q - a, q, +1, bound, 12) == s);
            CHECK(E.modular_symbol(a + q, q, +1, bound, 12) == s);
        }
    }
    // Hecke relation for ell in {2,3}, q <= 30 (cusps reduced to lowest terms)
    for (long ell : {2L, 3L}) {
        for (long q = 2; q <= 30; ++q) {
            if (q % 11 == 0) continue;
            for (long a : {1L, q - 1}) {
                if (std::gcd(a, q) != 1) continue;
                Rational lhs = Rational(E.ap(ell)) * E.modular_symbol(a, q, +1, bound, 12);
                long g0 = std::gcd(ell * a, q);
                Rational rhs = E.modular_symbol(ell * a / g0, q / g0, +1, bound, 12);
                for (long b = 0; b < ell; ++b) {
                    long num = a + b * q, den = ell * q;
                    long g = std::gcd(num, den);
                    rhs += E.modular_symbol(num / g, den / g, +1, bound, 12);
                }
                CHECK(lhs == rhs);
            }
        }
    }
}

TEST_CASE("batch symbols agree with single queries") {
    EllipticCurve A(curve_11a1()), B(curve_11a1());
    Int bound = A.default_denominator_bound();
    A.batch_symbols(13, +1, bound, 12, Exec::Serial);
    for (long a = 1; a < 13; ++a)
        CHECK(A.modular_symbol(a, 13, +1, bound, 12) ==
              B.modular_symbol(a, 13, +1, bound, 12));
}

TEST_CASE("doubled precision reproduces reconstructed symbols") {
    EllipticCurve A(curve_11a1()), B(curve_11a1());
    Int bound = A.default_denominator_bound();
    for (long a = 1; a < 7; ++a) {
        CHECK(A.modular_symbol(a, 7, +1, bound, 12) == B.modular_symbol(a, 7, +1, bound, 24));
        CHECK(A.modular_symbol(a, 7, -1, bound, 12) == B.modular_symbol(a, 7, -1, bound, 24));
    }
}

TEST_CASE("reconstruction failure carries the float value") {
    MpReal x = MpReal::pi(128);
    MpReal tol(128);
    mpfr_set_d(tol.raw(), 1e-20, MPFR_RNDN);
    CHECK_THROWS_AS((void)reconstruct_rational(x, Int(50), tol), ReconstructionError);
    try {
        (void)reconstruct_rational(x, Int(50), tol);
    } catch (const ReconstructionError& e) {
        CHECK(e.approx == doctest::Approx(3.14159265).epsilon(1e-6));
    }
}

TEST_CASE("symbol cache round trips through CSV") {
    EllipticCurve A(curve_11a1());
    Int bound = A.default_denominator_bound();
    (void)A.modular_symbol(1, 7, +1, bound, 12);
    (void)A.modular_symbol(2, 7, -1, bound, 12);
    std::string path = "symcache_test.csv";
    A.save_symbol_cache(path);
    EllipticCurve B(curve_11a1());
    B.load_symbol_cache(path);
    CHECK(B.cached_symbols() >= 2);
    CHECK(B.modular_symbol(1, 7, +1, bound, 12) == A.modular_symbol(1, 7, +1, bound, 12));
    std::remove(path.c_str());
}

TEST_CASE("curve config validation") {
    CurveConfig bad = curve_11a1();
    bad.conductor = 7;  // 7 does not divide the discriminant of 11a1
    CHECK_THROWS_AS(EllipticCurve{bad}, std::invalid_argument);

    CurveConfig sing;
    sing.label = "singular";
    sing.conductor = 1;
    CHECK_THROWS_AS(EllipticCurve{sing}, std::invalid_argument);
}

TEST_CASE("curve config JSON round trip") {
    CurveConfig c = curve_11a1();
    CurveConfig d = CurveConfig::from_json(c.to_json());
    CHECK(d.label == c.label);
    CHECK(d.a4 == c.a4);
    CHECK(d.conductor == c.conductor);
    CHECK(d.torsion_order == c.torsion_order);
    CHECK(d.bad_ap == c.bad_ap);
}
