#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "pmom/cyclotomic.hpp"

using namespace pmom;

namespace {

Cyclotomic random_element(long p, unsigned level, std::mt19937_64& rng, int spread = 6) {
    size_t ph = phi_ppow(p, level);
    Cyclotomic acc(p);
    for (size_t k = 0; k < ph; ++k) {
        long num = static_cast<long>(rng() % static_cast<uint64_t>(2 * spread + 1)) - spread;
        if (num == 0) continue;
        long den = 1 + static_cast<long>(rng() % 3);
        acc += Cyclotomic::root_of_unity(p, level, static_cast<long>(k))
                   .scaled(make_rational(Int(num), Int(den)));
    }
    return acc;
}

}  // namespace

TEST_CASE("zeta_3 squared reduces against Phi_3") {
    Cyclotomic z = Cyclotomic::root_of_unity(3, 1, 1);
    Cyclotomic z2 = z * z;
    CHECK(z2.coeff(0) == Rational(-1));
    CHECK(z2.coeff(1) == Rational(-1));
}

TEST_CASE("compatible powers across levels") {
    // zeta_9^3 + 1 + zeta_3 = 1 + 2 zeta_3 embedded at level 2
    Cyclotomic z9 = Cyclotomic::root_of_unity(3, 2, 1);
    Cyclotomic z3 = Cyclotomic::root_of_unity(3, 1, 1);
    Cyclotomic lhs = z9 * z9 * z9 + Cyclotomic::from_int(3, 1) + z3;
    Cyclotomic rhs = (Cyclotomic::from_int(3, 1) + z3.scaled(Rational(2))).embed_to_level(2);
    CHECK(lhs == rhs);
    CHECK(lhs.level() == 2);
}

TEST_CASE("division restores the identity") {
    Cyclotomic z = Cyclotomic::root_of_unity(3, 1, 1);
    Cyclotomic one = Cyclotomic::from_int(3, 1);
    CHECK((z - one) / (z - one) == one);
    std::mt19937_64 rng(3);
    Cyclotomic x = random_element(5, 2, rng);
    if (!x.is_zero()) CHECK(x / x == Cyclotomic::from_int(5, 1).embed_to_level(2));
}

TEST_CASE("embedding preserves valuation") {
    std::mt19937_64 rng(17);
    for (int rep = 0; rep < 50; ++rep) {
        long p = rep % 2 ? 3 : 5;
        Cyclotomic x = random_element(p, 1, rng);
        Cyclotomic y = x.embed_to_level(2);
        CHECK(x.valuation() == y.valuation());
    }
    // rational constants embed to constants
    Cyclotomic five = Cyclotomic::from_int(3, 5).embed_to_level(2);
    CHECK(five.to_rational() == Rational(5));
}

TEST_CASE("valuation fixed points") {
    CHECK(Cyclotomic::from_int(3, 3).valuation() == PadicVal(Rational(1)));
    CHECK(Cyclotomic(3).valuation().is_infinite());

    // v_3(zeta_9 - 1) = 1/6
    Cyclotomic z9m1 = Cyclotomic::root_minus_one(3, 2, 1);
    CHECK(z9m1.valuation() == PadicVal(Rational(1, 6)));

    // v_3(zeta_3 - zeta_3^2) = 1/2, norm +-3 by the resultant oracle
    Cyclotomic d = Cyclotomic::root_of_unity(3, 1, 1) - Cyclotomic::root_of_unity(3, 1, 2);
    Rational nm = oracle::norm_by_resultant(d);
    CHECK((nm == 3 || nm == -3));
    CHECK(d.valuation() == PadicVal(Rational(1, 2)));
}

TEST_CASE("valuation agrees with the resultant oracle") {
    std::mt19937_64 rng(23);
    for (long p : {2L, 3L, 5L}) {
        for (unsigned level : {1u, 2u}) {
            for (int rep = 0; rep < 8; ++rep) {
                Cyclotomic x = random_element(p, level, rng);
                CHECK(x.valuation() == oracle::valuation_by_resultant(x));
            }
        }
    }
}

TEST_CASE("valuation of root-of-unity minus one by exact order") {
    for (long p : {2L, 3L, 5L}) {
        for (unsigned n : {1u, 2u, 3u}) {
            size_t pn = upow(p, n);
            for (size_t k = 1; k < pn; ++k) {
                unsigned j = n;
                size_t kk = k;
                while (kk % static_cast<size_t>(p) == 0) { kk /= static_cast<size_t>(p); --j; }
                Cyclotomic x = Cyclotomic::root_minus_one(p, n, static_cast<long>(k));
                CHECK(x.valuation() ==
                      PadicVal(Rational(1, static_cast<long>(phi_ppow(p, j)))));
            }
        }
    }
}

TEST_CASE("ring axioms on random triples") {
    std::mt19937_64 rng(5);
    for (long p : {2L, 3L, 5L}) {
        for (int rep = 0; rep < 6; ++rep) {
            Cyclotomic a = random_element(p, 2, rng, 4);
            Cyclotomic b = random_element(p, 1, rng, 4);
            Cyclotomic c = random_element(p, 2, rng, 4);
            CHECK((a * b) * c == a * (b * c));
            CHECK(a * (b + c) == a * b + a * c);
            CHECK(a + b == b + a);
        }
    }
}

TEST_CASE("valuation is multiplicative and ultrametric") {
    std::mt19937_64 rng(29);
    for (long p : {3L, 5L}) {
        for (int rep = 0; rep < 10; ++rep) {
            Cyclotomic a = random_element(p, rep % 3 == 0 ? 3 : 2, rng, 4);
            Cyclotomic b = random_element(p, 2, rng, 4);
            if (a.is_zero() || b.is_zero()) continue;
            PadicVal va = a.valuation(), vb = b.valuation();
            CHECK((a * b).valuation() == va + vb);
            Cyclotomic s = a + b;
            if (!s.is_zero()) {
                PadicVal vs = s.valuation();
                PadicVal low = va < vb ? va : vb;
                CHECK(!(vs < low));
            }
        }
    }
}

TEST_CASE("galois action") {
    Cyclotomic z = Cyclotomic::root_of_unity(3, 1, 1);
    CHECK(z.galois(-1) == Cyclotomic::root_of_unity(3, 1, 2));
    std::mt19937_64 rng(31);
    for (int rep = 0; rep < 10; ++rep) {
        Cyclotomic x = random_element(3, 2, rng);
        CHECK(x.galois(1) == x);
        CHECK(x.galois(2).galois(4) == x.galois(8));
        CHECK(x.galois(5).valuation() == x.valuation());
    }
    CHECK_THROWS(z.galois(3));
}

TEST_CASE("inverse of root minus one closed form") {
    for (long p : {3L, 5L}) {
        for (unsigned n : {1u, 2u}) {
            Cyclotomic a = Cyclotomic::root_minus_one(p, n, 1);
            Cyclotomic inv = Cyclotomic::inv_root_minus_one(p, n, 1);
            CHECK(a * inv == Cyclotomic::from_int(p, 1).embed_to_level(n));
        }
    }
    // non-primitive exponent strips to the exact order
    Cyclotomic a = Cyclotomic::root_minus_one(3, 2, 3);
    Cyclotomic inv = Cyclotomic::inv_root_minus_one(3, 2, 3);
    CHECK((a * inv).to_rational() == Rational(1));
}

TEST_CASE("division by zero raises") {
    Cyclotomic z = Cyclotomic::root_of_unity(3, 1, 1);
    CHECK_THROWS_AS(z / Cyclotomic(3), std::domain_error);
}
