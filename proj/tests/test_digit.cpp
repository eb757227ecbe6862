#include <doctest.h>

#include <random>

#include "pmom/digit.hpp"

using namespace pmom;

namespace {

Measure random_measure(const GroupShape& sh, std::mt19937_64& rng) {
    std::vector<Cyclotomic> c;
    c.reserve(sh.size());
    for (size_t i = 0; i < sh.size(); ++i) {
        long num = static_cast<long>(rng() % 15) - 7;
        c.push_back(Cyclotomic::from_rational(sh.p, Rational(num)));
    }
    return Measure(sh, std::move(c));
}

}  // namespace

TEST_CASE("digit forward values") {
    CHECK(digit_forward(GroupShape(3, {1, 1}), {2, 1}) == 5);
    CHECK(digit_forward(GroupShape(3, {1, 1}), {0, 0}) == 0);
    CHECK(digit_forward(GroupShape(2, {2, 3}), {3, 5}) == 23);
}

TEST_CASE("verticalize relabels along the digit map") {
    GroupShape sh(3, {1, 1});
    Measure d = Measure::dirac(sh, {2, 1});
    Measure v = verticalize(d);
    CHECK(v.shape() == GroupShape(3, {2}));
    CHECK(v == Measure::dirac(GroupShape(3, {2}), {5}));

    std::mt19937_64 rng(3);
    Measure nu = random_measure(GroupShape(3, {2, 1}), rng);
    CHECK(verticalize(nu).total_mass() == nu.total_mass());
    // inverse relabel round trip
    Measure back(sh, verticalize(Measure::dirac(sh, {1, 2})).coeffs());
    CHECK(back == Measure::dirac(sh, {1, 2}));
}

TEST_CASE("amice of diracs") {
    GroupShape flat(3, {2});
    AmicePoly f0 = amice(Measure::dirac(flat, {0}));
    CHECK(f0.coeff[0].to_rational() == Rational(1));
    for (size_t k = 1; k < f0.coeff.size(); ++k) CHECK(f0.coeff[k].is_zero());

    AmicePoly f1 = amice(Measure::dirac(flat, {1}));
    CHECK(f1.coeff[0].to_rational() == Rational(1));
    CHECK(f1.coeff[1].to_rational() == Rational(1));
    for (size_t k = 2; k < f1.coeff.size(); ++k) CHECK(f1.coeff[k].is_zero());
}

TEST_CASE("amice evaluation matches additive character sums") {
    std::mt19937_64 rng(5);
    GroupShape flat(3, {2});
    Measure nu = random_measure(flat, rng);
    AmicePoly f = amice(nu);
    for (unsigned j : {1u, 2u}) {
        // direct sum: sum_a c_a zeta_{p^j}^a
        Cyclotomic direct(3);
        for (size_t a = 0; a < nu.shape().size(); ++a)
            direct += nu.coeff(a).times_root(j, static_cast<long>(a));
        CHECK(amice_eval(f, j) == direct);
    }
}

TEST_CASE("closed-form Fourier coefficients") {
    GroupShape sh(3, {1, 1});
    // n=1 slice: chi_1 = psi gives p^{m_1}
    GroupShape s1(3, {1});
    PsiSpec psi1{1, 1};
    CHECK(closed_form_fourier(s1, psi1, CharacterTuple(s1, {1})).to_rational() == Rational(3));
    CHECK(closed_form_fourier(s1, psi1, CharacterTuple(s1, {0})).is_zero());

    // mismatch in the last component vanishes
    PsiSpec psi{2, 1};
    CHECK(closed_form_fourier(sh, psi, CharacterTuple(sh, {1, 0})).is_zero());

    // p=3, m=(1,1), psi(1)=zeta_9: value 3 (zeta_9^3 - 1)/(zeta_9 conj(chi_1)(1) - 1)
    for (long k1 : {0L, 1L, 2L}) {
        CharacterTuple chi(sh, {k1, 1});
        Cyclotomic got = closed_form_fourier(sh, psi, chi);
        Cyclotomic expect = Cyclotomic::root_minus_one(3, 1, 1)
                                .scaled(Rational(3)) *
                            Cyclotomic::inv_root_minus_one(3, 2, 1 - 3 * k1);
        CHECK(got == expect);
        CHECK(got == brute_force_fourier(sh, psi, chi));
    }
}

TEST_CASE("closed form equals the defining sum everywhere (small shapes)") {
    for (long p : {2L, 3L}) {
        for (auto exps : std::vector<std::vector<unsigned>>{{1}, {2}, {1, 1}, {1, 2}}) {
            GroupShape sh(p, exps);
            unsigned before_last = sh.total_exp() - sh.exps[sh.factors() - 1];
            for (unsigned N = before_last + 1; N <= sh.total_exp(); ++N) {
                for (long u : {1L, p + 1 == 3 ? 1L : p - 1}) {
                    PsiSpec psi{N, u};
                    for (size_t flat = 0; flat < sh.size(); ++flat) {
                        CharacterTuple chi = CharacterTuple::from_flat(sh, flat);
                        CHECK(closed_form_fourier(sh, psi, chi) ==
                              brute_force_fourier(sh, psi, chi));
                    }
                }
            }
        }
    }
}

TEST_CASE("conductor window is enforced") {
    GroupShape sh(3, {1, 1});
    CHECK_THROWS_AS(closed_form_fourier(sh, PsiSpec{1, 1}, CharacterTuple::trivial(sh)),
                    std::invalid_argument);
    CHECK_THROWS_AS(corollary_evaluation(Measure::zero(sh), PsiSpec{1, 1}),
                    std::invalid_argument);
}

TEST_CASE("corollary evaluation equals the Amice route") {
    std::mt19937_64 rng(7);
    // dirac case: both routes give 1 at psi for nu = delta_0
    GroupShape sh(3, {1, 1});
    PsiSpec psi{2, 1};
    Measure d0 = Measure::dirac(sh, {0, 0});
    CHECK(corollary_evaluation(d0, psi, Exec::Serial).is_one());

    // shifted dirac: (1+T)^{d(g)} route
    Measure dg = Measure::dirac(sh, {1, 2});
    CHECK(corollary_evaluation(dg, psi, Exec::Serial) ==
          Cyclotomic::root_of_unity(3, 2, static_cast<long>(digit_forward(sh, {1, 2}))));

    for (int rep = 0; rep < 5; ++rep) {
        Measure nu = random_measure(sh, rng);
        CHECK(corollary_evaluation(nu, psi, Exec::Serial) ==
              amice_eval(amice(verticalize(nu)), 2));
    }

    // conductor 27 window on a (1,1,1) shape
    GroupShape s3(3, {1, 1, 1});
    Measure nu = random_measure(s3, rng);
    CHECK(corollary_evaluation(nu, PsiSpec{3, 1}, Exec::Serial) ==
          amice_eval(amice(verticalize(nu)), 3));
}

TEST_CASE("unit weights") {
    CHECK(unit_weight(3, 2, 0).is_one());
    for (long p : {3L, 5L}) {
        for (unsigned j : {2u, 3u}) {
            for (long t = 0; t < p; ++t) {
                Cyclotomic w = unit_weight(p, j, t * static_cast<long>(upow(p, j - 1)));
                PadicVal v = w.valuation();
                CHECK(!v.is_infinite());
                CHECK(v.value() == 0);
            }
        }
    }
    CHECK_THROWS_AS(unit_weight(3, 1, 1), std::invalid_argument);
}

TEST_CASE("weierstrass invariants of simple polynomials") {
    // constant 1: unit
    GroupShape f2(3, {2}), f1(3, {1});
    AmicePoly one_lo = amice(Measure::dirac(f1, {0}));
    AmicePoly one_hi = amice(Measure::dirac(f2, {0}));
    WeierstrassInvariants w = weierstrass_invariants({one_lo, one_hi}, 1);
    CHECK(!w.mu_infinite);
    CHECK(w.mu == 0);
    CHECK(w.lambda == 0);
    CHECK(w.certified);

    // T^2 + pT: distinguished of degree 2
    AmicePoly f;
    f.p = 3;
    f.M = 2;
    f.e = 1;
    f.coeff.assign(9, Cyclotomic(3));
    f.coeff[1] = Cyclotomic::from_int(3, 3);
    f.coeff[2] = Cyclotomic::from_int(3, 1);
    AmicePoly flo = amice_reduce(f, 1);
    WeierstrassInvariants w2 = weierstrass_invariants({flo, f}, 1);
    CHECK(!w2.mu_infinite);
    CHECK(w2.mu == 0);
    CHECK(w2.lambda == 2);

    // zero truncations
    AmicePoly z_lo, z_hi;
    z_lo.p = z_hi.p = 3;
    z_lo.M = 1;
    z_hi.M = 2;
    z_lo.coeff.assign(3, Cyclotomic(3));
    z_hi.coeff.assign(9, Cyclotomic(3));
    WeierstrassInvariants wz = weierstrass_invariants({z_lo, z_hi}, 1);
    CHECK(wz.mu_infinite);
    CHECK(wz.lambda == 0);
    CHECK(!wz.certified);
}

TEST_CASE("incompatible levels are rejected") {
    GroupShape f2(3, {2}), f1(3, {1});
    AmicePoly lo = amice(Measure::dirac(f1, {1}));
    AmicePoly hi = amice(Measure::dirac(f2, {2}));  // reduces to delta_2 mod 3, not delta_1
    CHECK_THROWS_AS(weierstrass_invariants({lo, hi}, 1), std::invalid_argument);
}

TEST_CASE("synthetic measures recover planted invariants") {
    std::mt19937_64 seeds(41);
    for (long mu : {0L, 1L, 2L}) {
        for (long lam : {0L, 1L, 2L, 3L}) {
            uint64_t seed = seeds();
            Measure nu = synthetic_measure(3, 3u, mu, lam, 1, seed);
            AmicePoly top = amice(verticalize(nu));
            AmicePoly low = amice(verticalize(pushforward_drop_last(nu)));
            WeierstrassInvariants w = weierstrass_invariants({low, top}, 1);
            CHECK(!w.mu_infinite);
            CHECK(w.mu == mu);
            CHECK(w.lambda == lam);
        }
    }
}

TEST_CASE("synthetic scale e=2 plants half-integral valuations") {
    Measure nu = synthetic_measure(3, 3u, 1, 1, 2, 99);
    AmicePoly top = amice(verticalize(nu), 2);
    AmicePoly low = amice(verticalize(pushforward_drop_last(nu)), 2);
    WeierstrassInvariants w = weierstrass_invariants({low, top}, 2);
    CHECK(!w.mu_infinite);
    CHECK(w.mu == 1);  // in pi-units; v_p = 1/2
    CHECK(w.mu_vp(2) == Rational(1, 2));
    CHECK(w.lambda == 1);

    // (0,1): f(0) has positive valuation, f'(0) is a unit
    Measure nu01 = synthetic_measure(3, 3u, 0, 1, 2, 100);
    AmicePoly f = amice(verticalize(nu01), 2);
    PadicVal v0 = f.coeff[0].valuation();
    CHECK((v0.is_infinite() || v0.value() >= Rational(1, 2)));
    PadicVal v1 = f.coeff[1].valuation();
    CHECK(!v1.is_infinite());
    CHECK(v1.value() == 0);
}

TEST_CASE("synthetic lambda must fit below the truncation") {
    CHECK_THROWS_AS(synthetic_measure(3, 1u, 0, 3, 1, 1), std::invalid_argument);
}

TEST_CASE("amice polynomial JSON round trip") {
    Measure nu = synthetic_measure(3, 2u, 0, 1, 2, 5);
    AmicePoly f = amice(verticalize(nu), 2);
    AmicePoly g = AmicePoly::from_json(f.to_json());
    CHECK(g.p == f.p);
    CHECK(g.M == f.M);
    CHECK(g.e == f.e);
    CHECK(g.coeff == f.coeff);
}
