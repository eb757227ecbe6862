#include <doctest.h>

#include <random>

#include "pmom/kernels.hpp"
#include "pmom/measure.hpp"

using namespace pmom;

namespace {

Measure random_measure(const GroupShape& sh, std::mt19937_64& rng) {
    std::vector<Cyclotomic> c;
    c.reserve(sh.size());
    for (size_t i = 0; i < sh.size(); ++i) {
        long num = static_cast<long>(rng() % 15) - 7;
        long den = 1 + static_cast<long>(rng() % 3);
        c.push_back(Cyclotomic::from_rational(sh.p, make_rational(Int(num), Int(den))));
    }
    return Measure(sh, std::move(c));
}

}  // namespace

TEST_CASE("dirac evaluations") {
    GroupShape sh(3, {1, 1});
    Measure d0 = Measure::dirac(sh, {0, 0});
    Measure dg = Measure::dirac(sh, {2, 1});
    for (size_t flat = 0; flat < sh.size(); ++flat) {
        CharacterTuple chi = CharacterTuple::from_flat(sh, flat);
        CHECK(evaluate(d0, chi) == Cyclotomic::from_int(3, 1).embed_to_level(1));
        CHECK(evaluate(dg, chi) == chi.value_at({2, 1}));
    }
}

TEST_CASE("all-ones measure vanishes at nontrivial characters") {
    GroupShape sh(5, {1});
    std::vector<Cyclotomic> ones(sh.size(), Cyclotomic::from_int(5, 1));
    Measure nu(sh, ones);
    CHECK(evaluate(nu, CharacterTuple::trivial(sh)).to_rational() == Rational(5));
    for (long k = 1; k < 5; ++k)
        CHECK(evaluate(nu, CharacterTuple(sh, {k})).is_zero());
}

TEST_CASE("pushforward on diracs") {
    GroupShape sh(3, {1, 1});
    Measure d = Measure::dirac(sh, {2, 1});
    Measure p = pushforward_drop_last(d);
    CHECK(p == Measure::dirac(GroupShape(3, {1}), {2}));

    GroupShape s9(3, {2});
    Measure d5 = Measure::dirac(s9, {5});
    Measure red = pushforward(d5, {FactorMap{false, 1}});
    CHECK(red == Measure::dirac(GroupShape(3, {1}), {2}));
}

TEST_CASE("pushforward compatible with evaluation") {
    std::mt19937_64 rng(11);
    GroupShape sh(3, {2, 1});
    Measure nu = random_measure(sh, rng);
    Measure red = pushforward(nu, {FactorMap{false, 1}, FactorMap{false, 1}});
    GroupShape tgt(3, {1, 1});
    for (size_t flat = 0; flat < tgt.size(); ++flat) {
        CharacterTuple chi = CharacterTuple::from_flat(tgt, flat);
        // chi o (reduction mod 3) pulls back to exponent 3 k on Z/9
        CharacterTuple lifted(sh, {chi.k[0] * 3, chi.k[1]});
        CHECK(evaluate(red, chi) == evaluate(nu, lifted));
    }
}

TEST_CASE("convolution of diracs translates") {
    GroupShape sh(3, {1, 2});
    Measure a = Measure::dirac(sh, {2, 7});
    Measure b = Measure::dirac(sh, {2, 5});
    CHECK(convolve(a, b) == Measure::dirac(sh, {1, 3}));
    CHECK(convolve(Measure::dirac(sh, {0, 0}), a) == a);
}

TEST_CASE("convolution evaluation is multiplicative") {
    std::mt19937_64 rng(13);
    GroupShape sh(3, {1, 1});
    Measure a = random_measure(sh, rng), b = random_measure(sh, rng);
    Measure c = convolve(a, b);
    for (size_t flat = 0; flat < sh.size(); ++flat) {
        CharacterTuple chi = CharacterTuple::from_flat(sh, flat);
        CHECK(evaluate(c, chi) == evaluate(a, chi) * evaluate(b, chi));
    }
}

TEST_CASE("fourier inversion") {
    GroupShape sh(3, {1, 1});
    // values identically 1 -> dirac at 0
    std::vector<Cyclotomic> ones(sh.size(), Cyclotomic::from_int(3, 1));
    CHECK(fourier_inverse(sh, ones, Exec::Serial) == Measure::dirac(sh, {0, 0}));

    // values chi(g) -> dirac at g
    std::vector<long> g{2, 1};
    std::vector<Cyclotomic> vals;
    for (size_t flat = 0; flat < sh.size(); ++flat)
        vals.push_back(CharacterTuple::from_flat(sh, flat).value_at(g));
    CHECK(fourier_inverse(sh, vals, Exec::Serial) == Measure::dirac(sh, g));

    // round trip on random tables
    std::mt19937_64 rng(17);
    for (long p : {2L, 3L, 5L}) {
        GroupShape s2(p, {1, 2});
        Measure nu = random_measure(s2, rng);
        CHECK(fourier_inverse(s2, evaluate_all(nu, Exec::Serial), Exec::Serial) == nu);
    }
}

TEST_CASE("missing character value is rejected") {
    GroupShape sh(3, {1});
    std::vector<Cyclotomic> vals(2, Cyclotomic::from_int(3, 1));
    CHECK_THROWS_AS(fourier_inverse(sh, vals, Exec::Serial), std::invalid_argument);
}

TEST_CASE("fiber masses") {
    GroupShape sh(3, {1, 1});
    Measure d = Measure::dirac(sh, {2, 1});
    CHECK(fiber_mass(d, 0, {}).to_rational() == Rational(1));
    CHECK(fiber_mass(d, 1, {2}).to_rational() == Rational(1));
    CHECK(fiber_mass(d, 1, {0}).is_zero());

    std::mt19937_64 rng(19);
    Measure nu = random_measure(sh, rng);
    Cyclotomic acc(3);
    for (long a = 0; a < 3; ++a)
        for (long b = 0; b < 3; ++b) acc += fiber_mass(nu, 2, {a, b});
    CHECK(acc == nu.total_mass());
}

TEST_CASE("shape mismatch raises") {
    GroupShape sh(3, {1, 1}), other(3, {1});
    Measure nu = Measure::zero(sh);
    CHECK_THROWS_AS(evaluate(nu, CharacterTuple::trivial(other)), std::invalid_argument);
    CHECK_THROWS_AS(convolve(nu, Measure::zero(other)), std::invalid_argument);
}
