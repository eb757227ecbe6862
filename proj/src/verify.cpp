#include "pmom/verify.hpp"

#include <random>
#include <sstream>

#include "pmom/digit.hpp"
#include "pmom/elliptic.hpp"
#include "pmom/hor_l.hpp"
#include "pmom/measure.hpp"
#include "pmom/moments.hpp"

namespace pmom {

namespace {

struct Checker {
    SuiteResult res;
    explicit Checker(std::string name) { res.name = std::move(name); }
    void check(bool ok, const std::string& what) {
        if (ok) {
            res.passed++;
        } else {
            res.failed++;
            res.failures.push_back(what);
        }
    }
};

Measure random_measure(const GroupShape& sh, std::mt19937_64& rng, long spread = 9) {
    std::vector<Cyclotomic> c;
    c.reserve(sh.size());
    for (size_t i = 0; i < sh.size(); ++i) {
        long num = static_cast<long>(rng() % static_cast<uint64_t>(2 * spread + 1)) - spread;
        long den = 1 + static_cast<long>(rng() % 4);
        if (den % sh.p == 0) den++;
        c.push_back(Cyclotomic::from_rational(sh.p, make_rational(Int(num), Int(den))));
    }
    return Measure(sh, std::move(c));
}

std::vector<GroupShape> small_shapes(long p, unsigned max_total) {
    std::vector<GroupShape> out;
    std::vector<std::vector<unsigned>> stack{{}};
    while (!stack.empty()) {
        auto cur = stack.back();
        stack.pop_back();
        unsigned tot = 0;
        for (unsigned e : cur) tot += e;
        if (!cur.empty()) out.emplace_back(p, cur);
        for (unsigned next = 1; tot + next <= max_total; ++next) {
            auto ext = cur;
            ext.push_back(next);
            stack.push_back(ext);
        }
    }
    return out;
}

}  // namespace

SuiteResult verify_digit(uint64_t seed) {
    Checker ck("digit");
    std::mt19937_64 rng(seed);

    // digit map is a bijection on every small shape
    for (long p : {2L, 3L, 5L}) {
        for (const auto& sh : small_shapes(p, 5)) {
            std::vector<char> hit(sh.size(), 0);
            bool ok = true;
            for (size_t flat = 0; flat < sh.size(); ++flat) {
                size_t d = digit_forward(sh, sh.tuple_of(flat));
                if (d >= sh.size() || hit[d]) { ok = false; break; }
                hit[d] = 1;
                if (digit_inverse(sh, d) != sh.tuple_of(flat)) { ok = false; break; }
            }
            ck.check(ok, "digit bijection on a shape of total " +
                             std::to_string(sh.total_exp()) + " (p=" + std::to_string(p) + ")");
        }
    }

    // closed-form Fourier coefficients against the defining sum, and the
    // constant-valuation property of the non-vanishing ones
    for (long p : {2L, 3L, 5L}) {
        for (const auto& sh : small_shapes(p, 3)) {
            unsigned before_last = sh.total_exp() - sh.exps[sh.factors() - 1];
            for (unsigned N = before_last + 1; N <= sh.total_exp(); ++N) {
                PsiSpec psi{N, 1};
                PadicVal common = PadicVal::infinity();
                bool val_ok = true, eq_ok = true;
                for (size_t flat = 0; flat < sh.size(); ++flat) {
                    CharacterTuple chi = CharacterTuple::from_flat(sh, flat);
                    Cyclotomic closed = closed_form_fourier(sh, psi, chi);
                    Cyclotomic brute = brute_force_fourier(sh, psi, chi);
                    if (!(closed == brute)) eq_ok = false;
                    if (!closed.is_zero()) {
                        PadicVal v = closed.valuation();
                        if (common.is_infinite())
                            common = v;
                        else if (!(common == v))
                            val_ok = false;
                    }
                }
                ck.check(eq_ok, "closed form = defining sum (p=" + std::to_string(p) + ")");
                ck.check(val_ok, "nonzero coefficients share a valuation");
            }
        }
    }

    // weighted-sum expansion equals the Amice evaluation on random measures
    for (long p : {3L, 5L}) {
        for (int rep = 0; rep < 4; ++rep) {
            GroupShape sh(p, {1, 1});
            Measure nu = random_measure(sh, rng);
            PsiSpec psi{2, 1};
            Cyclotomic lhs = corollary_evaluation(nu, psi, Exec::Serial);
            Cyclotomic rhs = amice_eval(amice(verticalize(nu)), 2);
            ck.check(lhs == rhs, "corollary route equals Amice evaluation");
        }
    }

    // unit weights are p-adic units
    for (long p : {3L, 5L}) {
        for (unsigned j : {2u, 3u}) {
            for (long c = 0; c < p; ++c) {
                Cyclotomic w = unit_weight(p, j, c * static_cast<long>(upow(p, j - 1)));
                PadicVal v = w.valuation();
                ck.check(!v.is_infinite() && v.value() == 0, "unit weight has valuation 0");
            }
        }
    }

    // planted invariants come back from the synthetic pipeline
    for (long mu : {0L, 1L}) {
        for (long lam : {0L, 2L}) {
            Measure nu = synthetic_measure(3, 3u, mu, lam, 1, seed ^ (mu * 7 + lam));
            AmicePoly top = amice(verticalize(nu));
            AmicePoly low = amice(verticalize(pushforward_drop_last(nu)));
            WeierstrassInvariants w = weierstrass_invariants({low, top}, 1);
            ck.check(!w.mu_infinite && w.mu == mu && w.lambda == lam,
                     "synthetic invariants recovered (mu=" + std::to_string(mu) +
                         ", lambda=" + std::to_string(lam) + ")");
        }
    }

    return ck.res;
}

SuiteResult verify_measure(uint64_t seed) {
    Checker ck("measure");
    std::mt19937_64 rng(seed);

    for (long p : {2L, 3L, 5L}) {
        std::vector<GroupShape> shapes;
        shapes.emplace_back(p, std::vector<unsigned>{1, 1});
        if (p < 5) shapes.emplace_back(p, std::vector<unsigned>{2, 1});
        for (const auto& sh : shapes) {
            Measure nu = random_measure(sh, rng);
            std::vector<Cyclotomic> vals = evaluate_all(nu, Exec::Serial);
            Measure back = fourier_inverse(sh, vals, Exec::Serial);
            ck.check(back == nu, "Fourier inversion round trip");

            Measure nu2 = random_measure(sh, rng);
            Measure conv = convolve(nu, nu2);
            bool mult = true;
            for (size_t flat = 0; flat < sh.size(); ++flat) {
                CharacterTuple chi = CharacterTuple::from_flat(sh, flat);
                if (!(evaluate(conv, chi) == evaluate(nu, chi) * evaluate(nu2, chi)))
                    mult = false;
            }
            ck.check(mult, "convolution is multiplicative under evaluation");

            // pushforward is a ring map
            Measure pa = pushforward_drop_last(nu), pb = pushforward_drop_last(nu2);
            ck.check(pushforward_drop_last(conv) == convolve(pa, pb),
                     "pushforward commutes with convolution");

            // fiber masses resum to the total
            Cyclotomic total = nu.total_mass();
            Cyclotomic acc(sh.p);
            for (size_t a = 0; a < sh.factor_size(0); ++a)
                acc += fiber_mass(nu, 1, {static_cast<long>(a)});
            ck.check(acc == total, "fiber masses sum to the total mass");
        }
    }

    // zero divisor: ([g]-1)(1+[g]+...+[g^{ord-1}]) = 0
    {
        GroupShape sh(3, {2});
        Measure a = Measure::dirac(sh, {3});  // order 3 element of Z/9
        Measure d0 = Measure::dirac(sh, {0});
        Measure lhs = a;
        for (size_t i = 0; i < sh.size(); ++i)
            lhs.coeff_mut(i) = a.coeff(i) - d0.coeff(i);
        Measure rhs = Measure::zero(sh);
        for (long t = 0; t < 3; ++t) {
            Measure term = Measure::dirac(sh, {3 * t});
            for (size_t i = 0; i < sh.size(); ++i)
                rhs.coeff_mut(i) += term.coeff(i);
        }
        Measure prod = convolve(lhs, rhs);
        ck.check(prod == Measure::zero(sh), "zero-divisor witness in the group algebra");
    }

    // serialization round trip
    {
        GroupShape sh(3, {1, 2});
        Measure nu = random_measure(sh, rng);
        ck.check(Measure::from_json(nu.to_json()) == nu, "measure JSON round trip");
    }

    return ck.res;
}

SuiteResult verify_symbols(uint64_t seed) {
    Checker ck("symbols");
    std::mt19937_64 rng(seed);
    EllipticCurve E(curve_11a1());
    Int bound = E.default_denominator_bound();
    const int digits = 12;

    ck.check(E.modular_symbol(0, 1, +1, bound, digits) == Rational(1, 5), "<0>+ = 1/5 on 11a1");

    for (int rep = 0; rep < 6; ++rep) {
        long q = 2 + static_cast<long>(rng() % 28);
        if (q % 11 == 0) q++;
        long a = 1 + static_cast<long>(rng() % static_cast<uint64_t>(q));
        while (std::gcd(a, q) != 1) a++;
        Rational plus = E.modular_symbol(a, q, +1, bound, digits);
        ck.check(E.modular_symbol(-a, q, +1, bound, digits) == plus, "plus symbols are even");
        ck.check(E.modular_symbol(a + q, q, +1, bound, digits) == plus, "period one in a/q");
        Rational minus = E.modular_symbol(a, q, -1, bound, digits);
        ck.check(E.modular_symbol(-a, q, -1, bound, digits) == -minus, "minus symbols are odd");
    }

    // Hecke: a_ell <a/q> = <ell a/q> + sum_b <(a+bq)/(ell q)>
    for (long ell : {2L, 3L}) {
        for (long q : {5L, 7L, 9L, 13L, 25L, 29L}) {
            for (long a : {1L, 2L}) {
                if (std::gcd(a, q) != 1) continue;
                Rational lhs = Rational(E.ap(ell)) * E.modular_symbol(a, q, +1, bound, digits);
                Rational rhs = E.modular_symbol(ell * a, q, +1, bound, digits);
                for (long b = 0; b < ell; ++b) {
                    long num = a + b * q, den = ell * q;
                    long g = std::gcd(num, den);
                    rhs += E.modular_symbol(num / g, den / g, +1, bound, digits);
                }
                ck.check(lhs == rhs, "Hecke relation at ell=" + std::to_string(ell) +
                                         ", q=" + std::to_string(q));
            }
        }
    }

    // doubled precision reproduces the reconstructed rationals
    {
        EllipticCurve E2(curve_11a1());
        for (long a : {1L, 2L, 3L}) {
            Rational r1 = E.modular_symbol(a, 7, +1, bound, digits);
            Rational r2 = E2.modular_symbol(a, 7, +1, bound, digits * 2);
            ck.check(r1 == r2, "doubled precision agrees at a=" + std::to_string(a));
        }
    }

    return ck.res;
}

std::vector<SuiteResult> verify_all(uint64_t seed) {
    return {verify_digit(seed), verify_measure(seed), verify_symbols(seed)};
}

}  // namespace pmom
