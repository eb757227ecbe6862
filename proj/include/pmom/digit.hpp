#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pmom/measure.hpp"

namespace pmom {

// Additive character psi of Z_p with conductor p^N, psi(1) = zeta_{p^N}^u,
// gcd(u, p) = 1.
struct PsiSpec {
    unsigned N = 1;
    long u = 1;
};

// Mixed-radix digit image of a tuple: sum_i a_i p^{m_1+...+m_{i-1}}.
// Coincides with the flat index of the coefficient table.
size_t digit_forward(const GroupShape& shape, const std::vector<long>& tuple);
std::vector<long> digit_inverse(const GroupShape& shape, size_t value);

// Relabel along the digit bijection onto the single-factor shape (sum m_i).
Measure verticalize(const Measure& nu);

// Truncated power series attached to a vertical measure:
// sum_a c_a (1+T)^a as a polynomial of degree < p^M.  Evaluation at
// T = zeta_{p^j} - 1 (j <= M) recovers additive-character values.
struct AmicePoly {
    long p = 0;
    unsigned M = 0;
    long e = 1;  // valuation scale of the coefficient ring (synthetic layer)
    std::vector<Cyclotomic> coeff;

    size_t degree_bound() const { return coeff.size(); }
    std::string to_json() const;
    static AmicePoly from_json(const std::string& text);
};

AmicePoly amice(const Measure& vertical, long e = 1);
// f(zeta_{p^j}^u - 1) by Horner.
Cyclotomic amice_eval_at(const AmicePoly& f, unsigned j, long u);
// f(zeta_{p^j} - 1).
Cyclotomic amice_eval(const AmicePoly& f, unsigned j);
// f mod ((1+T)^{p^{M_low}} - 1).
AmicePoly amice_reduce(const AmicePoly& f, unsigned M_low);
// Coefficients of the (1+T)-basis expansion (inverse binomial transform).
std::vector<Cyclotomic> amice_to_measure_basis(const AmicePoly& f);

// Fourier coefficient <psi o d^{-1}, chi> in closed form.  Zero unless the
// last character component matches psi^{p^{m_1+...+m_{n-1}}}.
Cyclotomic closed_form_fourier(const GroupShape& shape, const PsiSpec& psi,
                               const CharacterTuple& chi);
// Same coefficient by the defining |G|-term sum (the independent route).
Cyclotomic brute_force_fourier(const GroupShape& shape, const PsiSpec& psi,
                               const CharacterTuple& chi);

// Weighted character-sum expansion of d(nu)(psi); must agree with
// amice(verticalize(nu)) evaluated at psi(1) - 1.
Cyclotomic corollary_evaluation(const Measure& nu, const PsiSpec& psi, Exec exec = Exec::OpenMP);

// (zeta_{p^j} - 1)/(zeta_{p^j} zbar - 1) for z a p-power root of unity given
// as zeta_{p^j}^{zexp}; a p-adic unit.
Cyclotomic unit_weight(long p, unsigned j, long zexp_at_level_j);

struct WeierstrassInvariants {
    bool mu_infinite = false;
    Rational mu;     // in uniformizer units: e * v_p of the extremal coefficient
    long lambda = 0;
    bool certified = false;
    std::string note;

    Rational mu_vp(long e) const { return mu / e; }
};

// Newton data from truncations at increasing levels; certification needs the
// top two levels to agree and lambda to sit below the lower truncation.
WeierstrassInvariants weierstrass_invariants(const std::vector<AmicePoly>& levels, long e);

// Uniformizer with v_p = 1/e as a cyclotomic element (e = 1: p itself,
// e = 2: quadratic Gauss sum for odd p).
Cyclotomic uniformizer(long p, long e);

// Measure with planted Weierstrass data: pi^mu (T^lambda + lower) u(T) with a
// seeded random unit u, moved through the binomial change of basis and the
// inverse digit map.
Measure synthetic_measure(long p, const GroupShape& shape, long mu, long lambda, long e,
                          uint64_t seed);
Measure synthetic_measure(long p, unsigned M, long mu, long lambda, long e, uint64_t seed);

}  // namespace pmom
