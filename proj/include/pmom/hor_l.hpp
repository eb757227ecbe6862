#pragma once

#include <vector>

#include "pmom/digit.hpp"
#include "pmom/elliptic.hpp"
#include "pmom/measure.hpp"

namespace pmom {

// Tower of auxiliary primes ell_i = 1 mod p with chosen generators of
// (Z/ell_i)^x; the first r entries are exempt from the Taylor-Wiles test.
class PrimeSequence {
public:
    PrimeSequence(long p, std::vector<long> primes, std::vector<long> generators, int r);
    // smallest primitive roots as generators
    static PrimeSequence with_default_generators(long p, std::vector<long> primes, int r);

    long p() const { return p_; }
    int r() const { return r_; }
    size_t length() const { return primes_.size(); }
    long prime(size_t i) const { return primes_[i]; }
    long generator(size_t i) const { return gens_[i]; }
    unsigned m(size_t i) const { return m_[i]; }
    GroupShape shape() const { return GroupShape(p_, m_); }
    PrimeSequence prefix(size_t n) const;

    // index of x in <b_i> reduced mod p^{m_i}
    long plog(size_t i, long x) const;

    // every prime past r must satisfy the TW condition for each curve
    void validate_taylor_wiles(EllipticCurve& E) const;

    std::string to_json() const;
    static PrimeSequence from_json(const std::string& text);

private:
    long p_;
    std::vector<long> primes_, gens_;
    std::vector<unsigned> m_;
    int r_;
    std::vector<std::vector<int32_t>> dlog_;  // per prime: dlog table base b_i
};

long smallest_primitive_root(long ell);

// a_ell - z - zbar for z a p-power root of unity (trivial nebentypus, weight 2).
Cyclotomic euler_factor(long p, long a_ell, const Cyclotomic& z);

// Conductor of the Dirichlet character attached to a character tuple.
long character_conductor(const PrimeSequence& seq, const CharacterTuple& chi);

struct LstarOptions {
    int digits = 12;
    Int den_bound;  // 0 = curve default
    Exec exec = Exec::OpenMP;
};

// tau(conj chi) L(E, chi, 1) / Omega^+ as the Birch modular-symbol sum,
// decorated with the modified Euler factors.
Cyclotomic lstar(EllipticCurve& E, const PrimeSequence& seq, const CharacterTuple& chi,
                 const LstarOptions& opt);

// Bare Birch sum sum_{a mod D} conj(chi)(a) <a/D>^+ without Euler factors.
Cyclotomic birch_sum(EllipticCurve& E, const PrimeSequence& seq, const CharacterTuple& chi,
                     const LstarOptions& opt);

// Finite-level horizontal p-adic L-measure: the unique measure interpolating
// lstar over every character of the shape.
Measure build_measure(EllipticCurve& E, const PrimeSequence& seq, const LstarOptions& opt);

// Pushforward of nu_n (dropping the last factor) must equal nu_{n-1} exactly.
bool level_compatibility_check(const Measure& nu_n, const Measure& nu_prev);

}  // namespace pmom
