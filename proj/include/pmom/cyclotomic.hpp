#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pmom/rational.hpp"

namespace pmom {

// Exact element of Q(zeta_{p^n}).
//
// Representation: numerator vector of length phi(p^n) over the power basis
// 1, z, ..., z^{phi-1} (z = zeta_{p^n}), reduced mod Phi_{p^n}, with a single
// positive denominator.  Normalized so that gcd(content(num), den) = 1 and
// den > 0; two equal field elements at the same level therefore have
// identical representations.  Level 0 is Q itself.
//
// Values are immutable in spirit: every operation returns a fresh element,
// so instances can be shared freely across threads.
class Cyclotomic {
public:
    Cyclotomic() : p_(0), level_(0) {}
    explicit Cyclotomic(long p) : p_(check_prime(p)), level_(0), num_(1, Int(0)), den_(1) {}

    static Cyclotomic from_rational(long p, const Rational& x);
    static Cyclotomic from_int(long p, long x) { return from_rational(p, Rational(x)); }
    // Canonical reduction of an exponent-indexed vector of length p^level
    // (coefficient of zeta^k at index k) over a common denominator.
    static Cyclotomic from_group_ring(long p, unsigned level, std::vector<Int> expvec, Int den);
    // zeta_{p^level}^k
    static Cyclotomic root_of_unity(long p, unsigned level, long k);
    // zeta_{p^level}^k - 1
    static Cyclotomic root_minus_one(long p, unsigned level, long k);
    // (zeta_{p^level}^k - 1)^{-1}, k coprime to p.  Closed form: the inverse of
    // (w - 1) for w of exact order p^j is (1/p^j) * sum_{a=1}^{p^j-1} a w^a.
    static Cyclotomic inv_root_minus_one(long p, unsigned level, long k);

    long prime() const { return p_; }
    unsigned level() const { return level_; }
    size_t degree() const { return num_.size(); }
    bool is_zero() const;
    bool is_one() const;
    bool is_rational() const;
    // Throws unless the element actually lies in Q.
    Rational to_rational() const;
    Rational coeff(size_t k) const { return Rational(num_[k]) / Rational(den_); }
    const std::vector<Int>& raw_num() const { return num_; }
    const Int& raw_den() const { return den_; }

    Cyclotomic embed_to_level(unsigned target) const;
    // Image under zeta -> zeta^a, gcd(a, p) = 1.
    Cyclotomic galois(long a) const;
    Cyclotomic conj() const { return level_ == 0 ? *this : galois(-1); }
    // Same element at its minimal level.
    Cyclotomic compress() const;

    Cyclotomic operator-() const;
    Cyclotomic operator+(const Cyclotomic& o) const;
    Cyclotomic operator-(const Cyclotomic& o) const;
    Cyclotomic operator*(const Cyclotomic& o) const;
    Cyclotomic operator/(const Cyclotomic& o) const;
    Cyclotomic& operator+=(const Cyclotomic& o) { return *this = *this + o; }
    Cyclotomic& operator-=(const Cyclotomic& o) { return *this = *this - o; }
    Cyclotomic& operator*=(const Cyclotomic& o) { return *this = *this * o; }

    Cyclotomic scaled(const Rational& r) const;
    // this * zeta_{p^root_level}^e; result sits at max(level, root_level).
    Cyclotomic times_root(unsigned root_level, long e) const;
    // this * (zeta_{p^root_level}^e - 1); one rotation and one subtraction.
    Cyclotomic times_root_minus_one(unsigned root_level, long e) const;

    Cyclotomic inverse() const;

    // Canonical p-adic valuation, v_p(p) = 1.  Computed as
    // v_p(Norm(x)) / phi(p^n) via relative norms down the tower, after
    // compressing to the minimal level.
    PadicVal valuation() const;

    bool operator==(const Cyclotomic& o) const;
    bool operator!=(const Cyclotomic& o) const { return !(*this == o); }

    std::string str() const;

private:
    static long check_prime(long p);
    void normalize();
    static Cyclotomic from_expvec(long p, unsigned level, std::vector<Int> buf, Int den);
    // Multiplies out the Galois orbit over the subfield one level down.
    Cyclotomic relative_norm_down() const;

    long p_;
    unsigned level_;
    std::vector<Int> num_;
    Int den_;
};

}  // namespace pmom
