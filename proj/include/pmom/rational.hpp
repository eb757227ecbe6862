#pragma once

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>

namespace pmom {

using Int = mpz_class;
using Rational = mpq_class;

// p-adic valuation with the point at infinity (valuation of zero).
// Values are rationals because valuations of cyclotomic integers live in
// (1/phi(p^n)) * Z.
class PadicVal {
public:
    PadicVal() : inf_(true) {}
    explicit PadicVal(Rational v) : inf_(false), v_(std::move(v)) { v_.canonicalize(); }
    static PadicVal infinity() { return PadicVal(); }

    bool is_infinite() const { return inf_; }
    const Rational& value() const {
        if (inf_) throw std::domain_error("valuation is +infinity");
        return v_;
    }

    PadicVal operator+(const PadicVal& o) const {
        if (inf_ || o.inf_) return infinity();
        return PadicVal(v_ + o.v_);
    }
    bool operator==(const PadicVal& o) const {
        if (inf_ != o.inf_) return false;
        return inf_ || v_ == o.v_;
    }
    bool operator<(const PadicVal& o) const {
        if (inf_) return false;
        if (o.inf_) return true;
        return v_ < o.v_;
    }
    bool operator>=(const Rational& r) const { return inf_ || v_ >= r; }

    std::string str() const { return inf_ ? "inf" : v_.get_str(); }

private:
    bool inf_;
    Rational v_;
};

inline long vp_int(const Int& x, long p) {
    if (x == 0) throw std::domain_error("vp of zero integer");
    Int tmp;
    return static_cast<long>(mpz_remove(tmp.get_mpz_t(), x.get_mpz_t(), Int(p).get_mpz_t()));
}

inline PadicVal vp_rational(const Rational& x, long p) {
    Rational c = x;
    c.canonicalize();
    if (c == 0) return PadicVal::infinity();
    long v = vp_int(c.get_num(), p) - vp_int(c.get_den(), p);
    return PadicVal(Rational(v));
}

// two-argument mpq construction does not canonicalize; this does
inline Rational make_rational(const Int& num, const Int& den) {
    Rational q{num, den};
    q.canonicalize();
    return q;
}

inline Int int_pow(long base, unsigned long e) {
    Int r;
    mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(base), e);
    return r;
}

// p^e as size_t, guarded against overflow; group indices stay at desk scale.
inline size_t upow(long p, unsigned e) {
    size_t r = 1;
    for (unsigned i = 0; i < e; ++i) {
        if (r > (static_cast<size_t>(1) << 56) / static_cast<size_t>(p))
            throw std::overflow_error("p^e exceeds supported index range");
        r *= static_cast<size_t>(p);
    }
    return r;
}

// phi(p^n) = p^n - p^{n-1} for n >= 1, and 1 for n = 0.
inline size_t phi_ppow(long p, unsigned n) {
    if (n == 0) return 1;
    return upow(p, n) - upow(p, n - 1);
}

inline Rational parse_rational(const std::string& s) {
    Rational q;
    if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad rational literal: " + s);
    q.canonicalize();
    return q;
}

}  // namespace pmom
