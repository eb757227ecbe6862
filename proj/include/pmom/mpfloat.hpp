#pragma once

#include <mpfr.h>

#include <string>
#include <utility>

#include "pmom/rational.hpp"

namespace pmom {

// Minimal RAII wrapper around mpfr_t; precision travels with the value.
class MpReal {
public:
    explicit MpReal(mpfr_prec_t prec = 128) { mpfr_init2(x_, prec); mpfr_set_zero(x_, 1); }
    MpReal(const MpReal& o) { mpfr_init2(x_, mpfr_get_prec(o.x_)); mpfr_set(x_, o.x_, MPFR_RNDN); }
    MpReal(MpReal&& o) noexcept { mpfr_init2(x_, 2); mpfr_swap(x_, o.x_); }
    MpReal& operator=(const MpReal& o) {
        if (this != &o) { mpfr_set_prec(x_, mpfr_get_prec(o.x_)); mpfr_set(x_, o.x_, MPFR_RNDN); }
        return *this;
    }
    MpReal& operator=(MpReal&& o) noexcept { mpfr_swap(x_, o.x_); return *this; }
    ~MpReal() { mpfr_clear(x_); }

    static MpReal from_long(long v, mpfr_prec_t prec) {
        MpReal r(prec);
        mpfr_set_si(r.x_, v, MPFR_RNDN);
        return r;
    }
    static MpReal from_rational(const Rational& q, mpfr_prec_t prec) {
        MpReal r(prec);
        mpfr_set_q(r.x_, q.get_mpq_t(), MPFR_RNDN);
        return r;
    }
    static MpReal pi(mpfr_prec_t prec) {
        MpReal r(prec);
        mpfr_const_pi(r.x_, MPFR_RNDN);
        return r;
    }

    mpfr_prec_t prec() const { return mpfr_get_prec(x_); }
    mpfr_ptr raw() { return x_; }
    mpfr_srcptr raw() const { return x_; }

    double to_double() const { return mpfr_get_d(x_, MPFR_RNDN); }
    int sign() const { return mpfr_sgn(x_); }

#define PMOM_MPREAL_BINOP(opname, fn)                                  \
    MpReal opname(const MpReal& o) const {                             \
        MpReal r(std::max(prec(), o.prec()));                          \
        fn(r.x_, x_, o.x_, MPFR_RNDN);                                 \
        return r;                                                      \
    }
    PMOM_MPREAL_BINOP(operator+, mpfr_add)
    PMOM_MPREAL_BINOP(operator-, mpfr_sub)
    PMOM_MPREAL_BINOP(operator*, mpfr_mul)
    PMOM_MPREAL_BINOP(operator/, mpfr_div)
#undef PMOM_MPREAL_BINOP

    MpReal operator-() const {
        MpReal r(prec());
        mpfr_neg(r.x_, x_, MPFR_RNDN);
        return r;
    }
    MpReal sqrt() const {
        MpReal r(prec());
        mpfr_sqrt(r.x_, x_, MPFR_RNDN);
        return r;
    }
    MpReal abs() const {
        MpReal r(prec());
        mpfr_abs(r.x_, x_, MPFR_RNDN);
        return r;
    }
    MpReal exp() const {
        MpReal r(prec());
        mpfr_exp(r.x_, x_, MPFR_RNDN);
        return r;
    }
    static MpReal agm(const MpReal& a, const MpReal& b) {
        MpReal r(std::max(a.prec(), b.prec()));
        mpfr_agm(r.x_, a.x_, b.x_, MPFR_RNDN);
        return r;
    }
    bool less_than(const MpReal& o) const { return mpfr_cmp(x_, o.x_) < 0; }

    std::string str(size_t digits = 20) const {
        char* s = nullptr;
        mpfr_asprintf(&s, "%.*Rg", static_cast<int>(digits), x_);
        std::string out(s);
        mpfr_free_str(s);
        return out;
    }

private:
    mpfr_t x_;
};

struct MpComplex {
    MpReal re, im;

    MpComplex(mpfr_prec_t prec = 128) : re(prec), im(prec) {}
    MpComplex(MpReal r, MpReal i) : re(std::move(r)), im(std::move(i)) {}

    MpComplex operator+(const MpComplex& o) const { return {re + o.re, im + o.im}; }
    MpComplex operator-(const MpComplex& o) const { return {re - o.re, im - o.im}; }
    MpComplex operator*(const MpComplex& o) const {
        return {re * o.re - im * o.im, re * o.im + im * o.re};
    }
    MpComplex scale(const MpReal& s) const { return {re * s, im * s}; }
    MpComplex conj() const { return {re, -im}; }
    MpReal norm2() const { return re * re + im * im; }
    MpComplex operator/(const MpComplex& o) const {
        MpReal n = o.norm2();
        MpComplex t = *this * o.conj();
        return {t.re / n, t.im / n};
    }
};

}  // namespace pmom
