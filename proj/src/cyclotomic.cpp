#include "pmom/cyclotomic.hpp"

#include <algorithm>
#include <sstream>

namespace pmom {

namespace {

long mod_ppow(long long k, size_t pn) {
    long long m = k % static_cast<long long>(pn);
    if (m < 0) m += static_cast<long long>(pn);
    return static_cast<long>(m);
}

// Folds an exponent-indexed vector (length p^n) into the canonical basis of
// length phi(p^n), using zeta^{(p-1)p^{n-1}} = -(1 + zeta^{p^{n-1}} + ... ).
void phi_fold(std::vector<Int>& buf, long p, unsigned n) {
    if (n == 0) return;
    size_t pn = buf.size();
    size_t ph = phi_ppow(p, n);
    size_t block = pn / static_cast<size_t>(p);  // p^{n-1}
    for (size_t k = pn; k-- > ph;) {
        if (buf[k] == 0) continue;
        size_t t = k - ph;  // k - (p-1)p^{n-1}, in [0, p^{n-1})
        for (long j = 0; j + 1 < p; ++j) buf[t + static_cast<size_t>(j) * block] -= buf[k];
        buf[k] = 0;
    }
    buf.resize(ph);
}

}  // namespace

long Cyclotomic::check_prime(long p) {
    if (p < 2) throw std::invalid_argument("prime must be >= 2");
    return p;
}

void Cyclotomic::normalize() {
    if (den_ < 0) {
        den_ = -den_;
        for (auto& c : num_) c = -c;
    }
    Int g = den_;
    for (const auto& c : num_) {
        if (g == 1) break;
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    }
    if (g > 1) {
        for (auto& c : num_) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
        mpz_divexact(den_.get_mpz_t(), den_.get_mpz_t(), g.get_mpz_t());
    }
    bool zero = true;
    for (const auto& c : num_)
        if (c != 0) { zero = false; break; }
    if (zero) den_ = 1;
}

Cyclotomic Cyclotomic::from_expvec(long p, unsigned level, std::vector<Int> buf, Int den) {
    phi_fold(buf, p, level);
    Cyclotomic x;
    x.p_ = p;
    x.level_ = level;
    x.num_ = std::move(buf);
    x.den_ = std::move(den);
    x.normalize();
    return x;
}

Cyclotomic Cyclotomic::from_group_ring(long p, unsigned level, std::vector<Int> expvec, Int den) {
    check_prime(p);
    if (expvec.size() != upow(p, level))
        throw std::invalid_argument("from_group_ring: vector length must be p^level");
    return from_expvec(p, level, std::move(expvec), std::move(den));
}

Cyclotomic Cyclotomic::from_rational(long p, const Rational& q) {
    Cyclotomic x(p);
    x.num_[0] = q.get_num();
    x.den_ = q.get_den();
    return x;
}

Cyclotomic Cyclotomic::root_of_unity(long p, unsigned level, long k) {
    check_prime(p);
    size_t pn = upow(p, level);
    std::vector<Int> buf(pn, Int(0));
    buf[static_cast<size_t>(mod_ppow(k, pn))] = 1;
    return from_expvec(p, level, std::move(buf), Int(1));
}

Cyclotomic Cyclotomic::root_minus_one(long p, unsigned level, long k) {
    check_prime(p);
    size_t pn = upow(p, level);
    std::vector<Int> buf(pn, Int(0));
    buf[static_cast<size_t>(mod_ppow(k, pn))] += 1;
    buf[0] -= 1;
    return from_expvec(p, level, std::move(buf), Int(1));
}

Cyclotomic Cyclotomic::inv_root_minus_one(long p, unsigned level, long k) {
    check_prime(p);
    if (level == 0) throw std::invalid_argument("inv_root_minus_one needs a nontrivial root");
    long kk = mod_ppow(k, upow(p, level));
    if (kk == 0) throw std::invalid_argument("inv_root_minus_one: root equals 1");
    // strip to the exact order of the root
    while (kk % p == 0) {
        kk /= p;
        --level;
    }
    size_t pn = upow(p, level);
    std::vector<Int> buf(pn, Int(0));
    size_t idx = 0;
    for (size_t a = 1; a < pn; ++a) {
        idx += static_cast<size_t>(kk);
        if (idx >= pn) idx -= pn;
        buf[idx] += static_cast<unsigned long>(a);
    }
    return from_expvec(p, level, std::move(buf), Int(pn));
}

bool Cyclotomic::is_zero() const {
    for (const auto& c : num_)
        if (c != 0) return false;
    return true;
}

bool Cyclotomic::is_one() const {
    if (den_ != 1 || num_[0] != 1) return false;
    for (size_t k = 1; k < num_.size(); ++k)
        if (num_[k] != 0) return false;
    return true;
}

bool Cyclotomic::is_rational() const {
    return compress().level() == 0;
}

Rational Cyclotomic::to_rational() const {
    Cyclotomic c = compress();
    if (c.level_ != 0) throw std::domain_error("element is not rational");
    Rational r(c.num_[0], c.den_);
    r.canonicalize();
    return r;
}

Cyclotomic Cyclotomic::embed_to_level(unsigned target) const {
    if (target < level_) throw std::invalid_argument("embed_to_level: target below current level");
    if (target == level_) return *this;
    size_t pn = upow(p_, target);
    size_t stride = upow(p_, target - level_);
    std::vector<Int> buf(pn, Int(0));
    for (size_t k = 0; k < num_.size(); ++k) buf[k * stride] = num_[k];
    return from_expvec(p_, target, std::move(buf), den_);
}

Cyclotomic Cyclotomic::galois(long a) const {
    if (level_ == 0) return *this;
    size_t pn = upow(p_, level_);
    long aa = mod_ppow(a, pn);
    if (aa % p_ == 0) throw std::invalid_argument("galois: exponent not coprime to p");
    std::vector<Int> buf(pn, Int(0));
    size_t idx = 0;
    for (size_t k = 0; k < num_.size(); ++k) {
        buf[idx] += num_[k];
        idx += static_cast<size_t>(aa);
        if (idx >= pn) idx -= pn;
    }
    return from_expvec(p_, level_, std::move(buf), den_);
}

Cyclotomic Cyclotomic::compress() const {
    Cyclotomic x = *this;
    while (x.level_ >= 1) {
        bool sub = true;
        for (size_t k = 0; k < x.num_.size(); ++k) {
            if (k % static_cast<size_t>(p_) != 0 && x.num_[k] != 0) { sub = false; break; }
        }
        if (!sub) break;
        size_t ph = phi_ppow(p_, x.level_ - 1);
        std::vector<Int> down(ph);
        for (size_t b = 0; b < ph; ++b) down[b] = x.num_[b * static_cast<size_t>(p_)];
        x.num_ = std::move(down);
        x.level_ -= 1;
    }
    return x;
}

Cyclotomic Cyclotomic::operator-() const {
    Cyclotomic x = *this;
    for (auto& c : x.num_) c = -c;
    return x;
}

Cyclotomic Cyclotomic::operator+(const Cyclotomic& o) const {
    if (p_ != o.p_) throw std::invalid_argument("prime mismatch");
    unsigned lv = std::max(level_, o.level_);
    Cyclotomic a = embed_to_level(lv), b = o.embed_to_level(lv);
    Cyclotomic r;
    r.p_ = p_;
    r.level_ = lv;
    r.den_ = a.den_ * b.den_;
    r.num_.resize(a.num_.size());
    for (size_t k = 0; k < r.num_.size(); ++k) r.num_[k] = a.num_[k] * b.den_ + b.num_[k] * a.den_;
    r.normalize();
    return r;
}

Cyclotomic Cyclotomic::operator-(const Cyclotomic& o) const { return *this + (-o); }

Cyclotomic Cyclotomic::operator*(const Cyclotomic& o) const {
    if (p_ != o.p_) throw std::invalid_argument("prime mismatch");
    unsigned lv = std::max(level_, o.level_);
    Cyclotomic a = embed_to_level(lv), b = o.embed_to_level(lv);
    size_t pn = upow(p_, lv);
    std::vector<Int> buf(pn, Int(0));
    for (size_t i = 0; i < a.num_.size(); ++i) {
        if (a.num_[i] == 0) continue;
        const mpz_srcptr ai = a.num_[i].get_mpz_t();
        for (size_t j = 0; j < b.num_.size(); ++j) {
            if (b.num_[j] == 0) continue;
            size_t idx = i + j;
            if (idx >= pn) idx -= pn;
            mpz_addmul(buf[idx].get_mpz_t(), ai, b.num_[j].get_mpz_t());
        }
    }
    return from_expvec(p_, lv, std::move(buf), a.den_ * b.den_);
}

Cyclotomic Cyclotomic::scaled(const Rational& r) const {
    Cyclotomic x = *this;
    for (auto& c : x.num_) c *= r.get_num();
    x.den_ *= r.get_den();
    x.normalize();
    return x;
}

Cyclotomic Cyclotomic::times_root(unsigned root_level, long e) const {
    unsigned lv = std::max(level_, root_level);
    Cyclotomic x = embed_to_level(lv);
    if (lv == 0) return x;
    size_t pn = upow(p_, lv);
    long long scaled_e = static_cast<long long>(mod_ppow(e, upow(p_, root_level))) *
                         static_cast<long long>(upow(p_, lv - root_level));
    long ee = mod_ppow(scaled_e, pn);
    std::vector<Int> buf(pn, Int(0));
    size_t idx = static_cast<size_t>(ee);
    for (size_t k = 0; k < x.num_.size(); ++k) {
        buf[idx] += x.num_[k];
        if (++idx == pn) idx = 0;
    }
    return from_expvec(p_, lv, std::move(buf), x.den_);
}

Cyclotomic Cyclotomic::times_root_minus_one(unsigned root_level, long e) const {
    return times_root(root_level, e) - embed_to_level(std::max(level_, root_level));
}

Cyclotomic Cyclotomic::relative_norm_down() const {
    // Product over Gal(Q(zeta_{p^n})/Q(zeta_{p^{n-1}})) = {zeta -> zeta^{1+t p^{n-1}}}.
    size_t pnm1 = upow(p_, level_ - 1);
    Cyclotomic acc = *this;
    for (long t = 1; t < p_; ++t)
        acc *= galois(1 + t * static_cast<long>(pnm1));
    Cyclotomic c = acc.compress();
    if (c.level_ >= level_)
        throw std::logic_error("relative norm did not land in the subfield");
    return c;
}

PadicVal Cyclotomic::valuation() const {
    if (is_zero()) return PadicVal::infinity();
    Cyclotomic x = compress();
    if (x.level_ == 0) return vp_rational(Rational(x.num_[0], x.den_), p_);
    size_t ph = phi_ppow(p_, x.level_);
    // Denominator is prime to the numerator content, so it contributes
    // -phi * v_p(den) to v_p(Norm).
    long vden = vp_int(x.den_, p_);
    Cyclotomic y = x;
    y.den_ = 1;
    while (y.level_ > 1) y = y.relative_norm_down();
    if (y.level_ == 1) {
        Cyclotomic acc = y;
        for (long a = 2; a < p_; ++a) acc *= y.galois(a);
        y = acc.compress();
        if (y.level_ != 0) throw std::logic_error("norm to Q failed");
    }
    long vnum = vp_int(y.num_[0], p_);
    return PadicVal(Rational(vnum, ph) - Rational(vden));
}

Cyclotomic Cyclotomic::inverse() const {
    if (is_zero()) throw std::domain_error("division by zero");
    Cyclotomic x = compress();
    if (x.level_ == 0) {
        Rational r(x.den_, x.num_[0]);
        r.canonicalize();
        return from_rational(p_, r).embed_to_level(level_);
    }
    // x^{-1} = (prod of the other conjugates) / Norm(x).
    size_t pn = upow(p_, x.level_);
    Cyclotomic cof = from_rational(p_, 1).embed_to_level(x.level_);
    Int den_saved = x.den_;
    x.den_ = 1;
    for (size_t a = 2; a < pn; ++a) {
        if (a % static_cast<size_t>(p_) == 0) continue;
        cof *= x.galois(static_cast<long>(a));
    }
    Cyclotomic nrm = (x * cof).compress();
    if (nrm.level_ != 0 || nrm.is_zero()) throw std::logic_error("norm computation failed");
    Rational scale = Rational(nrm.den_, nrm.num_[0]) * Rational(den_saved);
    scale.canonicalize();
    return cof.scaled(scale).embed_to_level(level_);
}

Cyclotomic Cyclotomic::operator/(const Cyclotomic& o) const { return *this * o.inverse(); }

bool Cyclotomic::operator==(const Cyclotomic& o) const {
    if (p_ != o.p_) return false;
    if (level_ == o.level_) return den_ == o.den_ && num_ == o.num_;
    unsigned lv = std::max(level_, o.level_);
    Cyclotomic a = embed_to_level(lv), b = o.embed_to_level(lv);
    return a.den_ == b.den_ && a.num_ == b.num_;
}

std::string Cyclotomic::str() const {
    std::ostringstream os;
    os << "[p=" << p_ << ",n=" << level_ << "] (";
    for (size_t k = 0; k < num_.size(); ++k) {
        if (k) os << ", ";
        os << num_[k].get_str();
    }
    os << ") / " << den_.get_str();
    return os.str();
}

}  // namespace pmom
