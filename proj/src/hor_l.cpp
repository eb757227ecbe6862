#include "pmom/hor_l.hpp"

#include <json.hpp>

#include <numeric>

namespace pmom {

using json = nlohmann::ordered_json;

namespace {

bool is_prime_long(long n) {
    if (n < 2) return false;
    for (long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

long vp_long(long n, long p) {
    long v = 0;
    while (n % p == 0) { n /= p; ++v; }
    return v;
}

long pow_mod(long b, long e, long m) {
    long long acc = 1, base = ((b % m) + m) % m;
    while (e) {
        if (e & 1) acc = acc * base % m;
        base = base * base % m;
        e >>= 1;
    }
    return static_cast<long>(acc);
}

}  // namespace

long smallest_primitive_root(long ell) {
    if (!is_prime_long(ell)) throw std::invalid_argument("primitive root of a non-prime");
    if (ell == 2) return 1;
    long n = ell - 1;
    std::vector<long> fac;
    long t = n;
    for (long d = 2; d * d <= t; ++d)
        if (t % d == 0) {
            fac.push_back(d);
            while (t % d == 0) t /= d;
        }
    if (t > 1) fac.push_back(t);
    for (long g = 2; g < ell; ++g) {
        bool ok = true;
        for (long f : fac)
            if (pow_mod(g, n / f, ell) == 1) { ok = false; break; }
        if (ok) return g;
    }
    throw std::logic_error("no primitive root found");
}

PrimeSequence::PrimeSequence(long p, std::vector<long> primes, std::vector<long> generators,
                             int r)
    : p_(p), primes_(std::move(primes)), gens_(std::move(generators)), r_(r) {
    if (!is_prime_long(p_)) throw std::invalid_argument("p must be prime");
    if (gens_.size() != primes_.size()) throw std::invalid_argument("one generator per prime");
    if (r_ < 0 || static_cast<size_t>(r_) > primes_.size())
        throw std::invalid_argument("r out of range");
    for (size_t i = 0; i < primes_.size(); ++i) {
        long ell = primes_[i];
        if (!is_prime_long(ell)) throw std::invalid_argument("sequence entries must be prime");
        if (ell % p_ != 1) throw std::invalid_argument("need ell = 1 mod p");
        if (ell == p_) throw std::invalid_argument("ell must differ from p");
        for (size_t j = 0; j < i; ++j)
            if (primes_[j] == ell) throw std::invalid_argument("primes must be distinct");
        m_.push_back(static_cast<unsigned>(vp_long(ell - 1, p_)));
        // generator check: b has full order ell-1
        long b = gens_[i];
        long n = ell - 1;
        std::vector<long> fac;
        long t = n;
        for (long d = 2; d * d <= t; ++d)
            if (t % d == 0) {
                fac.push_back(d);
                while (t % d == 0) t /= d;
            }
        if (t > 1) fac.push_back(t);
        for (long f : fac)
            if (pow_mod(b, n / f, ell) == 1)
                throw std::invalid_argument("generator does not generate (Z/ell)^x");
        // dlog table: dlog[b^j] = j
        std::vector<int32_t> tab(static_cast<size_t>(ell), -1);
        long acc = 1;
        for (long j = 0; j < n; ++j) {
            tab[static_cast<size_t>(acc)] = static_cast<int32_t>(j);
            acc = static_cast<long>(static_cast<long long>(acc) * b % ell);
        }
        dlog_.push_back(std::move(tab));
    }
}

PrimeSequence PrimeSequence::with_default_generators(long p, std::vector<long> primes, int r) {
    std::vector<long> gens;
    gens.reserve(primes.size());
    for (long ell : primes) gens.push_back(smallest_primitive_root(ell));
    return PrimeSequence(p, std::move(primes), std::move(gens), r);
}

PrimeSequence PrimeSequence::prefix(size_t n) const {
    if (n > primes_.size()) throw std::invalid_argument("prefix longer than sequence");
    return PrimeSequence(p_, std::vector<long>(primes_.begin(), primes_.begin() + n),
                         std::vector<long>(gens_.begin(), gens_.begin() + n),
                         std::min<int>(r_, static_cast<int>(n)));
}

long PrimeSequence::plog(size_t i, long x) const {
    long ell = primes_[i];
    long xx = ((x % ell) + ell) % ell;
    if (xx == 0) throw std::invalid_argument("plog of a residue divisible by ell");
    long d = dlog_[i][static_cast<size_t>(xx)];
    return d % static_cast<long>(upow(p_, m_[i]));
}

void PrimeSequence::validate_taylor_wiles(EllipticCurve& E) const {
    for (size_t i = 0; i < primes_.size(); ++i) {
        if (E.conductor() % primes_[i] == 0)
            throw std::invalid_argument("sequence prime divides the conductor");
        if (static_cast<int>(i) >= r_ && !E.is_taylor_wiles(p_, primes_[i]))
            throw std::invalid_argument("prime " + std::to_string(primes_[i]) +
                                        " fails the Taylor-Wiles condition");
    }
}

std::string PrimeSequence::to_json() const {
    json j;
    j["p"] = p_;
    j["primes"] = primes_;
    j["generators"] = gens_;
    j["r"] = r_;
    return j.dump();
}

PrimeSequence PrimeSequence::from_json(const std::string& text) {
    json j = json::parse(text);
    long p = j.at("p").get<long>();
    auto primes = j.at("primes").get<std::vector<long>>();
    int r = j.value("r", 0);
    if (j.contains("generators") && !j.at("generators").empty())
        return PrimeSequence(p, primes, j.at("generators").get<std::vector<long>>(), r);
    return with_default_generators(p, primes, r);
}

Cyclotomic euler_factor(long p, long a_ell, const Cyclotomic& z) {
    return Cyclotomic::from_int(p, a_ell) - z - z.conj();
}

long character_conductor(const PrimeSequence& seq, const CharacterTuple& chi) {
    long d = 1;
    for (size_t i = 0; i < seq.length(); ++i)
        if (chi.k[i] != 0) d *= seq.prime(i);
    return d;
}

namespace {

// chi(x) for x coprime to the conductor, as a root of unity exponent at the
// top level m_max; chi_i(x) = zeta_{p^{m_i}}^{k_i * plog_i(x)}.
Cyclotomic character_value(const PrimeSequence& seq, const CharacterTuple& chi, long x,
                           bool conj) {
    unsigned L = 0;
    for (size_t i = 0; i < seq.length(); ++i) L = std::max(L, seq.m(i));
    size_t pL = upow(seq.p(), L);
    long long e = 0;
    for (size_t i = 0; i < seq.length(); ++i) {
        if (chi.k[i] == 0) continue;
        long long term = static_cast<long long>(chi.k[i]) * seq.plog(i, x) %
                         static_cast<long long>(pL);
        e += term * static_cast<long long>(upow(seq.p(), L - seq.m(i)));
        e %= static_cast<long long>(pL);
    }
    if (conj) e = -e;
    return Cyclotomic::root_of_unity(seq.p(), L, static_cast<long>(e));
}

}  // namespace

Cyclotomic birch_sum(EllipticCurve& E, const PrimeSequence& seq, const CharacterTuple& chi,
                     const LstarOptions& opt) {
    long D = character_conductor(seq, chi);
    Int bound = opt.den_bound == 0 ? E.default_denominator_bound() : opt.den_bound;
    if (D == 1) {
        Rational l0 = E.modular_symbol(0, 1, +1, bound, opt.digits);
        return Cyclotomic::from_rational(seq.p(), l0);
    }
    E.batch_symbols(D, +1, bound, opt.digits, opt.exec);
    Cyclotomic acc(seq.p());
    for (long a = 1; a < D; ++a) {
        if (std::gcd(a, D) != 1) continue;
        Rational sym = E.modular_symbol(a, D, +1, bound, opt.digits);
        if (sym == 0) continue;
        acc += character_value(seq, chi, a, /*conj=*/true).scaled(sym);
    }
    return acc;
}

Cyclotomic lstar(EllipticCurve& E, const PrimeSequence& seq, const CharacterTuple& chi,
                 const LstarOptions& opt) {
    if (chi.shape != seq.shape()) throw std::invalid_argument("lstar: character shape mismatch");
    long p = seq.p();
    long D = character_conductor(seq, chi);
    Cyclotomic val = birch_sum(E, seq, chi, opt);
    for (size_t i = 0; i < seq.length(); ++i) {
        long ell = seq.prime(i);
        bool divides = chi.k[i] != 0;
        if (static_cast<int>(i) < seq.r() && !divides) {
            // leading primes away from the conductor multiply their factor
            Cyclotomic z = character_value(seq, chi, ell, /*conj=*/false);
            val *= euler_factor(p, E.ap(ell), z);
        } else if (static_cast<int>(i) >= seq.r() && divides) {
            // Taylor-Wiles primes inside the conductor divide theirs; the
            // restriction chi^{(i)} drops the i-th component
            CharacterTuple rest = chi;
            rest.k[i] = 0;
            Cyclotomic z = character_value(seq, rest, ell, /*conj=*/false);
            Cyclotomic f = euler_factor(p, E.ap(ell), z);
            PadicVal v = f.valuation();
            if (v.is_infinite() || !(v.value() == 0))
                throw std::logic_error("Euler factor at a Taylor-Wiles prime is not a unit");
            val = val / f;
        }
    }
    (void)D;
    return val;
}

Measure build_measure(EllipticCurve& E, const PrimeSequence& seq, const LstarOptions& opt) {
    seq.validate_taylor_wiles(E);
    GroupShape sh = seq.shape();
    // warm the symbol cache on every conductor once, largest first
    {
        std::vector<long> divisors{1};
        for (size_t i = 0; i < seq.length(); ++i) {
            size_t n = divisors.size();
            for (size_t j = 0; j < n; ++j) divisors.push_back(divisors[j] * seq.prime(i));
        }
        Int bound = opt.den_bound == 0 ? E.default_denominator_bound() : opt.den_bound;
        std::sort(divisors.rbegin(), divisors.rend());
        for (long d : divisors)
            if (d > 1) E.batch_symbols(d, +1, bound, opt.digits, opt.exec);
    }
    std::vector<Cyclotomic> values(sh.size(), Cyclotomic(seq.p()));
    for (size_t flat = 0; flat < sh.size(); ++flat)
        values[flat] = lstar(E, seq, CharacterTuple::from_flat(sh, flat), opt);
    Measure nu = fourier_inverse(sh, values, opt.exec);
    // interpolation must reproduce every value exactly
    std::vector<Cyclotomic> again = evaluate_all(nu, opt.exec);
    for (size_t flat = 0; flat < sh.size(); ++flat)
        if (!(again[flat] == values[flat]))
            throw std::logic_error("measure does not interpolate its own values");
    return nu;
}

bool level_compatibility_check(const Measure& nu_n, const Measure& nu_prev) {
    if (nu_n.shape().factors() != nu_prev.shape().factors() + 1)
        throw std::invalid_argument("expected consecutive tower levels");
    for (size_t i = 0; i < nu_prev.shape().factors(); ++i)
        if (nu_prev.shape().exps[i] != nu_n.shape().exps[i])
            throw std::invalid_argument("lower level is not a prefix of the upper one");
    return pushforward_drop_last(nu_n) == nu_prev;
}

}  // namespace pmom
