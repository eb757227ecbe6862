#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "pmom/measure.hpp"
#include "pmom/mpfloat.hpp"

namespace pmom {

struct CurveConfig {
    std::string label;
    long a1 = 0, a2 = 0, a3 = 0, a4 = 0, a6 = 0;
    long conductor = 0;
    long torsion_order = 1;
    int fricke_sign = 0;  // eigenvalue of f under w_N: +1/-1, 0 = unknown
    std::map<long, long> bad_ap;

    static CurveConfig from_json(const std::string& text);
    std::string to_json() const;
};

struct SymbolKey {
    long a, q;
    int sign;
    bool operator<(const SymbolKey& o) const {
        return std::tie(a, q, sign) < std::tie(o.a, o.q, o.sign);
    }
};

// Thrown when no rational with small enough denominator sits near the
// computed float; carries the offending value.
struct ReconstructionError : std::runtime_error {
    double approx;
    ReconstructionError(const std::string& what, double v)
        : std::runtime_error(what), approx(v) {}
};

// Weight-2 arithmetic for one rational elliptic curve: Fourier coefficients
// by point counting, Taylor-Wiles classification, Neron periods via AGM, and
// plus/minus modular symbols reconstructed from period integrals.
class EllipticCurve {
public:
    explicit EllipticCurve(CurveConfig cfg);

    const CurveConfig& config() const { return cfg_; }
    long conductor() const { return cfg_.conductor; }
    const Int& discriminant() const { return disc_; }

    // trace of Frobenius at a good prime, by exhaustive point count
    long ap(long ell) const;
    // full coefficient a_n (multiplicative extension); grows the sieve on demand
    long an(long n);
    void ensure_an(size_t bound);
    // ingest a precomputed n -> a_n table (CSV "n,a_n"), bypassing counting
    void load_an_csv(const std::string& path);

    // ell coprime to N, ell = 1 mod p, a_ell != 2 mod p (trivial nebentypus)
    bool is_taylor_wiles(long p, long ell);

    // Full real-locus Neron period (doubled lattice generator when disc > 0).
    MpReal real_period(int digits);
    // Imaginary counterpart, normalized as 2 Im(omega_2).
    MpReal imaginary_period(int digits);
    int fricke() const { return fricke_; }

    // <a/q>^sign as an exact rational; gcd(a,q) = 1, gcd(q,N) = 1.
    Rational modular_symbol(long a, long q, int sign, const Int& den_bound, int digits);
    // Computes and caches <a/q>^sign for every a coprime to q.
    void batch_symbols(long q, int sign, const Int& den_bound, int digits,
                       Exec exec = Exec::OpenMP);

    Int default_denominator_bound() const {
        return Int(8) * Int(cfg_.torsion_order) * Int(cfg_.torsion_order) * Int(cfg_.conductor);
    }

    // Numerical period integral 2*pi*i int_{i oo}^{a/q} f dz (no reconstruction).
    MpComplex period_integral(long a, long q, int digits);

    void save_symbol_cache(const std::string& path) const;
    void load_symbol_cache(const std::string& path);
    size_t cached_symbols() const;

private:
    void ensure_fricke(int digits);
    MpReal& period_ref(int digits, bool plus);
    // series S(tau) = sum a_n/n e^{2 pi i n tau} at tau = c/q + i/(q sqrt N),
    // for each residue class c in `targets`
    std::vector<MpComplex> series_at_cusps(long q, const std::vector<long>& targets, int digits,
                                           Exec exec);

    CurveConfig cfg_;
    Int disc_;
    int fricke_ = 0;
    std::vector<long> an_;  // 1-indexed sieve, an_[0] unused
    std::map<int, std::pair<MpReal, MpReal>> periods_;  // digits -> (plus, minus)
    std::map<SymbolKey, Rational> symbols_;
    mutable std::mutex mu_;
};

// Rational reconstruction by continued fractions: nearest rational with
// denominator <= bound, required to sit within tol of x.
Rational reconstruct_rational(const MpReal& x, const Int& den_bound, const MpReal& tol);

// Built-in test curves.
CurveConfig curve_11a1();
CurveConfig curve_37a1();

}  // namespace pmom
