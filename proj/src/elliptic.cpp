#include "pmom/elliptic.hpp"

#include <json.hpp>
#include <omp.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <sstream>

namespace pmom {

using json = nlohmann::ordered_json;

namespace {

long long mod_norm(long long x, long long m) {
    x %= m;
    return x < 0 ? x + m : x;
}

long long mod_inv(long long a, long long m) {
    long long g = m, x = 0, x1 = 1, a1 = mod_norm(a, m);
    while (a1) {
        long long qd = g / a1;
        g -= qd * a1;
        std::swap(g, a1);
        x -= qd * x1;
        std::swap(x, x1);
    }
    if (g != 1) throw std::domain_error("mod_inv: not invertible");
    return mod_norm(x, m);
}

bool is_prime_long(long n) {
    if (n < 2) return false;
    for (long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

}  // namespace

CurveConfig CurveConfig::from_json(const std::string& text) {
    json j = json::parse(text);
    CurveConfig c;
    c.label = j.at("label").get<std::string>();
    auto a = j.at("a_invariants");
    if (a.size() != 5) throw std::invalid_argument("need five a-invariants");
    c.a1 = a[0].get<long>();
    c.a2 = a[1].get<long>();
    c.a3 = a[2].get<long>();
    c.a4 = a[3].get<long>();
    c.a6 = a[4].get<long>();
    c.conductor = j.at("conductor").get<long>();
    c.torsion_order = j.value("torsion_order", 1L);
    c.fricke_sign = j.value("fricke_sign", 0);
    if (j.contains("bad_ap"))
        for (auto& [k, v] : j.at("bad_ap").items()) c.bad_ap[std::stol(k)] = v.get<long>();
    return c;
}

std::string CurveConfig::to_json() const {
    json j;
    j["label"] = label;
    j["a_invariants"] = {a1, a2, a3, a4, a6};
    j["conductor"] = conductor;
    j["torsion_order"] = torsion_order;
    j["fricke_sign"] = fricke_sign;
    json bp = json::object();
    for (auto& [k, v] : bad_ap) bp[std::to_string(k)] = v;
    j["bad_ap"] = std::move(bp);
    return j.dump();
}

CurveConfig curve_11a1() {
    CurveConfig c;
    c.label = "11a1";
    c.a1 = 0; c.a2 = -1; c.a3 = 1; c.a4 = -10; c.a6 = -20;
    c.conductor = 11;
    c.torsion_order = 5;
    c.bad_ap = {{11, 1}};
    return c;
}

CurveConfig curve_37a1() {
    CurveConfig c;
    c.label = "37a1";
    c.a1 = 0; c.a2 = 0; c.a3 = 1; c.a4 = -1; c.a6 = 0;
    c.conductor = 37;
    c.torsion_order = 1;
    c.bad_ap = {{37, -1}};
    return c;
}

EllipticCurve::EllipticCurve(CurveConfig cfg) : cfg_(std::move(cfg)) {
    Int a1(cfg_.a1), a2(cfg_.a2), a3(cfg_.a3), a4(cfg_.a4), a6(cfg_.a6);
    Int b2 = a1 * a1 + 4 * a2;
    Int b4 = 2 * a4 + a1 * a3;
    Int b6 = a3 * a3 + 4 * a6;
    Int b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
    disc_ = -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6;
    if (disc_ == 0) throw std::invalid_argument("singular Weierstrass equation");
    if (cfg_.conductor < 1) throw std::invalid_argument("conductor must be positive");
    // bad primes of a minimal model divide the discriminant
    for (long ell = 2; ell <= cfg_.conductor; ++ell) {
        if (cfg_.conductor % ell) continue;
        if (!is_prime_long(ell)) continue;
        if (disc_ % ell != 0)
            throw std::invalid_argument("conductor prime " + std::to_string(ell) +
                                        " does not divide the discriminant");
    }
    fricke_ = cfg_.fricke_sign;
    an_.assign(2, 0);
    an_[1] = 1;
}

long EllipticCurve::ap(long ell) const {
    if (ell < 2 || !is_prime_long(ell)) throw std::invalid_argument("ap: not a prime");
    if (cfg_.conductor % ell == 0) throw std::invalid_argument("ap: bad prime");
    if (ell == 2) {
        long count = 1;  // point at infinity
        for (long x = 0; x < 2; ++x)
            for (long y = 0; y < 2; ++y) {
                long v = y * y + cfg_.a1 * x * y + cfg_.a3 * y - x * x * x - cfg_.a2 * x * x -
                         cfg_.a4 * x - cfg_.a6;
                if (mod_norm(v, 2) == 0) ++count;
            }
        return 2 + 1 - count;
    }
    const long long m = ell;
    const long long b2 = mod_norm(cfg_.a1 * cfg_.a1 + 4 * cfg_.a2, m);
    const long long b4 = mod_norm(2 * cfg_.a4 + cfg_.a1 * cfg_.a3, m);
    const long long b6 = mod_norm(cfg_.a3 * (long long)cfg_.a3 + 4 * cfg_.a6, m);
    // quadratic residue bitmap
    std::vector<uint8_t> sq(static_cast<size_t>(m), 0);
    for (long long i = 0; i <= m / 2; ++i) sq[static_cast<size_t>((i * i) % m)] = 1;
    // g(x) = 4x^3 + b2 x^2 + 2 b4 x + b6 walked by finite differences
    long long g = b6;
    long long d1 = mod_norm(4 + b2 + 2 * b4, m);
    long long d2 = mod_norm(24 + 2 * b2, m);
    const long long d3 = mod_norm(24, m);
    long long s = 0;
    for (long long x = 0; x < m; ++x) {
        if (g != 0) s += sq[static_cast<size_t>(g)] ? 1 : -1;
        g += d1;
        if (g >= m) g -= m;
        d1 += d2;
        if (d1 >= m) d1 -= m;
        d2 += d3;
        if (d2 >= m) d2 -= m;
    }
    long a = static_cast<long>(-s);
    if (static_cast<double>(a) * a > 4.0 * static_cast<double>(ell))
        throw std::logic_error("Hasse bound violated; point count is wrong");
    return a;
}

void EllipticCurve::ensure_an(size_t bound) {
    std::lock_guard<std::mutex> lk(mu_);
    if (an_.size() > bound) return;
    size_t B = bound + 1;
    std::vector<int32_t> spf(B, 0);
    for (size_t i = 2; i < B; ++i) {
        if (spf[i] == 0)
            for (size_t j = i; j < B; j += i)
                if (spf[j] == 0) spf[j] = static_cast<int32_t>(i);
    }
    std::vector<long> a(B, 0);
    if (B > 1) a[1] = 1;
    for (size_t n = 2; n < B; ++n) {
        long ell = spf[n];
        if (static_cast<size_t>(ell) == n) {  // prime
            if (cfg_.conductor % ell == 0) {
                auto it = cfg_.bad_ap.find(ell);
                if (it == cfg_.bad_ap.end())
                    throw std::invalid_argument("missing bad-prime coefficient at " +
                                                std::to_string(ell));
                a[n] = it->second;
            } else {
                a[n] = ap(ell);
            }
            continue;
        }
        size_t m = n / static_cast<size_t>(ell);
        if (m % static_cast<size_t>(ell) == 0) {
            // n = ell^2 * t arrangement: use a_{ell * m} = a_ell a_m - eps ell a_{m/ell}
            if (cfg_.conductor % ell == 0)
                a[n] = a[static_cast<size_t>(ell)] * a[m];
            else
                a[n] = a[static_cast<size_t>(ell)] * a[m] -
                       ell * a[m / static_cast<size_t>(ell)];
        } else {
            a[n] = a[static_cast<size_t>(ell)] * a[m];
        }
    }
    an_ = std::move(a);
}

long EllipticCurve::an(long n) {
    if (n < 1) throw std::invalid_argument("an: n must be positive");
    if (static_cast<size_t>(n) >= an_.size()) ensure_an(static_cast<size_t>(n));
    return an_[static_cast<size_t>(n)];
}

void EllipticCurve::load_an_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open an table: " + path);
    std::map<long, long> vals;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string ns, as;
        if (!std::getline(ls, ns, ',') || !std::getline(ls, as)) continue;
        vals[std::stol(ns)] = std::stol(as);
    }
    long top = 0;
    while (vals.count(top + 1)) ++top;
    if (top < 1) throw std::runtime_error("an table has no contiguous prefix");
    std::lock_guard<std::mutex> lk(mu_);
    an_.assign(static_cast<size_t>(top) + 1, 0);
    for (long n = 1; n <= top; ++n) an_[static_cast<size_t>(n)] = vals[n];
}

bool EllipticCurve::is_taylor_wiles(long p, long ell) {
    if (!is_prime_long(ell)) return false;
    if (cfg_.conductor % ell == 0) return false;
    if ((ell - 1) % p != 0) return false;
    return mod_norm(ap(ell) - 2, p) != 0;
}

// --- periods ---------------------------------------------------------------

namespace {

// real roots of 4x^3 + b2 x^2 + 2 b4 x + b6, refined to full precision
std::vector<MpReal> cubic_real_roots(const Int& b2, const Int& b4, const Int& b6,
                                     mpfr_prec_t prec) {
    double db2 = mpz_get_d(b2.get_mpz_t());
    double db4 = mpz_get_d(b4.get_mpz_t());
    double db6 = mpz_get_d(b6.get_mpz_t());
    // double-precision seeds via the depressed cubic
    double A = db2 / 4.0, B = db4 / 2.0, C = db6 / 4.0;  // x^3 + A x^2 + B x + C
    double q = (3 * B - A * A) / 9, r = (9 * A * B - 27 * C - 2 * A * A * A) / 54;
    double det = q * q * q + r * r;
    std::vector<double> seeds;
    if (det >= 0) {
        double s = std::cbrt(r + std::sqrt(det)), t = std::cbrt(r - std::sqrt(det));
        seeds.push_back(s + t - A / 3);
    } else {
        double theta = std::acos(r / std::sqrt(-q * q * q));
        for (int k = 0; k < 3; ++k)
            seeds.push_back(2 * std::sqrt(-q) * std::cos((theta + 2 * M_PI * k) / 3) - A / 3);
    }
    std::vector<MpReal> roots;
    for (double sd : seeds) {
        MpReal x(prec);
        mpfr_set_d(x.raw(), sd, MPFR_RNDN);
        MpReal fb2 = MpReal::from_rational(Rational(b2), prec);
        MpReal fb4 = MpReal::from_rational(Rational(b4), prec);
        MpReal fb6 = MpReal::from_rational(Rational(b6), prec);
        MpReal four = MpReal::from_long(4, prec), two = MpReal::from_long(2, prec);
        for (int it = 0; it < 200; ++it) {
            MpReal f = ((four * x + fb2) * x + two * fb4) * x + fb6;
            MpReal fp = (MpReal::from_long(12, prec) * x + two * fb2) * x + two * fb4;
            MpReal dx = f / fp;
            x = x - dx;
            if (dx.abs().to_double() < std::ldexp(1.0, -static_cast<int>(prec))) break;
        }
        roots.push_back(x);
    }
    std::sort(roots.begin(), roots.end(),
              [](const MpReal& a, const MpReal& b) { return b.less_than(a); });
    return roots;
}

}  // namespace

MpReal& EllipticCurve::period_ref(int digits, bool plus) {
    auto it = periods_.find(digits);
    if (it == periods_.end()) {
        mpfr_prec_t prec = static_cast<mpfr_prec_t>(digits * 3.33) + 64;
        Int a1(cfg_.a1), a2(cfg_.a2), a3(cfg_.a3), a4(cfg_.a4), a6(cfg_.a6);
        Int b2 = a1 * a1 + 4 * a2, b4 = 2 * a4 + a1 * a3, b6 = a3 * a3 + 4 * a6;
        MpReal pi = MpReal::pi(prec);
        MpReal om1(prec), ylat(prec);
        if (disc_ > 0) {
            auto e = cubic_real_roots(b2, b4, b6, prec);
            if (e.size() != 3) throw std::logic_error("expected three real roots");
            MpReal a = (e[0] - e[2]).sqrt(), b = (e[0] - e[1]).sqrt(), c = (e[1] - e[2]).sqrt();
            om1 = pi / MpReal::agm(a, b);
            ylat = pi / MpReal::agm(a, c);
        } else {
            auto e = cubic_real_roots(b2, b4, b6, prec);
            if (e.size() != 1) throw std::logic_error("expected one real root");
            // 4x^3+b2x^2+2b4x+b6 = 4(x-e1)(x^2 + p1 x + q0)
            MpReal e1 = e[0];
            MpReal fb2 = MpReal::from_rational(Rational(b2), prec);
            MpReal fb4 = MpReal::from_rational(Rational(b4), prec);
            MpReal two = MpReal::from_long(2, prec);
            MpReal p1 = fb2 / MpReal::from_long(4, prec) + e1;
            MpReal q0 = fb4 / two + e1 * p1;
            MpReal u = -p1 / two;                // real part of the complex pair
            MpReal alpha = e1 - u;
            MpReal r = (q0 + e1 * p1 + e1 * e1).sqrt();  // |e1 - e2|
            om1 = pi / MpReal::agm(((r + alpha) / two).sqrt(), r.sqrt());
            ylat = pi / MpReal::agm(((r - alpha) / two).sqrt(), r.sqrt());
        }
        MpReal omega_plus = disc_ > 0 ? om1 + om1 : om1;
        MpReal omega_minus = ylat;  // 2 Im(omega_2) in both lattice shapes
        if (disc_ > 0) omega_minus = ylat + ylat;
        it = periods_.emplace(digits, std::make_pair(std::move(omega_plus),
                                                     std::move(omega_minus))).first;
    }
    return plus ? it->second.first : it->second.second;
}

MpReal EllipticCurve::real_period(int digits) {
    std::lock_guard<std::mutex> lk(mu_);
    return period_ref(digits, true);
}

MpReal EllipticCurve::imaginary_period(int digits) {
    std::lock_guard<std::mutex> lk(mu_);
    return period_ref(digits, false);
}

// --- period integrals -------------------------------------------------------

std::vector<MpComplex> EllipticCurve::series_at_cusps(long q, const std::vector<long>& targets,
                                                      int digits, Exec exec) {
    const double sqN = std::sqrt(static_cast<double>(cfg_.conductor));
    const double y = 1.0 / (q * sqN);
    const double need = digits * std::log(10.0) + std::log(q * sqN) + 5.0;
    const size_t nmax = static_cast<size_t>(need / (2 * M_PI * y)) + 32;
    ensure_an(nmax);
    const bool par = exec == Exec::OpenMP;

    if (digits <= 14) {
        // double engine: shared radial table, per-target rotation walk
        std::vector<double> cosv(static_cast<size_t>(q)), sinv(static_cast<size_t>(q));
        const long double twopi = 6.283185307179586476925286766559L;
        for (long k = 0; k < q; ++k) {
            long double t = twopi * static_cast<long double>(k) / q;
            cosv[static_cast<size_t>(k)] = static_cast<double>(cosl(t));
            sinv[static_cast<size_t>(k)] = static_cast<double>(sinl(t));
        }
        std::vector<double> radial(nmax + 1, 0.0);
        {
            const long double r1 = expl(-static_cast<long double>(twopi) * y);
            long double rn = 1.0L;
            for (size_t n = 1; n <= nmax; ++n) {
                rn *= r1;
                if ((n & 4095) == 0) rn = expl(-twopi * y * static_cast<long double>(n));
                radial[n] = static_cast<double>(rn) * static_cast<double>(an_[n]) /
                            static_cast<double>(n);
            }
        }
        std::vector<MpComplex> out(targets.size(), MpComplex(64));
#pragma omp parallel for schedule(dynamic) if (par)
        for (long t = 0; t < static_cast<long>(targets.size()); ++t) {
            const long c = mod_norm(targets[static_cast<size_t>(t)], q);
            double sre = 0.0, sim = 0.0;
            size_t idx = 0;
            for (size_t n = 1; n <= nmax; ++n) {
                idx += static_cast<size_t>(c);
                if (idx >= static_cast<size_t>(q)) idx -= static_cast<size_t>(q);
                const double rn = radial[n];
                sre += rn * cosv[idx];
                sim += rn * sinv[idx];
            }
            MpComplex z(64);
            mpfr_set_d(z.re.raw(), sre, MPFR_RNDN);
            mpfr_set_d(z.im.raw(), sim, MPFR_RNDN);
            out[static_cast<size_t>(t)] = std::move(z);
        }
        return out;
    }

    // mpfr engine
    const mpfr_prec_t prec = static_cast<mpfr_prec_t>(digits * 3.33) + 64;
    MpReal pi = MpReal::pi(prec);
    MpReal yq = MpReal::from_long(1, prec) /
                (MpReal::from_long(q, prec) * MpReal::from_long(cfg_.conductor, prec).sqrt());
    std::vector<MpReal> cosv, sinv;
    cosv.reserve(static_cast<size_t>(q));
    sinv.reserve(static_cast<size_t>(q));
    for (long k = 0; k < q; ++k) {
        MpReal ang = MpReal::from_long(2 * k, prec) * pi / MpReal::from_long(q, prec);
        MpReal c(prec), s(prec);
        mpfr_sin_cos(s.raw(), c.raw(), ang.raw(), MPFR_RNDN);
        cosv.push_back(std::move(c));
        sinv.push_back(std::move(s));
    }
    MpReal r1 = (-(pi + pi) * yq).exp();
    std::vector<MpReal> radial;
    radial.reserve(nmax + 1);
    radial.push_back(MpReal(prec));
    {
        MpReal rn = MpReal::from_long(1, prec);
        for (size_t n = 1; n <= nmax; ++n) {
            rn = rn * r1;
            radial.push_back(rn * MpReal::from_long(an_[n], prec) /
                             MpReal::from_long(static_cast<long>(n), prec));
        }
    }
    std::vector<MpComplex> out(targets.size(), MpComplex(prec));
#pragma omp parallel for schedule(dynamic) if (par)
    for (long t = 0; t < static_cast<long>(targets.size()); ++t) {
        const long c = mod_norm(targets[static_cast<size_t>(t)], q);
        MpReal sre(prec), sim(prec);
        size_t idx = 0;
        for (size_t n = 1; n <= nmax; ++n) {
            idx += static_cast<size_t>(c);
            if (idx >= static_cast<size_t>(q)) idx -= static_cast<size_t>(q);
            if (an_[n] == 0) continue;
            mpfr_fma(sre.raw(), radial[n].raw(), cosv[idx].raw(), sre.raw(), MPFR_RNDN);
            mpfr_fma(sim.raw(), radial[n].raw(), sinv[idx].raw(), sim.raw(), MPFR_RNDN);
        }
        out[static_cast<size_t>(t)] = MpComplex(std::move(sre), std::move(sim));
    }
    return out;
}

namespace {

MpReal tol_for_digits(int digits, mpfr_prec_t prec) {
    // 10^{-2d/3}: leaves a third of the digits as reconstruction margin
    MpReal ten = MpReal::from_long(10, prec);
    MpReal acc = MpReal::from_long(1, prec);
    for (long i = 0; i < (2L * digits) / 3; ++i) acc = acc * ten;
    return MpReal::from_long(1, prec) / acc;
}

}  // namespace

void EllipticCurve::ensure_fricke(int digits) {
    if (fricke_ != 0) return;
    // Vote over cusps 1/q: the true eigenvalue makes the period combination a
    // small rational multiple of Omega+, the wrong one leaves a generic real.
    // Cusps with b = a are uninformative (both combinations degenerate), as
    // are the rare cases where both reconstruct; require three one-sided wins.
    Int bound = default_denominator_bound();
    int testd = std::max(digits, 20);
    mpfr_prec_t prec = static_cast<mpfr_prec_t>(testd * 3.33) + 64;
    MpReal tol = tol_for_digits(testd, prec);

    int votes_minus = 0, votes_plus = 0, informative = 0;
    MpReal omega = real_period(testd);
    for (long q = 2; q <= 200 && informative < 3; ++q) {
        if (!is_prime_long(q) || cfg_.conductor % q == 0) continue;
        long b = static_cast<long>(
            mod_inv(mod_norm(-static_cast<long long>(cfg_.conductor), q), q));
        // b = +-1 makes one combination vanish identically for either sign
        if (b == 1 || b == q - 1) continue;
        auto se = series_at_cusps(q, {1, b}, testd, Exec::Serial);
        bool ok_minus = true, ok_plus = true;
        try {
            (void)reconstruct_rational((se[0].re + se[1].re) / omega, bound, tol);
        } catch (const ReconstructionError&) {
            ok_minus = false;
        }
        try {
            (void)reconstruct_rational((se[0].re - se[1].re) / omega, bound, tol);
        } catch (const ReconstructionError&) {
            ok_plus = false;
        }
        if (ok_minus == ok_plus) continue;
        ++informative;
        (ok_minus ? votes_minus : votes_plus) += 1;
    }
    if (informative == 3 && votes_minus == 3)
        fricke_ = -1;
    else if (informative == 3 && votes_plus == 3)
        fricke_ = +1;
    else
        throw std::runtime_error("could not determine the Fricke eigenvalue numerically");
}

MpComplex EllipticCurve::period_integral(long a, long q, int digits) {
    if (q < 1) throw std::invalid_argument("q must be positive");
    if (std::gcd(mod_norm(a, q), q) != 1 && q > 1)
        throw std::invalid_argument("cusp must be in lowest terms");
    if (std::gcd(q, cfg_.conductor) != 1)
        throw std::invalid_argument("denominator shares a factor with the conductor");
    ensure_fricke(digits);
    long aa = q == 1 ? 0 : static_cast<long>(mod_norm(a, q));
    long b = q == 1 ? 0
                    : static_cast<long>(mod_inv(
                          mod_norm(-static_cast<long long>(cfg_.conductor) * aa, q), q));
    auto se = series_at_cusps(q, {aa, b}, digits, Exec::Serial);
    MpComplex p = fricke_ == -1 ? MpComplex(se[0].re + se[1].re, se[0].im + se[1].im)
                                : MpComplex(se[0].re - se[1].re, se[0].im - se[1].im);
    return p;
}

Rational reconstruct_rational(const MpReal& x, const Int& den_bound, const MpReal& tol) {
    // continued fraction of x, stopping at the denominator bound
    MpReal cur = x;
    Int pk(0), qk(1), pk1(1), qk1(0);  // p_{-2}/q_{-2}, p_{-1}/q_{-1}
    bool have = false;
    for (int it = 0; it < 256; ++it) {
        MpReal fl(cur.prec());
        mpfr_floor(fl.raw(), cur.raw());
        Int a;
        mpfr_get_z(a.get_mpz_t(), fl.raw(), MPFR_RNDN);
        Int pn = a * pk1 + pk;
        Int qn = a * qk1 + qk;
        if (have && qn > den_bound) break;
        pk = pk1; qk = qk1; pk1 = pn; qk1 = qn;
        have = true;
        if (qk1 > den_bound) break;
        MpReal frac = cur - fl;
        if (frac.sign() == 0) break;
        MpReal inv = MpReal::from_long(1, cur.prec()) / frac;
        // guard against noise blowup near the end of the expansion
        if (mpfr_get_d(inv.raw(), MPFR_RNDN) > 1e60) break;
        cur = inv;
    }
    if (qk1 > den_bound) { pk1 = pk; qk1 = qk; }
    if (!have || qk1 == 0 || qk1 > den_bound)
        throw ReconstructionError("no rational within the denominator bound", x.to_double());
    Rational cand(pk1, qk1);
    cand.canonicalize();
    MpReal err = (x - MpReal::from_rational(cand, x.prec())).abs();
    if (!err.less_than(tol))
        throw ReconstructionError("float value is not close to a small rational", x.to_double());
    return cand;
}

Rational EllipticCurve::modular_symbol(long a, long q, int sign, const Int& den_bound,
                                       int digits) {
    if (q < 1) throw std::invalid_argument("q must be positive");
    long aa = q == 1 ? 0 : static_cast<long>(mod_norm(a, q));
    if (q > 1 && std::gcd(aa, q) != 1) throw std::invalid_argument("cusp not in lowest terms");
    SymbolKey key{aa, q, sign};
    {
        std::lock_guard<std::mutex> lk(mu_);
        auto it = symbols_.find(key);
        if (it != symbols_.end()) return it->second;
    }
    MpComplex per = period_integral(aa, q, digits);
    MpReal omega = sign > 0 ? real_period(digits) : imaginary_period(digits);
    MpReal val = (sign > 0 ? per.re : per.im) / omega;
    mpfr_prec_t prec = mpfr_get_prec(val.raw());
    Rational r = reconstruct_rational(val, den_bound, tol_for_digits(digits, prec));
    std::lock_guard<std::mutex> lk(mu_);
    symbols_.emplace(key, r);
    return r;
}

void EllipticCurve::batch_symbols(long q, int sign, const Int& den_bound, int digits, Exec exec) {
    if (q < 1) throw std::invalid_argument("q must be positive");
    if (std::gcd(q, cfg_.conductor) != 1)
        throw std::invalid_argument("denominator shares a factor with the conductor");
    ensure_fricke(digits);
    if (q == 1) {
        (void)modular_symbol(0, 1, sign, den_bound, digits);
        return;
    }
    std::vector<long> targets;
    for (long c = 0; c < q; ++c)
        if (std::gcd(c, q) == 1) targets.push_back(c);
    std::vector<size_t> pos(static_cast<size_t>(q), 0);
    for (size_t i = 0; i < targets.size(); ++i) pos[static_cast<size_t>(targets[i])] = i;
    auto se = series_at_cusps(q, targets, digits, exec);
    MpReal omega = sign > 0 ? real_period(digits) : imaginary_period(digits);
    mpfr_prec_t prec = mpfr_get_prec(omega.raw());
    MpReal tol = tol_for_digits(digits, prec);
    for (size_t i = 0; i < targets.size(); ++i) {
        long aa = targets[i];
        long b = static_cast<long>(
            mod_inv(mod_norm(-static_cast<long long>(cfg_.conductor) * aa, q), q));
        const MpComplex& s0 = se[i];
        const MpComplex& s1 = se[pos[static_cast<size_t>(b)]];
        MpReal comp = sign > 0 ? (fricke_ == -1 ? s0.re + s1.re : s0.re - s1.re)
                               : (fricke_ == -1 ? s0.im + s1.im : s0.im - s1.im);
        Rational r = reconstruct_rational(comp / omega, den_bound, tol);
        std::lock_guard<std::mutex> lk(mu_);
        symbols_.emplace(SymbolKey{aa, q, sign}, r);
    }
}

void EllipticCurve::save_symbol_cache(const std::string& path) const {
    std::lock_guard<std::mutex> lk(mu_);
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write symbol cache: " + path);
    out << "a,q,sign,num,den\n";
    for (const auto& [k, v] : symbols_)
        out << k.a << "," << k.q << "," << k.sign << "," << v.get_num().get_str() << ","
            << v.get_den().get_str() << "\n";
}

void EllipticCurve::load_symbol_cache(const std::string& path) {
    std::ifstream in(path);
    if (!in) return;  // cold cache is fine
    std::string line;
    std::getline(in, line);  // header
    std::lock_guard<std::mutex> lk(mu_);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string fa, fq, fs, fn, fd;
        if (!std::getline(ls, fa, ',') || !std::getline(ls, fq, ',') ||
            !std::getline(ls, fs, ',') || !std::getline(ls, fn, ',') || !std::getline(ls, fd))
            continue;
        Rational v{Int(fn), Int(fd)};
        v.canonicalize();
        symbols_[SymbolKey{std::stol(fa), std::stol(fq), std::stoi(fs)}] = v;
    }
}

size_t EllipticCurve::cached_symbols() const {
    std::lock_guard<std::mutex> lk(mu_);
    return symbols_.size();
}

}  // namespace pmom
