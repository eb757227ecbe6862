#include "pmom/digit.hpp"

#include <json.hpp>

#include <random>

namespace pmom {

using json = nlohmann::ordered_json;

size_t digit_forward(const GroupShape& shape, const std::vector<long>& tuple) {
    return shape.index_of(tuple);
}

std::vector<long> digit_inverse(const GroupShape& shape, size_t value) {
    if (value >= shape.size()) throw std::out_of_range("digit_inverse: value out of range");
    return shape.tuple_of(value);
}

Measure verticalize(const Measure& nu) {
    GroupShape flat(nu.shape().p, {nu.shape().total_exp()});
    return Measure(flat, nu.coeffs());
}

AmicePoly amice(const Measure& vertical, long e) {
    if (vertical.shape().factors() != 1)
        throw std::invalid_argument("amice expects a single-factor (vertical) measure");
    const long p = vertical.shape().p;
    const unsigned M = vertical.shape().exps[0];
    const size_t D = vertical.shape().size();
    AmicePoly f;
    f.p = p;
    f.M = M;
    f.e = e;
    f.coeff.assign(D, Cyclotomic(p));
    // f_k = sum_a c_a * binom(a, k); Pascal row updated in place.
    std::vector<Int> row(D, Int(0));
    row[0] = 1;
    for (size_t a = 0; a < D; ++a) {
        if (a > 0)
            for (size_t k = std::min(a, D - 1); k >= 1; --k) row[k] += row[k - 1];
        const Cyclotomic& c = vertical.coeff(a);
        if (c.is_zero()) continue;
        for (size_t k = 0; k <= a; ++k)
            if (row[k] != 0) f.coeff[k] += c.scaled(Rational(row[k]));
    }
    return f;
}

Cyclotomic amice_eval_at(const AmicePoly& f, unsigned j, long u) {
    if (j > f.M) throw std::invalid_argument("amice_eval: level exceeds truncation");
    Cyclotomic acc(f.p);
    for (size_t k = f.coeff.size(); k-- > 0;) {
        // acc = acc*(zeta^u - 1) + coeff[k]
        if (!acc.is_zero()) acc = acc.times_root_minus_one(j, u);
        acc += f.coeff[k];
    }
    return acc;
}

Cyclotomic amice_eval(const AmicePoly& f, unsigned j) { return amice_eval_at(f, j, 1); }

std::vector<Cyclotomic> amice_to_measure_basis(const AmicePoly& f) {
    const size_t D = f.coeff.size();
    // c_a = sum_{k>=a} (-1)^{k-a} binom(k, a) f_k, i.e. one signed Pascal pass.
    std::vector<Cyclotomic> c(D, Cyclotomic(f.p));
    std::vector<Int> row(D, Int(0));
    row[0] = 1;
    for (size_t k = 0; k < D; ++k) {
        if (k > 0)
            for (size_t a = std::min(k, D - 1); a >= 1; --a) row[a] += row[a - 1];
        if (f.coeff[k].is_zero()) continue;
        for (size_t a = 0; a <= k; ++a) {
            if (row[a] == 0) continue;
            Int s = ((k - a) % 2 == 0) ? row[a] : -row[a];
            c[a] += f.coeff[k].scaled(Rational(s));
        }
    }
    return c;
}

AmicePoly amice_reduce(const AmicePoly& f, unsigned M_low) {
    if (M_low > f.M) throw std::invalid_argument("amice_reduce: cannot raise level");
    if (M_low == f.M) return f;
    std::vector<Cyclotomic> c = amice_to_measure_basis(f);
    size_t Dlow = upow(f.p, M_low);
    GroupShape flat(f.p, {M_low});
    std::vector<Cyclotomic> folded(Dlow, Cyclotomic(f.p));
    for (size_t a = 0; a < c.size(); ++a) folded[a % Dlow] += c[a];
    return amice(Measure(flat, std::move(folded)), f.e);
}

Cyclotomic closed_form_fourier(const GroupShape& shape, const PsiSpec& psi,
                               const CharacterTuple& chi) {
    if (chi.shape != shape) throw std::invalid_argument("closed_form_fourier: shape mismatch");
    if (psi.u % shape.p == 0) throw std::invalid_argument("psi unit must be coprime to p");
    const size_t n = shape.factors();
    unsigned before_last = 0;
    for (size_t i = 0; i + 1 < n; ++i) before_last += shape.exps[i];
    if (psi.N <= before_last || psi.N > before_last + shape.exps[n - 1])
        throw std::invalid_argument("psi conductor outside the admissible window");
    const long p = shape.p;
    const unsigned N = psi.N;
    const size_t pN = upow(p, N);

    // Vanishing: chi_n must equal psi^{p^{m_1+...+m_{n-1}}} on Z/p^{m_n},
    // i.e. k_n = u * p^{m_n - tail} mod p^{m_n} with tail = N - before_last.
    const unsigned tail = N - before_last;  // 1 <= tail <= m_n
    const long ptail = static_cast<long>(upow(p, tail));
    const long umod = ((psi.u % ptail) + ptail) % ptail;
    const long want = static_cast<long>((static_cast<unsigned long>(umod) *
                                         upow(p, shape.exps[n - 1] - tail)) %
                                        shape.factor_size(n - 1));
    if (chi.k[n - 1] != want) return Cyclotomic(p);

    Cyclotomic val = Cyclotomic::from_rational(p, Rational(static_cast<long>(shape.factor_size(n - 1))));
    unsigned acc_exp = 0;  // m_1 + ... + m_{i-1}
    for (size_t i = 0; i + 1 < n; ++i) {
        unsigned num_exp = acc_exp + shape.exps[i];  // m_1+...+m_i
        // numerator: psi(p^{m_1+..+m_i}) - 1 = zeta_{p^{N - num_exp}}^u - 1
        Cyclotomic numer = Cyclotomic::root_minus_one(p, N - num_exp, psi.u);
        // denominator: psi(p^{m_1+..+m_{i-1}}) * conj(chi_i)(1) - 1
        //   = zeta_{p^N}^{u p^{acc_exp}} * zeta_{p^{m_i}}^{-k_i} - 1
        long long e = static_cast<long long>(psi.u) * static_cast<long long>(upow(p, acc_exp)) -
                      static_cast<long long>(chi.k[i]) * static_cast<long long>(upow(p, N - shape.exps[i]));
        e %= static_cast<long long>(pN);
        Cyclotomic dinv = Cyclotomic::inv_root_minus_one(p, N, static_cast<long>(e));
        val = val * numer * dinv;
        acc_exp = num_exp;
    }
    return val;
}

Cyclotomic brute_force_fourier(const GroupShape& shape, const PsiSpec& psi,
                               const CharacterTuple& chi) {
    const long p = shape.p;
    const unsigned Mtot = shape.total_exp();
    if (psi.N > Mtot) throw std::invalid_argument("psi conductor beyond the group");
    const unsigned L = std::max(psi.N, shape.max_exp());
    const size_t pL = upow(p, L);
    const long long psi_step = static_cast<long long>(upow(p, L - psi.N));
    std::vector<Int> counts(pL, Int(0));
    for (size_t flat = 0; flat < shape.size(); ++flat) {
        std::vector<long> a = shape.tuple_of(flat);
        long long e = static_cast<long long>(psi.u) *
                      static_cast<long long>(flat % upow(p, psi.N)) % static_cast<long long>(pL) *
                      psi_step % static_cast<long long>(pL);
        for (size_t i = 0; i < shape.factors(); ++i)
            e -= static_cast<long long>(chi.k[i]) * static_cast<long long>(a[i]) %
                 static_cast<long long>(pL) * static_cast<long long>(upow(p, L - shape.exps[i])) %
                 static_cast<long long>(pL);
        e %= static_cast<long long>(pL);
        if (e < 0) e += static_cast<long long>(pL);
        counts[static_cast<size_t>(e)] += 1;
    }
    return Cyclotomic::from_group_ring(p, L, std::move(counts), Int(1));
}

Cyclotomic corollary_evaluation(const Measure& nu, const PsiSpec& psi, Exec exec) {
    const GroupShape& sh = nu.shape();
    const long p = sh.p;
    const size_t nf = sh.factors();
    if (nf == 0) throw std::invalid_argument("corollary_evaluation: empty shape");
    unsigned before_last = 0;
    for (size_t i = 0; i + 1 < nf; ++i) before_last += sh.exps[i];
    if (psi.N <= before_last || psi.N > sh.total_exp())
        throw std::invalid_argument("psi conductor outside the admissible window");

    std::vector<Cyclotomic> ev = evaluate_all(nu, exec);

    // last character component: psi^{p^{before_last}} on Z/p^{m_n}
    unsigned tail = psi.N - before_last;
    long k_last = static_cast<long>((static_cast<unsigned long>(
                                         ((psi.u % static_cast<long>(upow(p, tail))) +
                                          static_cast<long>(upow(p, tail))) %
                                         static_cast<long>(upow(p, tail))) *
                                     upow(p, sh.exps[nf - 1] - tail)) %
                                    sh.factor_size(nf - 1));

    const size_t pN = upow(p, psi.N);
    Cyclotomic total(p);
    std::vector<long> kk(nf, 0);
    kk[nf - 1] = k_last;
    // walk all (chi_1..chi_{n-1})
    size_t inner = 1;
    for (size_t i = 0; i + 1 < nf; ++i) inner *= sh.factor_size(i);
    for (size_t w = 0; w < inner; ++w) {
        size_t rest = w;
        for (size_t i = 0; i + 1 < nf; ++i) {
            kk[i] = static_cast<long>(rest % sh.factor_size(i));
            rest /= sh.factor_size(i);
        }
        Cyclotomic weight = Cyclotomic::from_int(p, 1);
        unsigned acc_exp = 0;
        for (size_t i = 0; i + 1 < nf; ++i) {
            // c_psi factor i: (psi(p^{m_1+..+m_{i-1}}) - 1) /
            //                 (psi(p^{m_1+..+m_{i-1}}) conj(chi_i)(1) - 1)
            long long enum_ = static_cast<long long>(psi.u) * static_cast<long long>(upow(p, acc_exp));
            enum_ %= static_cast<long long>(pN);
            Cyclotomic numer = Cyclotomic::root_minus_one(p, psi.N, static_cast<long>(enum_));
            long long eden = enum_ - static_cast<long long>(kk[i]) *
                                         static_cast<long long>(upow(p, psi.N - sh.exps[i]));
            eden %= static_cast<long long>(pN);
            weight = weight * numer *
                     Cyclotomic::inv_root_minus_one(p, psi.N, static_cast<long>(eden));
            acc_exp += sh.exps[i];
        }
        size_t flat = sh.index_of(kk);
        if (!ev[flat].is_zero()) total += weight * ev[flat];
    }

    // prefactor (psi(p^{m_1+..+m_n'}) - 1) / (p^{...} (psi(1) - 1)) with the
    // sum running over all factors but the last.
    Cyclotomic pref = Cyclotomic::root_minus_one(p, psi.N - before_last, psi.u);
    pref = pref * Cyclotomic::inv_root_minus_one(p, psi.N, psi.u);
    pref = pref.scaled(Rational(1, static_cast<long>(upow(p, before_last))));
    return pref * total;
}

Cyclotomic unit_weight(long p, unsigned j, long zexp) {
    if (j < 2) throw std::invalid_argument("unit_weight: level exponent must be >= 2");
    size_t pj = upow(p, j);
    long z = ((zexp % static_cast<long>(pj)) + static_cast<long>(pj)) % static_cast<long>(pj);
    // z must have order strictly below p^j so the denominator stays primitive
    if (z % p != 0 && z != 0)
        throw std::invalid_argument("unit_weight: chi-value of full order is degenerate");
    Cyclotomic numer = Cyclotomic::root_minus_one(p, j, 1);
    Cyclotomic dinv = Cyclotomic::inv_root_minus_one(p, j, 1 - z);
    return numer * dinv;
}

WeierstrassInvariants weierstrass_invariants(const std::vector<AmicePoly>& levels, long e) {
    if (levels.size() < 2) throw std::invalid_argument("need at least two truncation levels");
    for (size_t i = 0; i + 1 < levels.size(); ++i)
        if (levels[i].M >= levels[i + 1].M)
            throw std::invalid_argument("levels must have strictly increasing M");
    for (size_t i = 0; i + 1 < levels.size(); ++i) {
        AmicePoly red = amice_reduce(levels[i + 1], levels[i].M);
        if (red.coeff != levels[i].coeff)
            throw std::invalid_argument("incompatible truncation levels");
    }

    const long p = levels[0].p;
    struct Newton {
        bool zero;
        Rational mu_vp;
        long lambda;
    };
    auto newton_of = [&](const AmicePoly& f) {
        Newton nd{true, Rational(0), 0};
        for (size_t k = 0; k < f.coeff.size(); ++k) {
            PadicVal v = f.coeff[k].valuation();
            if (v.is_infinite()) continue;
            if (nd.zero || v.value() < nd.mu_vp) {
                nd.zero = false;
                nd.mu_vp = v.value();
                nd.lambda = static_cast<long>(k);
            }
        }
        return nd;
    };

    const AmicePoly& top = levels.back();
    const AmicePoly& low = levels[levels.size() - 2];
    Newton nt = newton_of(top);
    Newton nl = newton_of(low);

    WeierstrassInvariants w;
    if (nt.zero) {
        w.mu_infinite = true;
        w.lambda = 0;
        w.certified = false;
        w.note = "all truncations vanish; zero measure not certified from finite data";
        return w;
    }
    w.mu = nt.mu_vp * e;
    w.lambda = nt.lambda;

    bool agree = !nl.zero && nl.mu_vp == nt.mu_vp && nl.lambda == nt.lambda;
    bool lambda_low = nt.lambda < static_cast<long>(upow(p, low.M));
    if (!agree || !lambda_low) {
        w.certified = false;
        w.note = !agree ? "top two levels disagree" : "lambda not below the lower truncation";
        return w;
    }
    if (nt.mu_vp < 1) {
        // truncation junk has v_p >= 1 and cannot move a minimum below 1
        w.certified = true;
        w.note = "certified (mu/e < 1, two-level agreement)";
        return w;
    }
    // peel the integral part of mu/e and re-run the comparison
    Int peel_z = Int(nt.mu_vp.get_num()) / Int(nt.mu_vp.get_den());
    long peel = peel_z.get_si();
    Rational residual = nt.mu_vp - Rational(peel);
    if (residual < 1) {
        w.certified = true;
        w.note = "certified after peeling p^" + std::to_string(peel) +
                 " (assumes the tail shares the divisibility)";
    } else {
        w.certified = false;
        w.note = "ambiguous after peeling";
    }
    return w;
}

Cyclotomic uniformizer(long p, long e) {
    if (e == 1) return Cyclotomic::from_int(p, p);
    if (e == 2) {
        if (p == 2) throw std::invalid_argument("scale e=2 unsupported at p=2");
        // quadratic Gauss sum: sum_a legendre(a) zeta_p^a, square is (-1|p) p
        std::vector<Int> buf(upow(p, 1), Int(0));
        for (long a = 1; a < p; ++a) {
            long r = 1;
            // Euler's criterion by repeated squaring
            long base = a % p, exp = (p - 1) / 2;
            long acc = 1;
            while (exp) {
                if (exp & 1) acc = (acc * base) % p;
                base = (base * base) % p;
                exp >>= 1;
            }
            r = (acc == 1) ? 1 : -1;
            buf[static_cast<size_t>(a)] = r;
        }
        return Cyclotomic::from_group_ring(p, 1, std::move(buf), Int(1));
    }
    throw std::invalid_argument("only valuation scales e in {1,2} are supported");
}

namespace {

Measure synthetic_from_poly(const GroupShape& shape, const AmicePoly& f) {
    std::vector<Cyclotomic> c = amice_to_measure_basis(f);
    return Measure(shape, std::move(c));
}

}  // namespace

Measure synthetic_measure(long p, const GroupShape& shape, long mu, long lambda, long e,
                          uint64_t seed) {
    const unsigned M = shape.total_exp();
    const size_t D = upow(p, M);
    if (lambda < 0 || static_cast<size_t>(lambda) >= D)
        throw std::invalid_argument("synthetic_measure: lambda must be < p^M");
    if (mu < 0) throw std::invalid_argument("synthetic_measure: mu must be >= 0");
    std::mt19937_64 rng(seed);
    auto small = [&](long lo, long hi) {
        return lo + static_cast<long>(rng() % static_cast<uint64_t>(hi - lo + 1));
    };

    Cyclotomic pi = uniformizer(p, e);
    // distinguished part: T^lambda + sum_{i<lambda} a_i T^i, v(a_i) >= 1/e
    std::vector<Cyclotomic> g(static_cast<size_t>(lambda) + 1, Cyclotomic(p));
    g[static_cast<size_t>(lambda)] = Cyclotomic::from_int(p, 1);
    for (long i = 0; i < lambda; ++i) {
        long c = small(-2, 2);
        g[static_cast<size_t>(i)] = pi.scaled(Rational(c));
        if (rng() % 3 == 0) g[static_cast<size_t>(i)] *= pi;  // deeper than 1/e now and then
    }
    // unit: u_0 prime to p, higher coefficients R-integral
    std::vector<Cyclotomic> u(D, Cyclotomic(p));
    long u0 = small(1, p - 1);
    if (rng() % 2) u0 = -u0;
    u[0] = Cyclotomic::from_int(p, u0);
    for (size_t k = 1; k < D; ++k) {
        long c = small(-3, 3);
        u[k] = Cyclotomic::from_int(p, c);
        if (rng() % 4 == 0) u[k] *= pi;
    }

    // pi^mu * g * u truncated at degree p^M (low coefficients are exact)
    AmicePoly f;
    f.p = p;
    f.M = M;
    f.e = e;
    f.coeff.assign(D, Cyclotomic(p));
    for (size_t i = 0; i < g.size(); ++i) {
        if (g[i].is_zero()) continue;
        for (size_t k = 0; i + k < D; ++k) {
            if (u[k].is_zero()) continue;
            f.coeff[i + k] += g[i] * u[k];
        }
    }
    Cyclotomic scale = Cyclotomic::from_int(p, 1);
    for (long t = 0; t < mu; ++t) scale *= pi;
    if (mu > 0)
        for (auto& c : f.coeff) c = c * scale;
    return synthetic_from_poly(shape, f);
}

Measure synthetic_measure(long p, unsigned M, long mu, long lambda, long e, uint64_t seed) {
    GroupShape shape(p, std::vector<unsigned>(M, 1));
    return synthetic_measure(p, shape, mu, lambda, e, seed);
}

std::string AmicePoly::to_json() const {
    json j;
    j["p"] = p;
    j["M"] = M;
    j["e"] = e;
    json arr = json::array();
    for (const auto& c : coeff) {
        json cj;
        cj["level"] = c.level();
        std::vector<std::string> cs;
        for (size_t k = 0; k < c.degree(); ++k) {
            Rational r = c.coeff(k);
            r.canonicalize();
            cs.push_back(r.get_str());
        }
        cj["coords"] = cs;
        arr.push_back(std::move(cj));
    }
    j["coeffs"] = std::move(arr);
    return j.dump();
}

AmicePoly AmicePoly::from_json(const std::string& text) {
    json j = json::parse(text);
    AmicePoly f;
    f.p = j.at("p").get<long>();
    f.M = j.at("M").get<unsigned>();
    f.e = j.at("e").get<long>();
    for (const auto& cj : j.at("coeffs")) {
        unsigned level = cj.at("level").get<unsigned>();
        const auto& cs = cj.at("coords");
        std::vector<Rational> coords;
        for (const auto& s : cs) coords.push_back(parse_rational(s.get<std::string>()));
        if (coords.size() != phi_ppow(f.p, level))
            throw std::invalid_argument("bad coordinate count");
        Int den(1);
        for (const auto& c : coords) den = den / gcd(den, Int(c.get_den())) * Int(c.get_den());
        std::vector<Int> num(upow(f.p, level), Int(0));
        for (size_t k = 0; k < coords.size(); ++k)
            num[k] = Int(coords[k].get_num()) * (den / Int(coords[k].get_den()));
        f.coeff.push_back(Cyclotomic::from_group_ring(f.p, level, std::move(num), den));
    }
    if (f.coeff.size() != upow(f.p, f.M)) throw std::invalid_argument("coefficient count mismatch");
    return f;
}

}  // namespace pmom
