#include "pmom/moments.hpp"

#include <json.hpp>

#include <algorithm>
#include <map>
#include <memory>
#include <numeric>

#include "pmom/kernels.hpp"

namespace pmom {

using json = nlohmann::ordered_json;

namespace {

void require_uniform_shape(const Measure& nu, unsigned* m_out) {
    const GroupShape& sh = nu.shape();
    if (sh.factors() < 1) throw std::invalid_argument("moment: empty shape");
    unsigned m = sh.exps[0];
    for (unsigned e : sh.exps)
        if (e != m) throw std::invalid_argument("moment: shape must be (m,...,m)");
    *m_out = m;
}

}  // namespace

Cyclotomic moment_sum(const Measure& nu, long u0, Exec exec) {
    unsigned m = 0;
    require_uniform_shape(nu, &m);
    const GroupShape& sh = nu.shape();
    const long p = sh.p;
    if (u0 % p == 0) throw std::invalid_argument("moment: chi_0 must have exact order p^m");
    const size_t T = sh.factors();
    const unsigned n = static_cast<unsigned>(T - 1);
    const unsigned L = m * (n + 1);
    const size_t ring = upow(p, L);
    const size_t s = upow(p, m);

    std::vector<Cyclotomic> all = evaluate_all(nu, exec);

    // slice with the last component pinned to chi_0 = zeta_{p^m}^{u0}
    const size_t last_stride = sh.size() / s;
    const size_t k0 = static_cast<size_t>(((u0 % static_cast<long>(s)) + static_cast<long>(s)) %
                                          static_cast<long>(s));
    std::vector<kernels::GroupRingEl> ev;
    ev.reserve(last_stride);
    for (size_t w = 0; w < last_stride; ++w)
        ev.push_back(kernels::GroupRingEl::from_cyclotomic(all[w + k0 * last_stride], L));

    // weights w[i][c] = (psi(p^{m i'}) - 1)/(psi(p^{m i'}) conj(chi)(1) - 1)
    // with psi(1) = zeta_{p^L}^{u0}
    std::vector<std::vector<kernels::GroupRingEl>> w(n);
    for (unsigned i = 1; i <= n; ++i) {
        const unsigned J = m * (n - i + 2);
        auto& row = w[i - 1];
        row.reserve(s);
        for (size_t c = 0; c < s; ++c) {
            Cyclotomic numer = Cyclotomic::root_minus_one(p, J, u0);
            long long eden = static_cast<long long>(u0) -
                             static_cast<long long>(c) * static_cast<long long>(upow(p, J - m));
            Cyclotomic dinv = Cyclotomic::inv_root_minus_one(p, J, static_cast<long>(eden));
            row.push_back(kernels::GroupRingEl::from_cyclotomic(numer * dinv, L));
        }
    }

    kernels::GroupRingEl total = kernels::weighted_tuple_sum(w, ev, ring, exec);
    Cyclotomic out = total.to_cyclotomic(p, L);
    return out.scaled(Rational(1, static_cast<long>(upow(p, m * n))));
}

MomentComputation moment_with_identity(const Measure& nu, long e, long u0, Exec exec) {
    unsigned m = 0;
    require_uniform_shape(nu, &m);
    const long p = nu.shape().p;
    const unsigned T = static_cast<unsigned>(nu.shape().factors());
    const unsigned L = m * T;

    MomentComputation mc;
    mc.moment = moment_sum(nu, u0, exec);

    AmicePoly f = amice(verticalize(nu), e);
    Cyclotomic fval = amice_eval_at(f, L, u0);
    Cyclotomic pref = Cyclotomic::root_minus_one(p, L, u0) *
                      Cyclotomic::inv_root_minus_one(p, m, u0);
    mc.amice_route = pref * fval;
    mc.identity_ok = mc.moment == mc.amice_route;
    mc.valuation = mc.moment.valuation();
    return mc;
}

FitResult fit_invariants(const Rational& v_n, const Rational& v_n1, unsigned n, long p,
                         unsigned m, long e, const Rational* v_n2) {
    FitResult fr;
    Rational d1(1, static_cast<long>(phi_ppow(p, m * (n + 1))));
    Rational d2(1, static_cast<long>(phi_ppow(p, m * (n + 2))));
    Rational lam1 = (v_n - v_n1) / (d1 - d2);
    fr.lambda_raw = lam1 - 1;
    fr.mu_vp = v_n + Rational(1, static_cast<long>(phi_ppow(p, m))) - lam1 * d1;

    bool lambda_ok = fr.lambda_raw.get_den() == 1 && fr.lambda_raw >= 0;
    Rational mu_scaled = fr.mu_vp * e;
    bool mu_ok = mu_scaled.get_den() == 1 && mu_scaled >= 0;
    fr.in_asymptotic_regime = lambda_ok && mu_ok;
    if (lambda_ok) fr.lambda = static_cast<long>(fr.lambda_raw.get_num().get_si());
    if (!fr.in_asymptotic_regime) {
        fr.note = "fit is not an admissible invariant pair; raw valuations reported";
        return fr;
    }
    if (v_n2) {
        Rational d3(1, static_cast<long>(phi_ppow(p, m * (n + 3))));
        Rational pred = fr.mu_vp - Rational(1, static_cast<long>(phi_ppow(p, m))) +
                        (fr.lambda_raw + 1) * d3;
        if (pred != *v_n2) {
            fr.in_asymptotic_regime = false;
            fr.note = "third level does not reproduce the fit";
            return fr;
        }
    }
    fr.note = "fit consistent";
    return fr;
}

Cyclotomic kolyvagin_derivative(const Measure& nu, unsigned r) {
    const GroupShape& sh = nu.shape();
    if (r > sh.factors()) throw std::invalid_argument("derivative order exceeds factor count");
    for (unsigned i = 0; i < r; ++i)
        if (sh.exps[i] != 1)
            throw std::invalid_argument("derivative needs order-p leading factors");
    const long p = sh.p;
    Cyclotomic acc(p);
    for (size_t flat = 0; flat < sh.size(); ++flat) {
        if (nu.coeff(flat).is_zero()) continue;
        std::vector<long> g = sh.tuple_of(flat);
        long w = 1;
        for (unsigned i = 0; i < r; ++i) w *= g[i] == 0 ? p : g[i];
        acc += nu.coeff(flat).scaled(Rational(w));
    }
    return acc;
}

DerivativeReport derivative_congruence_check(const Measure& nu) {
    const GroupShape& sh = nu.shape();
    for (unsigned e : sh.exps)
        if (e != 1) throw std::invalid_argument("congruence check needs shape (1,...,1)");
    DerivativeReport rep;
    AmicePoly f = amice(verticalize(nu));
    rep.f0 = f.coeff[0];
    rep.d0 = kolyvagin_derivative(nu, 0);
    rep.f0_matches = rep.f0 == rep.d0;
    rep.f1 = f.coeff.size() > 1 ? f.coeff[1] : Cyclotomic(sh.p);
    rep.d1 = kolyvagin_derivative(nu, 1);
    Cyclotomic diff = rep.f1 - rep.d1;
    PadicVal v = diff.valuation();
    rep.deriv_congruent = v >= Rational(1);
    return rep;
}

UnitCriteriaReport unit_criteria(const Measure& nu, long e) {
    const GroupShape& sh = nu.shape();
    for (unsigned ex : sh.exps)
        if (ex != 1) throw std::invalid_argument("unit criteria need shape (1,...,1)");
    UnitCriteriaReport rep;
    Cyclotomic d0 = kolyvagin_derivative(nu, 0);
    Cyclotomic d1 = kolyvagin_derivative(nu, 1);
    rep.v_d0 = d0.valuation();
    rep.v_d1 = d1.valuation();
    bool d0_unit = !rep.v_d0.is_infinite() && rep.v_d0.value() == 0;
    bool d1_unit = !rep.v_d1.is_infinite() && rep.v_d1.value() == 0;
    if (d0_unit)
        rep.cls = UnitClass::MuZeroLambdaZero;
    else if (d1_unit)
        rep.cls = UnitClass::MuZeroLambdaOne;
    else
        rep.cls = UnitClass::Indeterminate;

    if (sh.factors() >= 2) {
        AmicePoly low = amice(verticalize(pushforward_drop_last(nu)), e);
        AmicePoly top = amice(verticalize(nu), e);
        rep.invariants = weierstrass_invariants({low, top}, e);
        if (rep.invariants.certified && !rep.invariants.mu_infinite) {
            if (rep.cls == UnitClass::MuZeroLambdaZero)
                rep.consistent = rep.invariants.mu == 0 && rep.invariants.lambda == 0;
            else if (rep.cls == UnitClass::MuZeroLambdaOne)
                rep.consistent = rep.invariants.mu == 0 && rep.invariants.lambda == 1;
        }
    }
    return rep;
}

KuriharaResult kurihara_check(EllipticCurve& E, long p, long q1, long generator,
                              const LstarOptions& opt) {
    if ((q1 - 1) % p != 0) throw std::invalid_argument("kurihara: need q1 = 1 mod p");
    if (E.conductor() % q1 == 0) throw std::invalid_argument("kurihara: q1 divides the conductor");
    KuriharaResult kr;
    kr.q1 = q1;
    kr.generator = generator;
    Int bound = opt.den_bound == 0 ? E.default_denominator_bound() : opt.den_bound;
    E.batch_symbols(q1, +1, bound, opt.digits, opt.exec);
    Rational sum(0);
    long pw = 1;
    for (long a = 1; a <= q1; ++a) {
        pw = static_cast<long>(static_cast<long long>(pw) * generator % q1);
        sum += Rational(a) * E.modular_symbol(pw, q1, +1, bound, opt.digits);
    }
    kr.sum = sum;
    if (sum == 0) {
        kr.nonvanishing = false;
    } else {
        PadicVal v = vp_rational(sum, p);
        kr.nonvanishing = !(v >= Rational(1));
    }
    return kr;
}

std::string conventions_note() {
    return "Omega+ = full real-locus Neron period of the minimal model; "
           "Omega- = 2 Im(omega_2); <0>+ = L(E,1)/Omega+; "
           "zeta_{p^n} compatible under p-power maps, embedded as exp(2 pi i/p^n); "
           "generators b_i recorded per sequence; mu reported on the v_p scale";
}

namespace {

json report_body(const MomentReport& r) {
    json j;
    j["n"] = r.n;
    json val;
    val["level"] = r.exact_value.level();
    std::vector<std::string> cs;
    for (size_t k = 0; k < r.exact_value.degree(); ++k) {
        Rational c = r.exact_value.coeff(k);
        c.canonicalize();
        cs.push_back(c.get_str());
    }
    val["coords"] = cs;
    j["exact_value"] = std::move(val);
    j["valuation"] = r.valuation.str();
    if (r.predicted_valuation) j["predicted_valuation"] = r.predicted_valuation->get_str();
    j["identity_check"] = r.identity_ok;
    return j;
}

json fit_body(const FitResult& f) {
    json j;
    j["in_asymptotic_regime"] = f.in_asymptotic_regime;
    j["lambda_raw"] = f.lambda_raw.get_str();
    j["lambda"] = f.lambda;
    j["mu_vp"] = f.mu_vp.get_str();
    j["note"] = f.note;
    return j;
}

}  // namespace

ArithmeticRunResult run_arithmetic_moments(const ArithmeticRunConfig& cfg) {
    if (cfg.curves.empty()) throw std::invalid_argument("need at least one curve");
    if (cfg.levels.empty()) throw std::invalid_argument("need at least one level");
    PrimeSequence seq = cfg.generators.empty()
                            ? PrimeSequence::with_default_generators(cfg.p, cfg.primes, cfg.r)
                            : PrimeSequence(cfg.p, cfg.primes, cfg.generators, cfg.r);
    unsigned top = *std::max_element(cfg.levels.begin(), cfg.levels.end());
    if (top > seq.length()) throw std::invalid_argument("level exceeds the prime sequence");
    for (unsigned n : cfg.levels)
        if (n < 1) throw std::invalid_argument("levels must be >= 1");

    std::vector<std::unique_ptr<EllipticCurve>> curves;
    for (const auto& cc : cfg.curves) {
        curves.push_back(std::make_unique<EllipticCurve>(cc));
        if (!cfg.cache_dir.empty())
            curves.back()->load_symbol_cache(cfg.cache_dir + "/symbols_" + cc.label + "_d" +
                                             std::to_string(cfg.digits) + ".csv");
    }

    LstarOptions opt;
    opt.digits = cfg.digits;
    opt.den_bound = cfg.den_bound;
    opt.exec = cfg.exec;

    // full-shape measures at every tower prefix up to the top level
    std::vector<Measure> full;
    for (unsigned n = 1; n <= top; ++n) {
        PrimeSequence pre = seq.prefix(n);
        for (auto& curve : curves) pre.validate_taylor_wiles(*curve);
        Measure nu = build_measure(*curves[0], pre, opt);
        for (size_t c = 1; c < curves.size(); ++c)
            nu = convolve(nu, build_measure(*curves[c], pre, opt));
        full.push_back(std::move(nu));
    }

    ArithmeticRunResult res;
    for (unsigned n = 2; n <= top; ++n)
        res.tower_compat.push_back(level_compatibility_check(full[n - 1], full[n - 2]));

    std::map<unsigned, Rational> vals;
    for (unsigned n : cfg.levels) {
        Measure pushed = pushforward_uniform(full[n - 1], cfg.m);
        MomentComputation mc = moment_with_identity(pushed, /*e=*/1, /*u0=*/1, cfg.exec);
        MomentReport rep;
        rep.n = n;
        rep.exact_value = mc.moment;
        rep.valuation = mc.valuation;
        rep.identity_ok = mc.identity_ok;
        rep.conventions = conventions_note();
        if (!mc.identity_ok) res.all_identities_ok = false;
        if (!mc.valuation.is_infinite()) vals[n] = mc.valuation.value();
        res.reports.push_back(std::move(rep));
    }

    // fit from the two smallest consecutive levels present
    for (auto it = vals.begin(); it != vals.end(); ++it) {
        auto jt = vals.find(it->first + 1);
        if (jt == vals.end()) continue;
        auto kt = vals.find(it->first + 2);
        const Rational* third = kt == vals.end() ? nullptr : &kt->second;
        res.fit = fit_invariants(it->second, jt->second, it->first - 1, cfg.p, cfg.m, 1, third);
        break;
    }
    if (res.fit && res.fit->in_asymptotic_regime) {
        for (auto& rep : res.reports) {
            Rational pred = res.fit->mu_vp -
                            Rational(1, static_cast<long>(phi_ppow(cfg.p, cfg.m))) +
                            (res.fit->lambda_raw + 1) /
                                Rational(static_cast<long>(phi_ppow(cfg.p, cfg.m * rep.n)));
            rep.predicted_valuation = pred;
        }
    }

    if (!cfg.cache_dir.empty())
        for (size_t c = 0; c < curves.size(); ++c)
            curves[c]->save_symbol_cache(cfg.cache_dir + "/symbols_" + cfg.curves[c].label +
                                         "_d" + std::to_string(cfg.digits) + ".csv");

    json doc;
    doc["kind"] = "arithmetic_moment_run";
    json cj = json::array();
    for (const auto& cc : cfg.curves) cj.push_back(json::parse(cc.to_json()));
    doc["curves"] = std::move(cj);
    doc["sequence"] = json::parse(seq.to_json());
    doc["m"] = cfg.m;
    doc["digits"] = cfg.digits;
    doc["denominator_bound"] =
        (cfg.den_bound == 0 ? Int(0) : cfg.den_bound).get_str();
    doc["conventions"] = conventions_note();
    json reps = json::array();
    for (const auto& r : res.reports) reps.push_back(report_body(r));
    doc["reports"] = std::move(reps);
    doc["tower_compat"] = res.tower_compat;
    if (res.fit) doc["fit"] = fit_body(*res.fit);
    res.json = doc.dump(2);
    return res;
}

SyntheticRunResult run_synthetic_moments(const SyntheticRunConfig& cfg) {
    GroupShape shape(cfg.p, std::vector<unsigned>(cfg.factors, cfg.m));
    Measure nu = synthetic_measure(cfg.p, shape, cfg.mu, cfg.lambda, cfg.e, cfg.seed);

    SyntheticRunResult res;
    {
        AmicePoly top = amice(verticalize(nu), cfg.e);
        AmicePoly low = amice(verticalize(pushforward_drop_last(nu)), cfg.e);
        res.recovered = weierstrass_invariants({low, top}, cfg.e);
    }

    std::vector<unsigned> levels = cfg.levels;
    if (levels.empty())
        for (unsigned n = 2; n <= cfg.factors; ++n) levels.push_back(n);
    std::map<unsigned, Rational> vals;
    for (unsigned n : levels) {
        if (n < 1 || n > cfg.factors) throw std::invalid_argument("synthetic level out of range");
        Measure pushed = pushforward_first(nu, n);
        MomentComputation mc = moment_with_identity(pushed, cfg.e, 1, cfg.exec);
        MomentReport rep;
        rep.n = n;
        rep.exact_value = mc.moment;
        rep.valuation = mc.valuation;
        rep.identity_ok = mc.identity_ok;
        rep.conventions = conventions_note();
        if (!mc.identity_ok) res.all_identities_ok = false;
        if (!mc.valuation.is_infinite()) vals[n] = mc.valuation.value();
        res.reports.push_back(std::move(rep));
    }
    for (auto it = vals.begin(); it != vals.end(); ++it) {
        auto jt = vals.find(it->first + 1);
        if (jt == vals.end()) continue;
        res.fit = fit_invariants(it->second, jt->second, it->first - 1, cfg.p, cfg.m, cfg.e);
        break;
    }

    json doc;
    doc["kind"] = "synthetic_moment_run";
    doc["p"] = cfg.p;
    doc["m"] = cfg.m;
    doc["factors"] = cfg.factors;
    doc["planted"] = {{"mu", cfg.mu}, {"lambda", cfg.lambda}, {"e", cfg.e}};
    doc["seed"] = cfg.seed;
    doc["conventions"] = conventions_note();
    json rec;
    rec["mu_infinite"] = res.recovered.mu_infinite;
    rec["mu"] = res.recovered.mu.get_str();
    rec["lambda"] = res.recovered.lambda;
    rec["certified"] = res.recovered.certified;
    rec["note"] = res.recovered.note;
    doc["recovered"] = std::move(rec);
    json reps = json::array();
    for (const auto& r : res.reports) reps.push_back(report_body(r));
    doc["reports"] = std::move(reps);
    if (res.fit) doc["fit"] = fit_body(*res.fit);
    res.json = doc.dump(2);
    return res;
}

std::string MomentReport::to_json() const {
    json j = report_body(*this);
    j["conventions"] = conventions;
    return j.dump();
}

}  // namespace pmom
