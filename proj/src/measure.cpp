#include "pmom/measure.hpp"

#include <json.hpp>

#include "pmom/kernels.hpp"

namespace pmom {

using json = nlohmann::ordered_json;

GroupShape::GroupShape(long prime, std::vector<unsigned> m) : p(prime), exps(std::move(m)) {
    if (p < 2) throw std::invalid_argument("shape: prime must be >= 2");
    for (unsigned e : exps)
        if (e < 1) throw std::invalid_argument("shape: exponents must be >= 1");
    (void)size();  // overflow guard
}

size_t GroupShape::size() const {
    size_t s = 1;
    for (unsigned e : exps) {
        size_t f = upow(p, e);
        if (s > (static_cast<size_t>(1) << 56) / f) throw std::overflow_error("group too large");
        s *= f;
    }
    return s;
}

unsigned GroupShape::total_exp() const {
    unsigned t = 0;
    for (unsigned e : exps) t += e;
    return t;
}

unsigned GroupShape::max_exp() const {
    unsigned t = 0;
    for (unsigned e : exps) t = std::max(t, e);
    return t;
}

size_t GroupShape::index_of(const std::vector<long>& tuple) const {
    if (tuple.size() != exps.size()) throw std::invalid_argument("tuple arity mismatch");
    size_t idx = 0, stride = 1;
    for (size_t i = 0; i < exps.size(); ++i) {
        size_t f = factor_size(i);
        long a = tuple[i] % static_cast<long>(f);
        if (a < 0) a += static_cast<long>(f);
        idx += static_cast<size_t>(a) * stride;
        stride *= f;
    }
    return idx;
}

std::vector<long> GroupShape::tuple_of(size_t index) const {
    std::vector<long> t(exps.size());
    for (size_t i = 0; i < exps.size(); ++i) {
        size_t f = factor_size(i);
        t[i] = static_cast<long>(index % f);
        index /= f;
    }
    return t;
}

CharacterTuple::CharacterTuple(GroupShape s, std::vector<long> kk) : shape(std::move(s)) {
    if (kk.size() != shape.factors()) throw std::invalid_argument("character arity mismatch");
    k.resize(kk.size());
    for (size_t i = 0; i < kk.size(); ++i) {
        long f = static_cast<long>(shape.factor_size(i));
        k[i] = ((kk[i] % f) + f) % f;
    }
}

CharacterTuple CharacterTuple::trivial(const GroupShape& s) {
    return CharacterTuple(s, std::vector<long>(s.factors(), 0));
}

CharacterTuple CharacterTuple::from_flat(const GroupShape& s, size_t flat) {
    return CharacterTuple(s, s.tuple_of(flat));
}

bool CharacterTuple::is_trivial() const {
    for (long kk : k)
        if (kk != 0) return false;
    return true;
}

Cyclotomic CharacterTuple::value_at(const std::vector<long>& g) const {
    unsigned L = shape.max_exp();
    size_t pL = upow(shape.p, L);
    long long e = 0;
    for (size_t i = 0; i < k.size(); ++i) {
        long long scale = static_cast<long long>(upow(shape.p, L - shape.exps[i]));
        e += (k[i] * g[i]) % static_cast<long long>(pL) * scale % static_cast<long long>(pL);
        e %= static_cast<long long>(pL);
    }
    return Cyclotomic::root_of_unity(shape.p, L, static_cast<long>(e));
}

Measure::Measure(GroupShape shape, std::vector<Cyclotomic> coeffs)
    : shape_(std::move(shape)), c_(std::move(coeffs)) {
    if (c_.size() != shape_.size()) throw std::invalid_argument("coefficient table size mismatch");
}

Measure Measure::zero(const GroupShape& shape) {
    return Measure(shape, std::vector<Cyclotomic>(shape.size(), Cyclotomic(shape.p)));
}

Measure Measure::dirac(const GroupShape& shape, const std::vector<long>& g) {
    Measure m = zero(shape);
    m.c_[shape.index_of(g)] = Cyclotomic::from_int(shape.p, 1);
    return m;
}

Cyclotomic Measure::total_mass() const {
    Cyclotomic s(shape_.p);
    for (const auto& c : c_) s += c;
    return s;
}

Cyclotomic evaluate(const Measure& nu, const CharacterTuple& chi) {
    if (chi.shape != nu.shape()) throw std::invalid_argument("evaluate: shape mismatch");
    const GroupShape& sh = nu.shape();
    unsigned L = sh.max_exp();
    for (const auto& c : nu.coeffs()) L = std::max(L, c.level());
    size_t pL = upow(sh.p, L);
    Cyclotomic acc = Cyclotomic(sh.p).embed_to_level(L);
    std::vector<long long> step(sh.factors());
    for (size_t i = 0; i < sh.factors(); ++i)
        step[i] = static_cast<long long>((static_cast<unsigned long>(chi.k[i]) *
                                          upow(sh.p, L - sh.exps[i])) % pL);
    for (size_t flat = 0; flat < sh.size(); ++flat) {
        if (nu.coeff(flat).is_zero()) continue;
        std::vector<long> g = sh.tuple_of(flat);
        long long e = 0;
        for (size_t i = 0; i < sh.factors(); ++i)
            e = (e + g[i] * step[i]) % static_cast<long long>(pL);
        acc += nu.coeff(flat).times_root(L, static_cast<long>(e));
    }
    return acc;
}

std::vector<Cyclotomic> evaluate_all(const Measure& nu, Exec exec) {
    unsigned L = nu.shape().max_exp();
    for (const auto& c : nu.coeffs()) L = std::max(L, c.level());
    return kernels::group_dft(nu.shape(), nu.coeffs(), /*conjugate=*/false, L, exec);
}

Measure pushforward(const Measure& nu, const std::vector<FactorMap>& maps) {
    const GroupShape& src = nu.shape();
    if (maps.size() != src.factors()) throw std::invalid_argument("pushforward: map arity mismatch");
    std::vector<unsigned> texp;
    for (size_t i = 0; i < maps.size(); ++i) {
        if (maps[i].erase) continue;
        if (maps[i].new_exp < 1 || maps[i].new_exp > src.exps[i])
            throw std::invalid_argument("pushforward: invalid reduction exponent");
        texp.push_back(maps[i].new_exp);
    }
    GroupShape tgt(src.p, texp);
    Measure out = Measure::zero(tgt);
    std::vector<long> g(src.factors());
    for (size_t flat = 0; flat < src.size(); ++flat) {
        g = src.tuple_of(flat);
        std::vector<long> h;
        h.reserve(texp.size());
        for (size_t i = 0; i < maps.size(); ++i) {
            if (maps[i].erase) continue;
            h.push_back(g[i] % static_cast<long>(upow(src.p, maps[i].new_exp)));
        }
        out.coeff_mut(tgt.index_of(h)) += nu.coeff(flat);
    }
    return out;
}

Measure pushforward_uniform(const Measure& nu, unsigned m_target) {
    std::vector<FactorMap> maps(nu.shape().factors());
    for (size_t i = 0; i < maps.size(); ++i)
        maps[i] = FactorMap{false, std::min(m_target, nu.shape().exps[i])};
    for (size_t i = 0; i < maps.size(); ++i)
        if (nu.shape().exps[i] < m_target)
            throw std::invalid_argument("pushforward_uniform: factor exponent below target");
    return pushforward(nu, maps);
}

Measure pushforward_drop_last(const Measure& nu) {
    std::vector<FactorMap> maps(nu.shape().factors());
    for (size_t i = 0; i + 1 < maps.size(); ++i) maps[i] = FactorMap{false, nu.shape().exps[i]};
    maps.back() = FactorMap{true, 0};
    return pushforward(nu, maps);
}

Measure pushforward_first(const Measure& nu, size_t r) {
    if (r > nu.shape().factors()) throw std::invalid_argument("pushforward_first: r out of range");
    std::vector<FactorMap> maps(nu.shape().factors());
    for (size_t i = 0; i < maps.size(); ++i)
        maps[i] = i < r ? FactorMap{false, nu.shape().exps[i]} : FactorMap{true, 0};
    return pushforward(nu, maps);
}

Measure convolve(const Measure& a, const Measure& b) {
    if (a.shape() != b.shape()) throw std::invalid_argument("convolve: shape mismatch");
    const GroupShape& sh = a.shape();
    Measure out = Measure::zero(sh);
    for (size_t i = 0; i < sh.size(); ++i) {
        if (a.coeff(i).is_zero()) continue;
        std::vector<long> gi = sh.tuple_of(i);
        for (size_t j = 0; j < sh.size(); ++j) {
            if (b.coeff(j).is_zero()) continue;
            std::vector<long> gj = sh.tuple_of(j);
            for (size_t t = 0; t < gj.size(); ++t) gj[t] += gi[t];
            out.coeff_mut(sh.index_of(gj)) += a.coeff(i) * b.coeff(j);
        }
    }
    return out;
}

Measure fourier_inverse(const GroupShape& shape, const std::vector<Cyclotomic>& values, Exec exec) {
    if (values.size() != shape.size())
        throw std::invalid_argument("fourier_inverse: need one value per character");
    unsigned L = shape.max_exp();
    for (const auto& v : values) L = std::max(L, v.level());
    std::vector<Cyclotomic> coeffs = kernels::group_dft(shape, values, /*conjugate=*/true, L, exec);
    Rational inv(1, static_cast<long>(shape.size()));
    for (auto& c : coeffs) c = c.scaled(inv);
    return Measure(shape, std::move(coeffs));
}

Cyclotomic fiber_mass(const Measure& nu, size_t r, const std::vector<long>& head) {
    const GroupShape& sh = nu.shape();
    if (r > sh.factors() || head.size() != r) throw std::invalid_argument("fiber_mass: bad arity");
    std::vector<long> want(r);
    for (size_t i = 0; i < r; ++i) {
        long f = static_cast<long>(sh.factor_size(i));
        want[i] = ((head[i] % f) + f) % f;
    }
    Cyclotomic acc(sh.p);
    for (size_t flat = 0; flat < sh.size(); ++flat) {
        std::vector<long> g = sh.tuple_of(flat);
        bool match = true;
        for (size_t i = 0; i < r; ++i)
            if (g[i] != want[i]) { match = false; break; }
        if (match) acc += nu.coeff(flat);
    }
    return acc;
}

// --- serialization ---------------------------------------------------------

namespace {

json cyclotomic_to_json(const Cyclotomic& x) {
    json j;
    j["level"] = x.level();
    std::vector<std::string> cs;
    cs.reserve(x.degree());
    for (size_t k = 0; k < x.degree(); ++k) {
        Rational c = x.coeff(k);
        c.canonicalize();
        cs.push_back(c.get_str());
    }
    j["coords"] = cs;
    return j;
}

Cyclotomic cyclotomic_from_json(long p, const json& j) {
    unsigned level = j.at("level").get<unsigned>();
    const auto& cs = j.at("coords");
    if (cs.size() != phi_ppow(p, level)) throw std::invalid_argument("bad coordinate count");
    size_t pl = upow(p, level);
    std::vector<Int> num(pl, Int(0));
    Int den(1);
    std::vector<Rational> coords;
    for (const auto& s : cs) coords.push_back(parse_rational(s.get<std::string>()));
    for (const auto& c : coords) den = den / gcd(den, Int(c.get_den())) * Int(c.get_den());
    for (size_t k = 0; k < coords.size(); ++k)
        num[k] = Int(coords[k].get_num()) * (den / Int(coords[k].get_den()));
    return Cyclotomic::from_group_ring(p, level, std::move(num), den);
}

}  // namespace

std::string Measure::to_json() const {
    json j;
    j["p"] = shape_.p;
    j["exponents"] = shape_.exps;
    json arr = json::array();
    for (const auto& c : c_) arr.push_back(cyclotomic_to_json(c));
    j["coeffs"] = std::move(arr);
    return j.dump();
}

Measure Measure::from_json(const std::string& text) {
    json j = json::parse(text);
    GroupShape sh(j.at("p").get<long>(), j.at("exponents").get<std::vector<unsigned>>());
    const auto& arr = j.at("coeffs");
    if (arr.size() != sh.size()) throw std::invalid_argument("coefficient count mismatch");
    std::vector<Cyclotomic> cs;
    cs.reserve(arr.size());
    for (const auto& cj : arr) cs.push_back(cyclotomic_from_json(sh.p, cj));
    return Measure(sh, std::move(cs));
}

}  // namespace pmom
