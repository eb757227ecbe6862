#include "pmom/kernels.hpp"

#include <omp.h>

namespace pmom::kernels {

namespace {

// One factor-stage of the product-group transform.  Reads `cur`, writes the
// transform along factor `i` into `next`; slice layout is untouched so every
// output slot is written exactly once (safe to parallelize over slices).
void dft_stage(const GroupShape& shape, size_t i, bool conjugate, unsigned level,
               const std::vector<Cyclotomic>& cur, std::vector<Cyclotomic>& next, bool par) {
    const size_t s = shape.factor_size(i);
    size_t stride = 1;
    for (size_t t = 0; t < i; ++t) stride *= shape.factor_size(t);
    const size_t total = shape.size();
    const size_t block = stride * s;
    const size_t nblocks = total / block;
    const size_t pL = upow(shape.p, level);
    const size_t unit = upow(shape.p, level - shape.exps[i]);

    const long nslices = static_cast<long>(nblocks * stride);
#pragma omp parallel for schedule(static) if (par)
    for (long sl = 0; sl < nslices; ++sl) {
        const size_t hi = static_cast<size_t>(sl) / stride;
        const size_t lo = static_cast<size_t>(sl) % stride;
        const size_t base = hi * block + lo;
        for (size_t k = 0; k < s; ++k) {
            Cyclotomic acc = Cyclotomic(shape.p).embed_to_level(level);
            size_t e = 0;
            const size_t estep = (k * unit) % pL;
            for (size_t a = 0; a < s; ++a) {
                const Cyclotomic& x = cur[base + a * stride];
                if (!x.is_zero()) {
                    long ee = static_cast<long>(e);
                    acc += x.times_root(level, conjugate ? -ee : ee);
                }
                e += estep;
                if (e >= pL) e -= pL;
            }
            next[base + k * stride] = std::move(acc);
        }
    }
}

std::vector<Cyclotomic> group_dft_impl(const GroupShape& shape, const std::vector<Cyclotomic>& in,
                                       bool conjugate, unsigned level, bool par) {
    if (in.size() != shape.size()) throw std::invalid_argument("group_dft: size mismatch");
    if (level < shape.max_exp()) throw std::invalid_argument("group_dft: level too small");
    std::vector<Cyclotomic> cur(in.size());
    const long n = static_cast<long>(in.size());
#pragma omp parallel for schedule(static) if (par)
    for (long g = 0; g < n; ++g) cur[static_cast<size_t>(g)] = in[static_cast<size_t>(g)].embed_to_level(level);
    std::vector<Cyclotomic> next(in.size());
    for (size_t i = 0; i < shape.factors(); ++i) {
        dft_stage(shape, i, conjugate, level, cur, next, par);
        cur.swap(next);
    }
    return cur;
}

}  // namespace

std::vector<Cyclotomic> group_dft_serial(const GroupShape& shape, const std::vector<Cyclotomic>& in,
                                         bool conjugate, unsigned level) {
    return group_dft_impl(shape, in, conjugate, level, false);
}

std::vector<Cyclotomic> group_dft_omp(const GroupShape& shape, const std::vector<Cyclotomic>& in,
                                      bool conjugate, unsigned level) {
    return group_dft_impl(shape, in, conjugate, level, true);
}

std::vector<Cyclotomic> group_dft(const GroupShape& shape, const std::vector<Cyclotomic>& in,
                                  bool conjugate, unsigned level, Exec exec) {
    return exec == Exec::Serial ? group_dft_serial(shape, in, conjugate, level)
                                : group_dft_omp(shape, in, conjugate, level);
}

GroupRingEl GroupRingEl::from_cyclotomic(const Cyclotomic& x, unsigned level) {
    Cyclotomic e = x.embed_to_level(level);
    GroupRingEl r = GroupRingEl::zero(upow(e.prime(), level));
    const auto& num = e.raw_num();
    for (size_t k = 0; k < num.size(); ++k) r.num[k] = num[k];
    r.den = e.raw_den();
    return r;
}

Cyclotomic GroupRingEl::to_cyclotomic(long p, unsigned level) const {
    return Cyclotomic::from_group_ring(p, level, num, den);
}

GroupRingEl ring_mul(const GroupRingEl& a, const GroupRingEl& b) {
    const size_t n = a.num.size();
    if (b.num.size() != n) throw std::invalid_argument("ring_mul: size mismatch");
    GroupRingEl r = GroupRingEl::zero(n);
    for (size_t i = 0; i < n; ++i) {
        if (a.num[i] == 0) continue;
        const mpz_srcptr ai = a.num[i].get_mpz_t();
        size_t idx = i;
        for (size_t j = 0; j < n; ++j) {
            if (b.num[j] != 0) mpz_addmul(r.num[idx].get_mpz_t(), ai, b.num[j].get_mpz_t());
            if (++idx == n) idx = 0;
        }
    }
    r.den = a.den * b.den;
    return r;
}

void ring_add_assign(GroupRingEl& acc, const GroupRingEl& x) {
    const size_t n = acc.num.size();
    if (x.num.size() != n) throw std::invalid_argument("ring_add: size mismatch");
    if (acc.den == x.den) {
        for (size_t i = 0; i < n; ++i) acc.num[i] += x.num[i];
        return;
    }
    Int g = gcd(acc.den, x.den);
    Int sa = x.den / g, sx = acc.den / g;
    for (size_t i = 0; i < n; ++i) acc.num[i] = acc.num[i] * sa + x.num[i] * sx;
    acc.den *= sa;
}

namespace {

// Depth-first prefix products; the last factor is folded together with the
// evaluation table so only one dense product is spent per prefix.
void tuple_sum_rec(const std::vector<std::vector<GroupRingEl>>& w,
                   const std::vector<GroupRingEl>& ev, size_t ring_size, size_t depth,
                   size_t flatbase, size_t stride_pow, const GroupRingEl* acc, GroupRingEl& total) {
    const size_t n = w.size();
    const size_t s = w[0].size();
    if (depth + 1 == n) {
        GroupRingEl inner = GroupRingEl::zero(ring_size);
        bool any = false;
        for (size_t c = 0; c < s; ++c) {
            const GroupRingEl& e = ev[flatbase + c * stride_pow];
            bool ez = true;
            for (const auto& x : e.num)
                if (x != 0) { ez = false; break; }
            if (ez) continue;
            ring_add_assign(inner, ring_mul(w[depth][c], e));
            any = true;
        }
        if (any) ring_add_assign(total, acc ? ring_mul(*acc, inner) : inner);
        return;
    }
    for (size_t c = 0; c < s; ++c) {
        GroupRingEl next = acc ? ring_mul(*acc, w[depth][c]) : w[depth][c];
        tuple_sum_rec(w, ev, ring_size, depth + 1, flatbase + c * stride_pow, stride_pow * s,
                      &next, total);
    }
}

}  // namespace

GroupRingEl weighted_tuple_sum_serial(const std::vector<std::vector<GroupRingEl>>& w,
                                      const std::vector<GroupRingEl>& ev, size_t ring_size) {
    GroupRingEl total = GroupRingEl::zero(ring_size);
    if (w.empty()) {
        ring_add_assign(total, ev.at(0));
        return total;
    }
    tuple_sum_rec(w, ev, ring_size, 0, 0, 1, nullptr, total);
    return total;
}

GroupRingEl weighted_tuple_sum_omp(const std::vector<std::vector<GroupRingEl>>& w,
                                   const std::vector<GroupRingEl>& ev, size_t ring_size) {
    if (w.size() < 2) return weighted_tuple_sum_serial(w, ev, ring_size);
    const size_t s = w[0].size();
    std::vector<GroupRingEl> part(s, GroupRingEl::zero(ring_size));
    std::vector<std::vector<GroupRingEl>> tail(w.begin() + 1, w.end());
#pragma omp parallel for schedule(dynamic)
    for (long c = 0; c < static_cast<long>(s); ++c) {
        GroupRingEl sub = GroupRingEl::zero(ring_size);
        tuple_sum_rec(tail, ev, ring_size, 0, static_cast<size_t>(c), s, nullptr, sub);
        part[static_cast<size_t>(c)] = ring_mul(w[0][static_cast<size_t>(c)], sub);
    }
    GroupRingEl total = GroupRingEl::zero(ring_size);
    for (const auto& pc : part) ring_add_assign(total, pc);
    return total;
}

GroupRingEl weighted_tuple_sum(const std::vector<std::vector<GroupRingEl>>& w,
                               const std::vector<GroupRingEl>& ev, size_t ring_size, Exec exec) {
    return exec == Exec::Serial ? weighted_tuple_sum_serial(w, ev, ring_size)
                                : weighted_tuple_sum_omp(w, ev, ring_size);
}

}  // namespace pmom::kernels
