#pragma once

#include <vector>

#include "pmom/measure.hpp"

namespace pmom::kernels {

// Multidimensional character transform over prod_i Z/p^{m_i}, decomposed
// factor by factor.  With conjugate = false computes
//   out[k] = sum_g in[g] * prod_i zeta^{k_i a_i},
// with conjugate = true the exponents are negated.  `level` is the cyclotomic
// level the output is computed at (>= max m_i).
//
// The serial variant is the reference implementation; the OpenMP variant must
// produce bit-identical results (exact arithmetic, fixed summation order).
std::vector<Cyclotomic> group_dft_serial(const GroupShape& shape,
                                         const std::vector<Cyclotomic>& in,
                                         bool conjugate, unsigned level);
std::vector<Cyclotomic> group_dft_omp(const GroupShape& shape,
                                      const std::vector<Cyclotomic>& in,
                                      bool conjugate, unsigned level);
std::vector<Cyclotomic> group_dft(const GroupShape& shape, const std::vector<Cyclotomic>& in,
                                  bool conjugate, unsigned level, Exec exec);

// Element of Q[x]/(x^{p^L} - 1): integer coefficient vector over a single
// denominator.  Cheap mpz accumulation for the hot weighted-sum kernels;
// folded back into a canonical Cyclotomic only at the end.
struct GroupRingEl {
    std::vector<Int> num;
    Int den{1};

    static GroupRingEl zero(size_t n) { return GroupRingEl{std::vector<Int>(n, Int(0)), Int(1)}; }
    static GroupRingEl from_cyclotomic(const Cyclotomic& x, unsigned level);
    Cyclotomic to_cyclotomic(long p, unsigned level) const;
};

GroupRingEl ring_mul(const GroupRingEl& a, const GroupRingEl& b);
void ring_add_assign(GroupRingEl& acc, const GroupRingEl& x);

// Weighted tuple sum over all character tuples of (Z/p^m)^n:
//   sum_{(c_1..c_n)} (prod_i w[i][c_i]) * ev[c_1 + c_2 p^m + ...]
// computed with prefix products along a depth-first walk.  Weights and
// evaluations live in Q[x]/(x^{p^L} - 1).
GroupRingEl weighted_tuple_sum_serial(const std::vector<std::vector<GroupRingEl>>& w,
                                      const std::vector<GroupRingEl>& ev, size_t ring_size);
GroupRingEl weighted_tuple_sum_omp(const std::vector<std::vector<GroupRingEl>>& w,
                                   const std::vector<GroupRingEl>& ev, size_t ring_size);
GroupRingEl weighted_tuple_sum(const std::vector<std::vector<GroupRingEl>>& w,
                               const std::vector<GroupRingEl>& ev, size_t ring_size, Exec exec);

}  // namespace pmom::kernels
