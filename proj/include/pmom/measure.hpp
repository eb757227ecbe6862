#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pmom/cyclotomic.hpp"

namespace pmom {

enum class Exec { Serial, OpenMP };

// Product group prod_i Z/p^{m_i}.  Flat indices are mixed-radix with the
// first factor fastest, which is exactly the digit expansion of the index.
struct GroupShape {
    long p = 0;
    std::vector<unsigned> exps;

    GroupShape() = default;
    GroupShape(long prime, std::vector<unsigned> m);

    size_t factors() const { return exps.size(); }
    size_t factor_size(size_t i) const { return upow(p, exps[i]); }
    size_t size() const;
    unsigned total_exp() const;
    unsigned max_exp() const;

    size_t index_of(const std::vector<long>& tuple) const;
    std::vector<long> tuple_of(size_t index) const;

    bool operator==(const GroupShape& o) const { return p == o.p && exps == o.exps; }
    bool operator!=(const GroupShape& o) const { return !(*this == o); }
};

// Character chi(a_1,...,a_n) = prod_i zeta_{p^{m_i}}^{k_i a_i}, stored by its
// exponent tuple against the canonical generators.
struct CharacterTuple {
    GroupShape shape;
    std::vector<long> k;

    CharacterTuple() = default;
    CharacterTuple(GroupShape s, std::vector<long> kk);
    static CharacterTuple trivial(const GroupShape& s);
    static CharacterTuple from_flat(const GroupShape& s, size_t flat);

    bool is_trivial() const;
    size_t flat() const { return shape.index_of(k); }
    // chi(g) as an element of Q(zeta_{p^{max m_i}}).
    Cyclotomic value_at(const std::vector<long>& g) const;
};

// Dense coefficient table on a GroupShape.  The finite-level avatar of a
// horizontal measure; coefficients are cyclotomic (rational in arithmetic use).
class Measure {
public:
    Measure() = default;
    Measure(GroupShape shape, std::vector<Cyclotomic> coeffs);
    static Measure zero(const GroupShape& shape);
    static Measure dirac(const GroupShape& shape, const std::vector<long>& g);

    const GroupShape& shape() const { return shape_; }
    const std::vector<Cyclotomic>& coeffs() const { return c_; }
    const Cyclotomic& coeff(size_t flat) const { return c_[flat]; }
    Cyclotomic& coeff_mut(size_t flat) { return c_[flat]; }
    Cyclotomic total_mass() const;

    bool operator==(const Measure& o) const { return shape_ == o.shape_ && c_ == o.c_; }

    std::string to_json() const;
    static Measure from_json(const std::string& text);

private:
    GroupShape shape_;
    std::vector<Cyclotomic> c_;
};

// sum_g nu[g] chi(g), exact.
Cyclotomic evaluate(const Measure& nu, const CharacterTuple& chi);

// All character values at once: out[flat(chi)] = evaluate(nu, chi).
std::vector<Cyclotomic> evaluate_all(const Measure& nu, Exec exec = Exec::OpenMP);

// Per-factor action of a pushforward.
struct FactorMap {
    bool erase = false;     // delete the factor entirely
    unsigned new_exp = 0;   // otherwise reduce Z/p^{m_i} -> Z/p^{new_exp}
};

Measure pushforward(const Measure& nu, const std::vector<FactorMap>& maps);
// Reduce every factor of a (m,...,m)-shape measure mod p^m_target.
Measure pushforward_uniform(const Measure& nu, unsigned m_target);
// Drop the last factor (sum over its fibers).
Measure pushforward_drop_last(const Measure& nu);
// Keep only the first r factors.
Measure pushforward_first(const Measure& nu, size_t r);

Measure convolve(const Measure& a, const Measure& b);

// Unique nu with evaluate(nu, chi) = values[flat(chi)] for every chi.
Measure fourier_inverse(const GroupShape& shape, const std::vector<Cyclotomic>& values,
                        Exec exec = Exec::OpenMP);

// Total mass of the fiber over the first r coordinates.
Cyclotomic fiber_mass(const Measure& nu, size_t r, const std::vector<long>& head);

}  // namespace pmom
