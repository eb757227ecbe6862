#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pmom/digit.hpp"
#include "pmom/hor_l.hpp"
#include "pmom/measure.hpp"

namespace pmom {

// Weighted moment of a measure on (Z/p^m)^{T}: characters run over the first
// T-1 factors with cyclotomic-unit weights, the last factor carries the
// distinguished character chi_0 with chi_0(1) = zeta_{p^m}^{u0}.  Includes
// the 1/p^{m(T-1)} normalization.
Cyclotomic moment_sum(const Measure& nu, long u0 = 1, Exec exec = Exec::OpenMP);

struct MomentComputation {
    Cyclotomic moment;       // weighted character sum
    Cyclotomic amice_route;  // prefactor * f_nu(zeta - 1)
    bool identity_ok = false;
    PadicVal valuation;
};

// Both routes of the moment identity; exact equality is the correctness gate.
MomentComputation moment_with_identity(const Measure& nu, long e = 1, long u0 = 1,
                                       Exec exec = Exec::OpenMP);

struct FitResult {
    bool in_asymptotic_regime = false;
    Rational lambda_raw;
    long lambda = 0;
    Rational mu_vp;  // on the v_p scale (mu/e of the uniformizer count)
    std::string note;
};

// Solve mu, lambda from valuations at moment levels n and n+1:
//   v = mu_vp - 1/phi(p^m) + (lambda+1)/phi(p^{m(n+1)}).
FitResult fit_invariants(const Rational& v_n, const Rational& v_n1, unsigned n, long p,
                         unsigned m, long e, const Rational* v_n2 = nullptr);

// D^r nu with representatives {1,...,p} in each of the first r factors.
Cyclotomic kolyvagin_derivative(const Measure& nu, unsigned r);

struct DerivativeReport {
    bool f0_matches = false;        // f_nu(0) = nu(1), exact
    bool deriv_congruent = false;   // f'_nu(0) = D nu mod p
    Cyclotomic f0, d0, f1, d1;
};

DerivativeReport derivative_congruence_check(const Measure& nu);

enum class UnitClass { MuZeroLambdaZero, MuZeroLambdaOne, Indeterminate };

struct UnitCriteriaReport {
    UnitClass cls = UnitClass::Indeterminate;
    PadicVal v_d0, v_d1;
    WeierstrassInvariants invariants;
    bool consistent = true;  // derivative classification vs certified invariants
};

UnitCriteriaReport unit_criteria(const Measure& nu, long e = 1);

struct KuriharaResult {
    bool nonvanishing = false;
    Rational sum;
    long q1 = 0;
    long generator = 0;
};

// sum_{a=1}^{q1} a <b^a / q1>^+ and its p-indivisibility.
KuriharaResult kurihara_check(EllipticCurve& E, long p, long q1, long generator,
                              const LstarOptions& opt);

// --- report emission --------------------------------------------------------

struct MomentReport {
    unsigned n = 0;  // tower level: number of sequence primes consumed
    Cyclotomic exact_value;
    PadicVal valuation;
    std::optional<Rational> predicted_valuation;
    bool identity_ok = false;
    std::string conventions;

    std::string to_json() const;
};

std::string conventions_note();

// --- batch pipelines ---------------------------------------------------------

struct ArithmeticRunConfig {
    std::vector<CurveConfig> curves;  // moment of the product over these
    long p = 3;
    std::vector<long> primes;
    std::vector<long> generators;  // empty = smallest primitive roots
    int r = 0;
    std::vector<unsigned> levels;  // tower sizes: number of primes consumed
    unsigned m = 1;                // digit exponent
    int digits = 12;
    Int den_bound = Int(0);
    Exec exec = Exec::OpenMP;
    std::string cache_dir;
};

struct ArithmeticRunResult {
    std::vector<MomentReport> reports;       // one per requested level
    std::vector<bool> tower_compat;          // consecutive prefix checks
    std::optional<FitResult> fit;            // from the first two levels
    std::string json;
    bool all_identities_ok = true;
};

ArithmeticRunResult run_arithmetic_moments(const ArithmeticRunConfig& cfg);

struct SyntheticRunConfig {
    long p = 3;
    unsigned m = 1;
    unsigned factors = 4;  // shape (m,...,m) with this many factors
    long mu = 0;
    long lambda = 0;
    long e = 1;
    uint64_t seed = 1;
    std::vector<unsigned> levels;  // tower sizes <= factors
    Exec exec = Exec::OpenMP;
};

struct SyntheticRunResult {
    std::vector<MomentReport> reports;
    WeierstrassInvariants recovered;
    std::optional<FitResult> fit;
    std::string json;
    bool all_identities_ok = true;
};

SyntheticRunResult run_synthetic_moments(const SyntheticRunConfig& cfg);

}  // namespace pmom
