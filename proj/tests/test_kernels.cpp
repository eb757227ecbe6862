#include <doctest.h>

#include <random>

#include "pmom/digit.hpp"
#include "pmom/kernels.hpp"
#include "pmom/moments.hpp"

using namespace pmom;

namespace {

Measure random_measure(const GroupShape& sh, std::mt19937_64& rng) {
    std::vector<Cyclotomic> c;
    c.reserve(sh.size());
    for (size_t i = 0; i < sh.size(); ++i) {
        long num = static_cast<long>(rng() % 15) - 7;
        long den = 1 + static_cast<long>(rng() % 3);
        c.push_back(Cyclotomic::from_rational(sh.p, make_rational(Int(num), Int(den))));
    }
    return Measure(sh, std::move(c));
}

}  // namespace

TEST_CASE("openmp dft matches the serial reference bit for bit") {
    std::mt19937_64 rng(101);
    for (long p : {2L, 3L, 5L}) {
        GroupShape sh(p, {1, 2, 1});
        Measure nu = random_measure(sh, rng);
        unsigned L = sh.max_exp();
        auto a = kernels::group_dft_serial(sh, nu.coeffs(), false, L);
        auto b = kernels::group_dft_omp(sh, nu.coeffs(), false, L);
        REQUIRE(a.size() == b.size());
        for (size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
        auto c = kernels::group_dft_serial(sh, nu.coeffs(), true, L);
        auto d = kernels::group_dft_omp(sh, nu.coeffs(), true, L);
        for (size_t i = 0; i < c.size(); ++i) CHECK(c[i] == d[i]);
    }
}

TEST_CASE("group ring arithmetic agrees with cyclotomic arithmetic") {
    std::mt19937_64 rng(103);
    for (int rep = 0; rep < 6; ++rep) {
        GroupShape sh(3, {2});
        Measure a = random_measure(sh, rng), b = random_measure(sh, rng);
        Cyclotomic x = a.coeff(0) + a.coeff(1), y = b.coeff(2) - b.coeff(0);
        auto gx = kernels::GroupRingEl::from_cyclotomic(x, 2);
        auto gy = kernels::GroupRingEl::from_cyclotomic(y, 2);
        CHECK(kernels::ring_mul(gx, gy).to_cyclotomic(3, 2) == x * y);
        auto acc = gx;
        kernels::ring_add_assign(acc, gy);
        CHECK(acc.to_cyclotomic(3, 2) == x + y);
    }
}

TEST_CASE("weighted tuple sum serial and openmp agree") {
    std::mt19937_64 rng(107);
    for (long p : {3L, 5L}) {
        GroupShape sh(p, {1, 1, 1});
        Measure nu = random_measure(sh, rng);
        Cyclotomic a = moment_sum(nu, 1, Exec::Serial);
        Cyclotomic b = moment_sum(nu, 1, Exec::OpenMP);
        CHECK(a == b);
    }
}
