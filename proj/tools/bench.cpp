// Wall-clock comparison of the serial reference kernels against the OpenMP
// lanes.  Exact arithmetic guarantees identical outputs; this only measures.

#include <omp.h>

#include <cstdio>
#include <cstring>
#include <random>

#include "pmom/digit.hpp"
#include "pmom/elliptic.hpp"
#include "pmom/kernels.hpp"
#include "pmom/measure.hpp"
#include "pmom/moments.hpp"

using namespace pmom;

namespace {

Measure random_measure(const GroupShape& sh, std::mt19937_64& rng) {
    std::vector<Cyclotomic> c;
    c.reserve(sh.size());
    for (size_t i = 0; i < sh.size(); ++i) {
        long num = static_cast<long>(rng() % 19) - 9;
        c.push_back(Cyclotomic::from_rational(sh.p, Rational(num, (num & 1) ? 2 : 1)));
    }
    return Measure(sh, std::move(c));
}

template <typename F>
double time_once(F&& f) {
    double t0 = omp_get_wtime();
    f();
    return omp_get_wtime() - t0;
}

void row(const char* name, double serial, double parallel) {
    std::printf("%-34s %9.3f ms %9.3f ms %7.2fx\n", name, serial * 1e3, parallel * 1e3,
                parallel > 0 ? serial / parallel : 0.0);
}

}  // namespace

int main(int argc, char** argv) {
    bool quick = argc > 1 && std::strcmp(argv[1], "--quick") == 0;
    std::printf("threads: %d\n", omp_get_max_threads());
    std::printf("%-34s %12s %12s %8s\n", "kernel", "serial", "openmp", "speedup");

    std::mt19937_64 rng(7);

    {
        GroupShape sh(3, {1, 1, 1, 1, 2});
        Measure nu = random_measure(sh, rng);
        std::vector<Cyclotomic> a, b;
        double ts = time_once([&] { a = kernels::group_dft_serial(sh, nu.coeffs(), false, 2); });
        double tp = time_once([&] { b = kernels::group_dft_omp(sh, nu.coeffs(), false, 2); });
        if (!(a == b)) { std::fprintf(stderr, "dft mismatch\n"); return 1; }
        row("group_dft (3^6 table)", ts, tp);
    }

    {
        GroupShape sh(5, std::vector<unsigned>(quick ? 3u : 4u, 1u));
        Measure nu = synthetic_measure(5, sh, 0, 1, 1, 11);
        Cyclotomic a(5), b(5);
        double ts = time_once([&] { a = moment_sum(nu, 1, Exec::Serial); });
        double tp = time_once([&] { b = moment_sum(nu, 1, Exec::OpenMP); });
        if (!(a == b)) { std::fprintf(stderr, "moment mismatch\n"); return 1; }
        row(quick ? "moment_sum (5^3)" : "moment_sum (5^4)", ts, tp);
    }

    {
        EllipticCurve E1(curve_11a1()), E2(curve_11a1());
        long q = quick ? 241 : 571;
        Int bound = E1.default_denominator_bound();
        double ts = time_once([&] { E1.batch_symbols(q, +1, bound, 12, Exec::Serial); });
        double tp = time_once([&] { E2.batch_symbols(q, +1, bound, 12, Exec::OpenMP); });
        bool same = true;
        for (long a = 1; a < q; ++a)
            if (E1.modular_symbol(a, q, +1, bound, 12) != E2.modular_symbol(a, q, +1, bound, 12))
                same = false;
        if (!same) { std::fprintf(stderr, "symbol mismatch\n"); return 1; }
        row("symbol series table", ts, tp);
    }

    return 0;
}
