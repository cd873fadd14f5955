// serial versus OpenMP timings for the main kernels
#include <chrono>
#include <cstdio>

#include "dk2/holonomy.hpp"
#include "dk2/linalg.hpp"
#include "dk2/series.hpp"

using namespace dk2;
using E = ElementT<Coeff>;

namespace {

template <class F>
double time_it(F&& f, int reps) {
    auto t0 = std::chrono::steady_clock::now();
    for (int i = 0; i < reps; ++i) f();
    auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(t1 - t0).count() / reps;
}

template <class F>
void bench(const char* name, F&& f, int reps = 3) {
    set_parallel(false);
    double ser = time_it(f, reps);
    set_parallel(true);
    double par = time_it(f, reps);
    std::printf("%-28s serial %8.4fs   omp %8.4fs   speedup %.2fx\n", name, ser, par,
                ser / par);
}

} // namespace

int main() {
    E x = E::agen_elem(2, 1, 2), y = E::agen_elem(2, 2, 3);

    bench("drinfeld_phi order 6", [&] { drinfeld_phi(x, y, 6); });

    bench("series_mul order 6", [&] {
        Series a = drinfeld_phi(x, y, 6);
        series_mul(a, a);
    });

    bench("kernel n=3 d=2", [] { kernel_of_boundary(3, 2); }, 1);

    bench("surface holonomy eps=0.02", [] { surface_p1(0.02, {1e-9, 16}); });

    bench("path transport eps=0.02", [] {
        PentagonPaths P = pentagon_paths(0.02);
        path_transport(P.cII, {1e-11, 20});
    });
    return 0;
}
