#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dk2/holonomy.hpp"
#include "dk2/linalg.hpp"
#include "dk2/mods.hpp"

using namespace dk2;
using E = ElementT<Coeff>;

namespace {

struct ParallelGuard {
    explicit ParallelGuard(bool on) { set_parallel(on); }
    ~ParallelGuard() { set_parallel(true); }
};

} // namespace

TEST_CASE("drinfeld_phi is bit-identical across modes") {
    E x = E::agen_elem(2, 1, 2), y = E::agen_elem(2, 2, 3);
    Series par, ser;
    {
        ParallelGuard g(true);
        par = drinfeld_phi(x, y, 5);
    }
    {
        ParallelGuard g(false);
        ser = drinfeld_phi(x, y, 5);
    }
    CHECK(par == ser);
    CHECK(series_str(par) == series_str(ser));
}

TEST_CASE("series_mul is bit-identical across modes") {
    E x = E::agen_elem(2, 1, 2), y = E::agen_elem(2, 2, 3);
    Series a = drinfeld_phi(x, y, 4);
    Series b = series_exp(x + y, Coeff::ipi(1), 4);
    Series par, ser;
    {
        ParallelGuard g(true);
        par = series_mul(a, b);
    }
    {
        ParallelGuard g(false);
        ser = series_mul(a, b);
    }
    CHECK(par == ser);
}

TEST_CASE("kernel computation is bit-identical across modes") {
    KernelReport par = kernel_of_boundary(3, 1, 2000000, true);
    KernelReport ser = kernel_of_boundary(3, 1, 2000000, false);
    CHECK(par.kernel_dim == ser.kernel_dim);
    CHECK(par.raw_kernel_dim == ser.raw_kernel_dim);
    CHECK(par.span_rank == ser.span_rank);
    CHECK(par.basis_fingerprint == ser.basis_fingerprint);
}

TEST_CASE("quadrature is bit-identical across modes") {
    PentagonPaths P = pentagon_paths(0.1);
    NumSeries tpar, tser, spar, sser;
    {
        ParallelGuard g(true);
        tpar = path_transport(P.cII);
        spar = surface_p1(0.1);
    }
    {
        ParallelGuard g(false);
        tser = path_transport(P.cII);
        sser = surface_p1(0.1);
    }
    CHECK(max_abs(tpar - tser) == 0.0);
    CHECK(max_abs(spar - sser) == 0.0);
}

TEST_CASE("hexagonator is bit-identical across modes") {
    Series par, ser;
    {
        ParallelGuard g(true);
        par = hexagonator(3).body;
    }
    {
        ParallelGuard g(false);
        ser = hexagonator(3).body;
    }
    CHECK(par == ser);
}
