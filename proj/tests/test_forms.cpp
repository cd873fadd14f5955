#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "dk2/forms.hpp"

using namespace dk2;

namespace {

AlgForm random_form(std::mt19937& rng, const Chart& ch, int degree) {
    const int nv = ch.size();
    std::uniform_int_distribution<int> pick(0, nv - 1), c(-3, 3), e(0, 2);
    AlgForm f(ch, 3, degree);
    for (int t = 0; t < 3; ++t) {
        std::vector<int> idx;
        while (static_cast<int>(idx.size()) < degree) {
            int v = pick(rng);
            if (std::find(idx.begin(), idx.end(), v) == idx.end()) idx.push_back(v);
        }
        std::sort(idx.begin(), idx.end());
        Poly num(nv), den(nv);
        num.add_term(Expo(nv, 0), c(rng));
        Expo de(nv, 0);
        de[pick(rng)] = 1 + e(rng);
        den.add_term(de, 1);
        den.add_term(Expo(nv, 0), 1 + std::abs(c(rng)));
        if (num.is_zero()) continue;
        ElementT<RatFun> el(3);
        el.add_deg0(AWord{{agen(1 + pick(rng) % 3, 4)}}, RatFun(num, den));
        f.add(idx, el);
    }
    return f;
}

} // namespace

TEST_CASE("ratfun canonicalization and arithmetic") {
    const int nv = 2;
    Poly x = Poly::var(nv, 0), y = Poly::var(nv, 1), one = Poly::constant(nv, 1);
    // zv/v -> z (monomial cancellation)
    RatFun f(x * y, y);
    CHECK(f == RatFun::of(x));
    CHECK(f.den == one);
    // cross-multiplied equality catches equal non-canonical pairs
    RatFun a(one, x - y);
    RatFun b(-one, y - x);
    CHECK(a == b);
    CHECK((a - b).is_zero());
    RatFun s = RatFun(one, x) + RatFun(one, y);
    CHECK(s == RatFun(x + y, x * y));
    CHECK((RatFun(one, x) * RatFun::of(x)) == RatFun::constant(nv, 1));
}

TEST_CASE("d of a closed log form vanishes and d.d = 0") {
    // d(dz/z) = 0
    AlgForm f(chart_zuvw(), 3, 1);
    ElementT<RatFun> e(3);
    e.add_deg0(AWord{}, RatFun(Poly::constant(4, 1), Poly::var(4, 0)));
    f.add({0}, e);
    CHECK(d(f).is_zero());

    std::mt19937 rng(5);
    for (int rep = 0; rep < 20; ++rep) {
        AlgForm g = random_form(rng, chart_zuvw(), 1);
        CHECK(d(d(g)).is_zero());
    }
}

TEST_CASE("wedge antisymmetry on function-valued 1-forms") {
    AlgForm zdu(chart_zuvw(), 3, 1), udz(chart_zuvw(), 3, 1);
    ElementT<RatFun> one_el(3);
    one_el.add_deg0(AWord{}, RatFun::constant(4, 1));
    zdu.add({0}, one_el);
    udz.add({1}, one_el);
    // dz^du + du^dz = 0
    CHECK((wedge(zdu, udz) + wedge(udz, zdu)).is_zero());
}

TEST_CASE("bracket_wedge on single-term forms") {
    // f x dz  paired with  g w du^dv  gives  f g [x, w] dz^du^dv
    AlgForm a(chart_zuvw(), 3, 1), b(chart_zuvw(), 3, 2);
    RatFun f(Poly::constant(4, 1), Poly::var(4, 0));
    RatFun g(Poly::constant(4, 2), Poly::var(4, 1));
    ElementT<RatFun> x(3), w(3);
    x.add_deg0(AWord{{agen(1, 2)}}, f);
    w.add_degm1(BMon{{}, bgen(BKind::ell, 1, 2, 3), {}}, g);
    a.add({0}, x);
    b.add({1, 2}, w);
    AlgForm bw = bracket_wedge(a, b);
    REQUIRE(bw.comps.count({0, 1, 2}) == 1);
    ElementT<RatFun> expected = mul(x, w) - mul(w, x);
    CHECK(bw.comps.at({0, 1, 2}) == expected);
}

TEST_CASE("kz connection transcription") {
    auto [A, B] = kz_connection();
    // dz1 coefficient contains t12/(z1-z2)
    const auto& a0 = A.comps.at({0});
    RatFun c12 = a0.deg0.at(AWord{{agen(1, 2)}});
    CHECK(c12 == RatFun(Poly::constant(4, 1), Poly::var(4, 0) - Poly::var(4, 1)));
    // B's first block carries 2/(z3-z1) against dz1^dz2
    const auto& b01 = B.comps.at({0, 1});
    RatFun r123 = b01.degm1.at(BMon{{}, bgen(BKind::r, 1, 2, 3), {}});
    Poly z1 = Poly::var(4, 0), z2 = Poly::var(4, 1), z3 = Poly::var(4, 2);
    CHECK(r123 == RatFun(Poly::constant(4, 2), (z3 - z1) * (z2 - z3)));

    // A is symmetric under relabeling z_i <-> z_j with the index swap
    // (check z1 <-> z2: pullback along the transposition equals the cabled A)
    const int nv = 4;
    std::vector<RatFun> swap12 = {RatFun::of(Poly::var(nv, 1)), RatFun::of(Poly::var(nv, 0)),
                                  RatFun::of(Poly::var(nv, 2)), RatFun::of(Poly::var(nv, 3))};
    AlgForm As = pullback(A, chart_z1234(), swap12);
    StrandMap sm = StrandMap::permutation(3, {2, 1, 3, 4});
    AlgForm Ac(chart_z1234(), 3, 1);
    for (auto& [S, e] : A.comps) Ac.add(S, cabling(sm, e));
    CHECK(As == Ac);
}

TEST_CASE("pullback along phi matches the reference forms exactly") {
    auto [A, B] = kz_connection();
    // dz1 -> dw
    AlgForm dz1(chart_z1234(), 3, 1);
    ElementT<RatFun> one_el(3);
    one_el.add_deg0(AWord{}, RatFun::constant(4, 1));
    dz1.add({0}, one_el);
    AlgForm pb = pullback_phi(dz1);
    REQUIRE(pb.comps.size() == 1);
    CHECK(pb.comps.count({3}) == 1);

    CHECK(pullback_phi(A) == pulled_back_A_reference());
    CHECK(pullback_phi(B) == pulled_back_B_reference());
}

TEST_CASE("phi composed with its inverse is the identity") {
    auto fwd = phi_images();      // z1..z4 in terms of (z,u,v,w)
    auto bwd = phi_inv_images();  // (z,u,v,w) in terms of z1..z4
    for (int i = 0; i < 4; ++i) {
        RatFun comp = subst(fwd[i], bwd); // z_i(phi(phi^{-1}))
        CHECK(comp == RatFun::of(Poly::var(4, i)));
    }
    for (int i = 0; i < 4; ++i) {
        RatFun comp = subst(bwd[i], fwd);
        CHECK(comp == RatFun::of(Poly::var(4, i)));
    }
}

TEST_CASE("pullback commutes with d and wedge") {
    std::mt19937 rng(11);
    for (int rep = 0; rep < 10; ++rep) {
        AlgForm f = random_form(rng, chart_z1234(), 1);
        AlgForm g = random_form(rng, chart_z1234(), 1);
        CHECK(pullback_phi(d(f)) == d(pullback_phi(f)));
        CHECK(pullback_phi(wedge(f, g)) == wedge(pullback_phi(f), pullback_phi(g)));
        CHECK(boundary(pullback_phi(f)) == pullback_phi(boundary(f)));
    }
}

TEST_CASE("fake flatness holds with one sign on every chart") {
    auto [A, B] = kz_connection();
    FakeFlatReport r1 = fake_flatness(A, B);
    CHECK(r1.pass());

    AlgForm Ap = pullback_phi(A), Bp = pullback_phi(B);
    CHECK(r1.convention() == "2F = dB");

    FakeFlatReport r2 = fake_flatness(Ap, Bp);
    CHECK(r2.pass());
    CHECK(r1.convention() == r2.convention());

    FakeFlatReport r3 = fake_flatness(restrict_triangle(Ap), restrict_triangle(Bp));
    CHECK(r3.pass());
    CHECK(r3.convention() == r1.convention());
}

TEST_CASE("restriction to the open triangle matches the reference forms") {
    auto [A, B] = kz_connection();
    AlgForm Ar = restrict_triangle(pullback_phi(A));
    AlgForm Br = restrict_triangle(pullback_phi(B));
    CHECK(Ar == restricted_A_reference());
    CHECK(Br == restricted_B_reference());
    // no dv or dw components survive
    for (auto& [S, e] : Ar.comps)
        for (int v : S) CHECK(v < 2);
}

TEST_CASE("two-flatness: M matches the reference blocks and dies in the quotient") {
    auto [A, B] = kz_connection();
    AlgForm Ap = pullback_phi(A), Bp = pullback_phi(B);
    TwoFlatReport rep = two_flatness(Ap, Bp);
    CHECK(rep.structure_ok);
    CHECK(rep.dB_zero);
    CHECK(rep.matches_reference);
    CHECK(rep.free_nonzero); // negative control: nonzero in the free algebra
    CHECK(rep.reduces_to_zero);
}
