#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>
#include <random>

#include "dk2/coeff.hpp"
#include "dk2/mzv.hpp"

using namespace dk2;

namespace {

Coeff random_coeff(std::mt19937& rng) {
    std::uniform_int_distribution<int> nterms(0, 3), small(0, 2), num(-6, 6), den(1, 5);
    Coeff c;
    int t = nterms(rng);
    for (int i = 0; i < t; ++i) {
        CoeffMonomial m;
        m.ipi_pow = small(rng);
        m.lneps_pow = small(rng);
        if (small(rng) == 0) m.mzv_factors.push_back(MZVIndex{2});
        if (small(rng) == 1) m.mzv_factors.push_back(MZVIndex{2, 1});
        m.canonicalize();
        c += Coeff::monomial(m, Rational(num(rng), den(rng)));
    }
    return c;
}

} // namespace

TEST_CASE("ring axioms hold exactly on random inputs") {
    std::mt19937 rng(42);
    for (int rep = 0; rep < 200; ++rep) {
        Coeff a = random_coeff(rng), b = random_coeff(rng), c = random_coeff(rng);
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK((a + b) * c == a * c + b * c);
        CHECK(a + b == b + a);
        CHECK(a * b == b * a);
        CHECK((a - a).is_zero());
    }
}

TEST_CASE("monomial arithmetic") {
    CHECK(Coeff::ipi(1) * Coeff::ipi(1) == Coeff::ipi(2));
    Coeff z23 = Coeff::zeta(MZVIndex{2}) * Coeff::zeta(MZVIndex{3});
    REQUIRE(z23.terms.size() == 1);
    CHECK(z23.terms.begin()->first.mzv_factors == std::vector<MZVIndex>{MZVIndex{2}, MZVIndex{3}});
    Coeff x = Coeff::rational(Rational(3, 7)) * Coeff::lneps(2);
    CHECK((x + (-x)).is_zero());
}

TEST_CASE("zeta_coeff examples") {
    CHECK(zeta_coeff({1}, {1}, {0}) == -Coeff::zeta(MZVIndex{2}));
    CHECK(zeta_coeff({1}, {1}, {1}) == Coeff::zeta(MZVIndex{2}));
    CHECK(zeta_coeff({1}, {2}, {0}) == -Coeff::zeta(MZVIndex{2, 1}));
    CHECK_THROWS_AS(zeta_coeff({1, 2}, {1}, {0}), coeff_error);
    CHECK_THROWS_AS(zeta_coeff({1}, {1}, {2}), coeff_error);
}

TEST_CASE("zeta_coeff_full examples") {
    CHECK(zeta_coeff_full({1}, {1}, {0}, {0}) == -Coeff::zeta(MZVIndex{2}));
    CHECK(zeta_coeff_full({1}, {1}, {0}, {1}) == Coeff::zeta(MZVIndex{2}));
    CHECK_THROWS_AS(zeta_coeff_full({1}, {1}, {0}, {2}), coeff_error);
}

TEST_CASE("coeff_eval") {
    const double pi = std::numbers::pi;
    auto v = coeff_eval(-Coeff::zeta(MZVIndex{2}), std::nullopt);
    CHECK(std::abs(v.real() + pi * pi / 6.0) < 1e-9);
    CHECK(v.imag() == 0.0);

    // (ipi)^2/6 + zeta(2) evaluates to 0
    Coeff c = Coeff::ipi(2) * Coeff::rational(Rational(1, 6)) + Coeff::zeta(MZVIndex{2});
    CHECK(std::abs(coeff_eval(c, std::nullopt)) < 1e-9);

    CHECK(coeff_eval(Coeff::lneps(1), 0.1).real() == doctest::Approx(std::log(0.1)));
    CHECK_THROWS_AS(coeff_eval(Coeff::lneps(1), std::nullopt), coeff_error);
}

TEST_CASE("eval is a ring homomorphism within tolerance") {
    std::mt19937 rng(7);
    for (int rep = 0; rep < 50; ++rep) {
        Coeff a = random_coeff(rng), b = random_coeff(rng);
        auto va = coeff_eval(a, 0.3), vb = coeff_eval(b, 0.3);
        CHECK(std::abs(coeff_eval(a * b, 0.3) - va * vb) < 1e-6);
        CHECK(std::abs(coeff_eval(a + b, 0.3) - (va + vb)) < 1e-8);
    }
}

TEST_CASE("text round trip") {
    Coeff c = Coeff::rational(Rational(-1, 6)) * Coeff::ipi(2) +
              Coeff::rational(2) * Coeff::zeta(MZVIndex{2, 1}) * Coeff::lneps(3);
    CHECK(c.str() == "2*leps^3*z(2,1) - 1/6*(ipi)^2");
    CHECK(coeff_parse(c.str()) == c);

    CHECK(coeff_parse("0").is_zero());
    CHECK(coeff_parse("z(2)^2") == Coeff::zeta(MZVIndex{2}) * Coeff::zeta(MZVIndex{2}));

    std::mt19937 rng(99);
    for (int rep = 0; rep < 200; ++rep) {
        Coeff c2 = random_coeff(rng);
        CHECK(coeff_parse(c2.str()) == c2);
    }
}

TEST_CASE("split_lneps") {
    Coeff c = Coeff::lneps(2) * Coeff::ipi(1) + Coeff::rational(5);
    auto parts = c.split_lneps();
    REQUIRE(parts.size() == 2);
    CHECK(parts.at(0) == Coeff::rational(5));
    CHECK(parts.at(2) == Coeff::ipi(1));
}
