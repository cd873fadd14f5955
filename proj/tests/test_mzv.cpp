#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <thread>

#include "dk2/mzv.hpp"

using namespace dk2;

TEST_CASE("zeta(2) and zeta(3) against independent oracles") {
    const double pi = std::numbers::pi;
    // closed form pi^2/6 as cross-oracle
    CHECK(std::abs(mzv_eval(MZVIndex{2}, 1e-10) - pi * pi / 6.0) < 1e-10);
    // truncated nested summation with tail bound as the primary oracle
    auto [v2, b2] = mzv_direct_sum(MZVIndex{2}, 2000000);
    CHECK(std::abs(mzv_eval(MZVIndex{2}, 1e-10) - v2) < b2 + 1e-10);
    auto [v3, b3] = mzv_direct_sum(MZVIndex{3}, 200000);
    CHECK(std::abs(mzv_eval(MZVIndex{3}, 1e-10) - v3) < b3 + 1e-10);
    CHECK(mzv_eval(MZVIndex{2}) == doctest::Approx(1.6449340668482264).epsilon(1e-12));
    CHECK(mzv_eval(MZVIndex{3}) == doctest::Approx(1.2020569031595943).epsilon(1e-12));
}

TEST_CASE("Euler identity zeta(2,1) = zeta(3) numerically") {
    double lhs = mzv_eval(MZVIndex{2, 1}, 1e-10);
    double rhs = mzv_eval(MZVIndex{3}, 1e-10);
    CHECK(std::abs(lhs - rhs) < 2e-10);
    // both sides independently by truncated summation
    auto [d21, b21] = mzv_direct_sum(MZVIndex{2, 1}, 1000000);
    CHECK(std::abs(lhs - d21) < b21 + 1e-10);
}

TEST_CASE("direct-sum oracle agrees at depth > 1") {
    for (auto idx : {MZVIndex{2, 2}, MZVIndex{3, 1}, MZVIndex{2, 1, 1}, MZVIndex{4}}) {
        auto [v, b] = mzv_direct_sum(idx, 300000);
        CHECK(std::abs(mzv_eval(idx, 1e-10) - v) < b + 1e-9);
    }
}

TEST_CASE("tail bound is sound: doubling the cutoff moves less than the bound") {
    for (auto idx : {MZVIndex{2}, MZVIndex{2, 1}, MZVIndex{3, 1, 2}}) {
        auto [v1, b1] = mzv_direct_sum(idx, 100000);
        auto [v2, b2] = mzv_direct_sum(idx, 200000);
        CHECK(std::abs(v2 - v1) < b1);
        CHECK(b2 < b1);
    }
}

TEST_CASE("certified bound covers the defect against the closed form") {
    const double pi = std::numbers::pi;
    auto [v, bound] = mzv_eval_with_bound(MZVIndex{2}, 1e-10);
    CHECK(bound <= 1e-10);
    CHECK(std::abs(v - pi * pi / 6.0) < bound);
    auto [v4, bound4] = mzv_eval_with_bound(MZVIndex{4}, 1e-10);
    CHECK(std::abs(v4 - pi * pi * pi * pi / 90.0) < bound4);
}

TEST_CASE("weight-four closed forms") {
    const double p4 = std::pow(std::numbers::pi, 4);
    CHECK(std::abs(mzv_eval(MZVIndex{3, 1}) - p4 / 360.0) < 1e-12);
    CHECK(std::abs(mzv_eval(MZVIndex{2, 2}) - p4 / 120.0) < 1e-12);
    CHECK(std::abs(mzv_eval(MZVIndex{2, 1, 1}) - p4 / 90.0) < 1e-12);
}

TEST_CASE("divergent index rejected") {
    CHECK_THROWS_AS(mzv_eval(MZVIndex{1}, 1e-8), mzv_divergence_error);
    CHECK_THROWS_AS(mzv_eval(MZVIndex{1, 2}, 1e-8), mzv_divergence_error);
}

TEST_CASE("memo is deterministic under concurrent access") {
    std::vector<double> results(8, 0.0);
    std::vector<std::thread> threads;
    for (int t = 0; t < 8; ++t)
        threads.emplace_back([&results, t] { results[t] = mzv_eval(MZVIndex{3, 1}, 1e-10); });
    for (auto& th : threads) th.join();
    for (int t = 1; t < 8; ++t) CHECK(results[t] == results[0]);
}
