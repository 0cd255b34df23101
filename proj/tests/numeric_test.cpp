#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "sublog/numeric.hpp"

using namespace sublog;

TEST_CASE("pairwise_sum basics") {
    CHECK(pairwise_sum({}) == 0.0);
    std::vector<double> one{3.5};
    CHECK(pairwise_sum(one) == 3.5);

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> xs(1777);
    for (double& x : xs) x = dist(rng);

    long double ref = 0.0L;
    for (double x : xs) ref += (long double)x;
    CHECK(std::abs(pairwise_sum(xs) - (double)ref) <= 1e-13 * xs.size());

    // fixed tree shape: same input gives the same bits
    CHECK(pairwise_sum(xs) == pairwise_sum(xs));
}

TEST_CASE("exact_sum survives catastrophic cancellation") {
    std::vector<double> xs{1e16, 1.0, -1e16};
    CHECK(exact_sum(xs) == 1.0);

    // interleaved large/small pairs that a double fold would lose
    std::vector<double> ys;
    for (int i = 0; i < 100; ++i) {
        ys.push_back(1e15 + i);
        ys.push_back(0.25);
        ys.push_back(-(1e15 + i));
    }
    CHECK(exact_sum(ys) == 25.0);
}

TEST_CASE("split_mass reassembles bitwise") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> mass(1e-6, 40.0);
    std::uniform_real_distribution<double> frac(0.0, 1.0);
    for (int i = 0; i < 2000; ++i) {
        double a = mass(rng);
        double want = a * frac(rng);
        MassSplit s = split_mass(a, want);
        CHECK(s.lo + s.hi == a);
        CHECK(s.lo >= 0.0);
        CHECK(s.hi >= 0.0);
        CHECK(std::abs(s.lo - want) <= 1e-12 * a + 1e-300);
    }
    CHECK(split_mass(2.0, 0.0).lo == 0.0);
    CHECK(split_mass(2.0, 2.0).hi == 0.0);
    CHECK(split_mass(2.0, 1.0).lo == 1.0);
}

TEST_CASE("angle01 lands in [0, 2pi)") {
    CHECK(angle01(Complex(1, 0)) == 0.0);
    CHECK(angle01(Complex(-1, 0)) == doctest::Approx(kTwoPi / 2).epsilon(1e-15));
    CHECK(angle01(Complex(0, -1)) == doctest::Approx(3 * kTwoPi / 4).epsilon(1e-15));
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> dist(-5.0, 5.0);
    for (int i = 0; i < 500; ++i) {
        Complex z(dist(rng), dist(rng));
        if (std::abs(z) == 0.0) continue;
        double a = angle01(z);
        CHECK(a >= 0.0);
        CHECK(a < kTwoPi);
    }
}
