#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "sublog/atomize.hpp"

using namespace sublog;

namespace {

PartitionPiece piece_of(LogRectangle rect, std::vector<Atom> atoms) {
    return PartitionPiece{rect, Measure(std::move(atoms)), 0, true};
}

// First and second moments of a log-plane measure, straight fold.
Complex moment1(const Measure& m) {
    Complex s = 0.0;
    for (const Atom& a : m.atoms()) s += a.mass * a.position;
    return s;
}
Complex moment2(const Measure& m) {
    Complex s = 0.0;
    for (const Atom& a : m.atoms()) s += a.mass * a.position * a.position;
    return s;
}

}  // namespace

TEST_CASE("log coordinate transform") {
    Measure m(std::vector<Atom>{{Complex(std::exp(1.0), 0.0), 2.0}});
    Measure lm = to_log_coords(m);
    REQUIRE(lm.size() == 1);
    CHECK(lm.atoms()[0].position.real() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(lm.atoms()[0].position.imag() == 0.0);
    CHECK(lm.atoms()[0].mass == 2.0);

    Measure mi(std::vector<Atom>{{Complex(0.0, 1.0), 1.0}});
    CHECK(to_log_coords(mi).atoms()[0].position.imag() ==
          doctest::Approx(kTwoPi / 4).epsilon(1e-15));
    CHECK(to_log_coords(mi).atoms()[0].position.real() == 0.0);

    CHECK_THROWS_AS(to_log_coords(Measure(std::vector<Atom>{{Complex(0, 0), 1.0}})),
                    std::domain_error);

    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> re(-3.0, 3.0);
    for (int i = 0; i < 200; ++i) {
        Complex zeta = std::exp(Complex(re(rng), re(rng)));
        Measure one(std::vector<Atom>{{zeta, 1.0}});
        Complex back = from_log_point(to_log_coords(one).atoms()[0].position);
        CHECK(std::abs(back - zeta) <= 1e-14 * std::abs(zeta));
    }
}

TEST_CASE("double atom collapses to a double root") {
    Complex w0(1.3, 0.8);
    LogRectangle rect{1.0, 2.0, 0.5, 1.5};
    AtomPair p = atomize_pair(piece_of(rect, {{w0, 2.0}}));
    CHECK(std::abs(p.omega1 - w0) <= 1e-12);
    CHECK(std::abs(p.omega2 - w0) <= 1e-12);
    CHECK(std::abs(p.zeta1 - std::exp(w0)) <= 1e-12 * std::abs(std::exp(w0)));
}

TEST_CASE("two unit atoms are a fixed point") {
    LogRectangle rect{-0.5, 1.5, -0.5, 0.5};
    AtomPair p = atomize_pair(piece_of(rect, {{Complex(0, 0), 1.0}, {Complex(1, 0), 1.0}}));
    // quadratic x^2 - x = 0 solves exactly; order is lexicographic
    CHECK(std::abs(p.omega1) <= 1e-15);
    CHECK(std::abs(p.omega2 - Complex(1, 0)) <= 1e-15);
}

TEST_CASE("four half atoms at the unit-square corners merge to the center") {
    // S = 1+i, integral of w^2 is i, so the discriminant vanishes
    LogRectangle rect{0.0, 1.0, 0.0, 1.0};
    AtomPair p = atomize_pair(piece_of(rect, {{Complex(0, 0), 0.5},
                                              {Complex(0, 1), 0.5},
                                              {Complex(1, 0), 0.5},
                                              {Complex(1, 1), 0.5}}));
    Complex center(0.5, 0.5);
    CHECK(std::abs(p.omega1 - center) <= 1e-12);
    CHECK(std::abs(p.omega2 - center) <= 1e-12);
    CHECK(std::abs(p.omega_center - center) <= 1e-12);
}

TEST_CASE("moment matching and distance bounds on random pieces") {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> off(0.0, 1.0);
    for (int rep = 0; rep < 200; ++rep) {
        double s0 = 5.0 * off(rng), t0 = 3.0 * off(rng);
        double W = 0.2 + 2.0 * off(rng), H = 0.2 + 2.0 * off(rng);
        LogRectangle rect{s0, s0 + W, t0, t0 + H};
        int n = 2 + (int)(6 * off(rng));
        std::vector<Atom> atoms;
        std::vector<double> u(n);
        double tot = 0.0;
        for (double& x : u) tot += (x = 0.1 + off(rng));
        for (int i = 0; i < n; ++i)
            atoms.push_back({Complex(s0 + W * off(rng), t0 + H * off(rng)), 2.0 * u[i] / tot});
        Measure nu(atoms);
        AtomPair p = atomize_pair(piece_of(rect, atoms));

        Complex s_ref = moment1(nu), q_ref = moment2(nu);
        double scale1 = std::max(1.0, std::abs(s_ref));
        double scale2 = std::max(1.0, std::abs(q_ref));
        CHECK(std::abs(p.omega1 + p.omega2 - s_ref) <= 1e-10 * scale1);
        CHECK(std::abs(p.omega1 * p.omega1 + p.omega2 * p.omega2 - q_ref) <= 1e-10 * scale2);

        double d = rect.diameter();
        CHECK(p.d == d);
        CHECK(std::abs(p.omega1 - p.omega_center) <= d + 1e-12);
        CHECK(std::abs(p.omega2 - p.omega_center) <= d + 1e-12);
        for (const Atom& a : atoms) {
            CHECK(std::abs(a.position - p.omega1) <= 2 * d + 1e-12);
            CHECK(std::abs(a.position - p.omega2) <= 2 * d + 1e-12);
        }
        // lexicographic order pins the root labels
        CHECK((p.omega1.real() < p.omega2.real() ||
               (p.omega1.real() == p.omega2.real() && p.omega1.imag() <= p.omega2.imag())));
    }
}

TEST_CASE("mass must be 2") {
    LogRectangle rect{0.0, 1.0, 0.0, 1.0};
    CHECK_THROWS_AS(atomize_pair(piece_of(rect, {{Complex(0.5, 0.5), 1.0}})),
                    std::invalid_argument);
}

TEST_CASE("delta term vanishes when the pair is exact") {
    LogRectangle rect{0.0, 2.0, 0.0, 1.0};
    AtomPair lump = atomize_pair(piece_of(rect, {{Complex(1.0, 0.5), 2.0}}));
    AtomPair two = atomize_pair(piece_of(rect, {{Complex(0.2, 0.1), 1.0},
                                                {Complex(1.7, 0.9), 1.0}}));
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> coord(-40.0, 40.0);
    for (int i = 0; i < 100; ++i) {
        Complex z(coord(rng), coord(rng));
        auto d1 = delta_term(lump, z);
        auto d2 = delta_term(two, z);
        if (d1) CHECK(std::abs(*d1) <= 1e-10);
        if (d2) CHECK(std::abs(*d2) <= 1e-10);
    }
    // z = 0 kills every log term
    CHECK(*delta_term(two, Complex(0, 0)) == 0.0);
    // collision with a pair point is a condition, not an infinity
    CHECK_FALSE(delta_term(two, two.zeta1).has_value());
}

TEST_CASE("delta term decays along a far ray") {
    LogRectangle rect{1.0, 1.6, 0.3, 0.9};
    AtomPair p = atomize_pair(piece_of(rect, {{Complex(1.1, 0.4), 0.7},
                                              {Complex(1.5, 0.8), 0.6},
                                              {Complex(1.25, 0.6), 0.7}}));
    double start = 8.0 * std::exp(rect.sigma_max);
    double prev = 1e300;
    for (int k = 0; k < 8; ++k) {
        Complex z = std::polar(start * std::pow(2.0, k), 1.0);
        auto d = delta_term(p, z);
        REQUIRE(d.has_value());
        double cur = std::abs(*d);
        // moment matching leaves an O(1/|z|) remainder: doubling |z| must
        // roughly halve it (allow slack, require monotone fall)
        CHECK(cur <= 0.75 * prev + 1e-15);
        prev = cur;
    }
}
