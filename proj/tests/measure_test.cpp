#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "sublog/measure.hpp"

using namespace sublog;

namespace {

Measure make(std::initializer_list<Atom> atoms) { return Measure(std::vector<Atom>(atoms)); }

Measure random_measure(std::mt19937_64& rng, int n, double r_lo = 0.3, double r_hi = 50.0) {
    std::uniform_real_distribution<double> logr(std::log(r_lo), std::log(r_hi));
    std::uniform_real_distribution<double> ang(0.0, kTwoPi);
    std::uniform_real_distribution<double> mass(0.1, 3.0);
    std::vector<Atom> atoms;
    for (int i = 0; i < n; ++i) {
        double r = std::exp(logr(rng));
        double t = ang(rng);
        atoms.push_back({Complex(r * std::cos(t), r * std::sin(t)), mass(rng)});
    }
    return Measure(std::move(atoms));
}

}  // namespace

TEST_CASE("canonicalize merges and sorts") {
    Measure merged = make({{Complex(2, 0), 1.0}, {Complex(2, 0), 0.5}}).canonicalized();
    REQUIRE(merged.size() == 1);
    CHECK(merged.atoms()[0].position == Complex(2, 0));
    CHECK(merged.atoms()[0].mass == 1.5);

    CHECK(Measure().canonicalized().empty());

    Measure sorted = make({{Complex(3, 0), 1.0}, {Complex(2, 0), 1.0}}).canonicalized();
    REQUIRE(sorted.size() == 2);
    CHECK(sorted.atoms()[0].position == Complex(2, 0));
    CHECK(sorted.atoms()[1].position == Complex(3, 0));

    CHECK_THROWS_AS(make({{Complex(1, 0), 0.0}}), std::invalid_argument);
    CHECK_THROWS_AS(make({{Complex(1, 0), -1.0}}), std::invalid_argument);
}

TEST_CASE("total_mass") {
    CHECK(make({{Complex(2, 0), 1.0}, {Complex(4, 0), 0.5}}).total_mass() == 1.5);
    CHECK(Measure().total_mass() == 0.0);
    std::vector<Atom> forty;
    for (int i = 0; i < 40; ++i) forty.push_back({Complex(i + 1, i), 1.0});
    CHECK(Measure(forty).total_mass() == doctest::Approx(40.0).epsilon(1e-12));
}

TEST_CASE("restrict splits cleanly against a region") {
    Measure m = make({{Complex(2, 0), 1.0}, {Complex(5, 0), 1.0}});
    Region ann{AnnulusRegion{Complex(0, 0), 1.0, 4.0}};
    Measure in = restrict_to(m, ann);
    REQUIRE(in.size() == 1);
    CHECK(in.atoms()[0].position == Complex(2, 0));

    // atom exactly on the outer circle counts as inside under the closed rule
    Measure edge = make({{Complex(0, 4), 1.0}});
    CHECK(restrict_to(edge, ann).size() == 1);

    Region plane{Disk{Complex(0, 0), 1e300}};
    CHECK(same_atoms(restrict_to(m, plane), m));

    std::mt19937_64 rng(21);
    for (int rep = 0; rep < 50; ++rep) {
        Measure r = random_measure(rng, 17);
        Region d{Disk{Complex(1, -1), 10.0}};
        Measure inside = restrict_to(r, d);
        Measure outside = restrict_outside(r, d);
        // The wide accumulator makes the reunited total exact; summing the
        // two already-rounded part totals in double can be one ulp off.
        CHECK(concat(inside, outside).total_mass() == r.total_mass());
        CHECK(inside.total_mass() + outside.total_mass() ==
              doctest::Approx(r.total_mass()).epsilon(1e-15));
        CHECK(same_atoms(concat(inside, outside).canonicalized(), r.canonicalized()));
    }
}

TEST_CASE("split_at_quantile follows the infimum-cut rule") {
    Measure m = make({{Complex(0, 0), 1.0}, {Complex(1, 0), 1.0}, {Complex(2, 0), 1.0}});

    QuantileSplit s2 = split_at_quantile(m, Axis::Horizontal, 2.0);
    CHECK(s2.cut == 1.0);
    CHECK(s2.lower.total_mass() == 2.0);
    REQUIRE(s2.upper.size() == 1);
    CHECK(s2.upper.atoms()[0].position == Complex(2, 0));

    QuantileSplit s15 = split_at_quantile(m, Axis::Horizontal, 1.5);
    CHECK(s15.cut == 1.0);
    CHECK(s15.lower.total_mass() == 1.5);
    // atom on the cut split in two halves, same position on both sides
    REQUIRE(s15.upper.size() == 2);
    CHECK(s15.upper.atoms()[0].position == Complex(1, 0));
    CHECK(s15.upper.atoms()[0].mass == 0.5);

    Measure lump = make({{Complex(0, 0), 2.0}});
    QuantileSplit s1 = split_at_quantile(lump, Axis::Horizontal, 1.0);
    CHECK(s1.cut == 0.0);
    CHECK(s1.lower.total_mass() == 1.0);
    CHECK(s1.upper.total_mass() == 1.0);
    CHECK(s1.lower.atoms()[0].position == s1.upper.atoms()[0].position);

    CHECK_THROWS_AS(split_at_quantile(m, Axis::Horizontal, 3.5), std::invalid_argument);

    std::mt19937_64 rng(5);
    for (int rep = 0; rep < 100; ++rep) {
        Measure r = random_measure(rng, 11);
        double target = r.total_mass() * std::uniform_real_distribution<double>(0.05, 0.95)(rng);
        Axis ax = (rep % 2 == 0) ? Axis::Horizontal : Axis::Vertical;
        QuantileSplit s = split_at_quantile(r, ax, target);
        CHECK(std::abs(s.lower.total_mass() - target) <= 1e-12 * r.total_mass());
        CHECK(same_atoms(concat(s.lower, s.upper).canonicalized(), r.canonicalized()));
    }
}

TEST_CASE("split_at_radial_quantile consumes circle atoms in angle order") {
    // three unit atoms on the same circle; target 1.5 must take the angle-0
    // atom whole and half of the next one counterclockwise
    Measure circ = make({{Complex(2, 0), 1.0}, {Complex(-2, 0), 1.0}, {Complex(0, 2), 1.0}});
    QuantileSplit s = split_at_radial_quantile(circ, 1.5);
    CHECK(s.cut == 2.0);
    CHECK(s.lower.total_mass() == 1.5);
    Measure low = s.lower.canonicalized();
    REQUIRE(low.size() == 2);
    CHECK(low.atoms()[0].position == Complex(2, 0));
    CHECK(low.atoms()[0].mass == 1.0);
    CHECK(low.atoms()[1].position == Complex(0, 2));
    CHECK(low.atoms()[1].mass == 0.5);
}

TEST_CASE("discretize_radial_density conserves ring masses") {
    Measure ring = discretize_radial_density({{5.0, 4.0}}, 8);
    REQUIRE(ring.size() == 8);
    for (const Atom& a : ring.atoms()) {
        CHECK(std::abs(a.position) == doctest::Approx(5.0).epsilon(1e-14));
        CHECK(a.mass == doctest::Approx(0.5).epsilon(1e-14));
    }
    CHECK(ring.total_mass() == 4.0);

    CHECK(discretize_radial_density({}, 8).empty());

    Measure two = discretize_radial_density({{2.0, 2.0}, {7.0, 3.0}}, 5);
    CHECK(two.total_mass() == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("generic origin shift dodges atom lines and circles") {
    // collinear integer atoms: any point off the real axis works, and the
    // picked point must also miss every perpendicular bisector
    std::vector<Atom> collinear;
    for (int k = 1; k <= 12; ++k) collinear.push_back({Complex(k, 0), 1.0});
    Measure line(collinear);
    CHECK_FALSE(verify_generic_origin(line, Complex(0, 0)));
    CHECK(verify_generic_origin(line, Complex(0.3, 0.4)));

    Complex z = generic_origin_shift(line, 0.5, 99);
    CHECK(std::abs(z) < 0.5);
    CHECK(verify_generic_origin(line, z));
    CHECK(z == generic_origin_shift(line, 0.5, 99));  // deterministic in the seed

    Measure pm = make({{Complex(1, 0), 1.0}, {Complex(-1, 0), 1.0}});
    Complex z2 = generic_origin_shift(pm, 0.5, 7);
    CHECK(z2.imag() != 0.0);  // the joining line is the real axis
    CHECK(z2.real() != 0.0);  // the bisector is the imaginary axis
    CHECK(verify_generic_origin(pm, z2));

    Measure single = make({{Complex(3, 1), 2.0}});
    CHECK(verify_generic_origin(single, generic_origin_shift(single, 0.5, 1)));

    std::mt19937_64 rng(17);
    for (int rep = 0; rep < 30; ++rep) {
        Measure r = random_measure(rng, 9);
        Complex s = generic_origin_shift(r, 0.5, 1000 + rep);
        CHECK(verify_generic_origin(r, s));
    }
}

TEST_CASE("translate moves positions only") {
    Measure m = make({{Complex(2, 1), 1.5}, {Complex(-3, 0), 0.5}});
    Measure t = translate(m, Complex(1, 1));
    REQUIRE(t.size() == 2);
    CHECK(t.atoms()[0].position == Complex(1, 0));
    CHECK(t.atoms()[1].position == Complex(-4, -1));
    CHECK(t.total_mass() == m.total_mass());
}
