#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "sublog/partition.hpp"

using namespace sublog;

namespace {

// Random measure with even integer mass M and every point mass in (0,1),
// the generic-position regime the splitter is specified for.
Measure random_even_measure(std::mt19937_64& rng, int M, LogRectangle& rect_out) {
    std::uniform_real_distribution<double> side(0.6, 4.0);
    double W = side(rng);
    double H = std::min(side(rng), 6.0);
    rect_out = LogRectangle{0.0, W, 0.0, H};

    int count = std::max(2 * M, 8);
    std::uniform_real_distribution<double> raw(0.1, 1.0);
    std::vector<double> u(count);
    double total = 0.0;
    for (double& x : u) total += (x = raw(rng));
    std::uniform_real_distribution<double> px(0.0, W), py(0.0, H);
    std::vector<Atom> atoms;
    for (int i = 0; i < count; ++i)
        atoms.push_back({Complex(px(rng), py(rng)), u[i] * M / total});
    // rescaling drifts by an ulp or two; pin the total back to M exactly
    Measure m(atoms);
    double err = M - m.total_mass();
    atoms.back().mass += err;
    return Measure(atoms);
}

}  // namespace

TEST_CASE("four-atom square cuts at the feasible-interval midpoint") {
    LogRectangle root{0.0, 1.0, 0.0, 1.0};
    Measure nu(std::vector<Atom>{{Complex(0.1, 0.1), 1.0},
                                 {Complex(0.2, 0.2), 1.0},
                                 {Complex(0.8, 0.8), 1.0},
                                 {Complex(0.9, 0.9), 1.0}});
    auto pieces = partition_mass_two(root, nu);
    REQUIRE(pieces.size() == 2);
    // feasible cut interval (0.2, 0.8) meets the middle third in [1/3, 2/3];
    // its midpoint is 0.5
    CHECK(pieces[0].rect.sigma_max == 0.5);
    CHECK(pieces[1].rect.sigma_min == 0.5);
    CHECK(pieces[0].nu.total_mass() == 2.0);
    CHECK(pieces[1].nu.total_mass() == 2.0);
    CHECK(pieces[0].middle_third_ok);

    auto report = verify_partition(pieces, root, nu);
    CHECK(report.all_pass());
    CHECK(report.middle_third_fraction == 1.0);
}

TEST_CASE("mass-2 measure is already a piece") {
    LogRectangle root{1.0, 3.0, 0.0, 2.0};
    Measure nu(std::vector<Atom>{{Complex(2.0, 1.0), 2.0}});
    auto pieces = partition_mass_two(root, nu);
    REQUIRE(pieces.size() == 1);
    CHECK(pieces[0].depth == 0);
    CHECK(same_atoms(pieces[0].nu, nu));
    CHECK(verify_partition(pieces, root, nu).all_pass());
}

TEST_CASE("mass-4 point atom splits into two stacked pieces") {
    LogRectangle root{0.0, 1.0, 0.0, 1.0};
    Measure nu(std::vector<Atom>{{Complex(0.5, 0.5), 4.0}});
    auto pieces = partition_mass_two(root, nu);
    REQUIRE(pieces.size() == 2);
    CHECK(pieces[0].nu.total_mass() == 2.0);
    CHECK(pieces[1].nu.total_mass() == 2.0);
    CHECK(pieces[0].nu.atoms()[0].position == pieces[1].nu.atoms()[0].position);
    // hulls degenerate to the shared point: interiors empty, still disjoint
    CHECK(verify_partition(pieces, root, nu).all_pass());
}

TEST_CASE("input validation") {
    LogRectangle root{0.0, 1.0, 0.0, 1.0};
    Measure odd(std::vector<Atom>{{Complex(0.5, 0.5), 3.0}});
    CHECK_THROWS_AS(partition_mass_two(root, odd), std::invalid_argument);
    Measure small(std::vector<Atom>{{Complex(0.5, 0.5), 1.0}});
    CHECK_THROWS_AS(partition_mass_two(root, small), std::invalid_argument);
    Measure outside(std::vector<Atom>{{Complex(2.5, 0.5), 2.0}});
    CHECK_THROWS_AS(partition_mass_two(root, outside), std::invalid_argument);
    CHECK_THROWS_AS((LogRectangle{1.0, 0.0, 0.0, 1.0}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((LogRectangle{0.0, 1.0, 0.0, 7.0}.validate()), std::invalid_argument);
}

TEST_CASE("random even-mass measures satisfy all five properties") {
    std::mt19937_64 rng(20240901);
    std::uniform_int_distribution<int> mass_pick(2, 20);
    for (int rep = 0; rep < 50; ++rep) {
        int M = 2 * mass_pick(rng);
        LogRectangle root;
        Measure nu = random_even_measure(rng, M, root);
        auto pieces = partition_mass_two(root, nu);
        CHECK(pieces.size() == (std::size_t)(M / 2));
        auto report = verify_partition(pieces, root, nu, 999 + rep, 4000);
        CHECK(report.all_pass());
        if (!report.all_pass()) MESSAGE(report.summary());
        // No lower bound on middle_third_fraction here: with atomic
        // measures a cut level can be pinned at an atom outside the middle
        // third on every even quantile, so forced cuts are unavoidable and
        // the fraction is diagnostic only. The shape guarantees checked by
        // all_pass() hold regardless.
        CHECK(report.middle_third_fraction >= 0.0);
        CHECK(report.middle_third_fraction <= 1.0);
    }
}

TEST_CASE("heavy point atom peels into mass-2 boxes around the point") {
    LogRectangle root{0.0, 4.0, 0.0, 2.0};
    Measure nu(std::vector<Atom>{{Complex(3.7, 0.2), 6.0}});
    auto pieces = partition_mass_two(root, nu);
    REQUIRE(pieces.size() == 3);
    for (const PartitionPiece& p : pieces) {
        CHECK(p.nu.total_mass() == 2.0);
        CHECK(p.rect.short_side() > 0.0);
        CHECK(p.rect.long_side() <= 3.0 * p.rect.short_side() * (1.0 + 1e-9));
        CHECK(p.rect.contains(Complex(3.7, 0.2), 1e-12));
    }
    CHECK(verify_partition(pieces, root, nu).all_pass());
}

TEST_CASE("determinism: identical input, identical pieces") {
    std::mt19937_64 rng(5);
    LogRectangle root;
    Measure nu = random_even_measure(rng, 16, root);
    auto a = partition_mass_two(root, nu);
    auto b = partition_mass_two(root, nu);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].rect.sigma_min == b[i].rect.sigma_min);
        CHECK(a[i].rect.t_max == b[i].rect.t_max);
        CHECK(same_atoms(a[i].nu, b[i].nu));
        CHECK(a[i].depth == b[i].depth);
    }
}

TEST_CASE("negative control: five rectangles sharing a point fail the cover check") {
    LogRectangle root{0.0, 1.0, 0.0, 1.0};
    std::vector<PartitionPiece> pieces;
    std::vector<Atom> all;
    for (int i = 0; i < 5; ++i) {
        double pad = 0.02 * i;
        LogRectangle r{0.05 + pad, 0.95 - pad, 0.05 + pad, 0.95 - pad};
        Atom a{Complex(0.3 + 0.01 * i, 0.4), 1.0};
        Atom b{Complex(0.7 - 0.01 * i, 0.6), 1.0};
        pieces.push_back({r, Measure({a, b}), 1, true});
        all.push_back(a);
        all.push_back(b);
    }
    auto report = verify_partition(pieces, root, Measure(all));
    CHECK_FALSE(report.cover_multiplicity.pass);
    CHECK_FALSE(report.all_pass());
}

TEST_CASE("convex hull helpers") {
    std::vector<Complex> pts{{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}};
    auto hull = convex_hull(pts);
    CHECK(hull.size() == 4);
    CHECK(polygon_area(hull) == doctest::Approx(1.0).epsilon(1e-14));

    auto square = convex_hull({{0, 0}, {2, 0}, {2, 2}, {0, 2}});
    auto inner = convex_hull({{0.5, 0.5}, {1.5, 0.5}, {1.0, 1.5}});
    auto far_off = convex_hull({{5, 5}, {6, 5}, {6, 6}});
    CHECK(hull_interiors_intersect(square, inner, 1e-12));
    CHECK_FALSE(hull_interiors_intersect(square, far_off, 1e-12));
    // shared edge only: interiors still disjoint
    auto right = convex_hull({{2, 0}, {4, 0}, {4, 2}, {2, 2}});
    CHECK_FALSE(hull_interiors_intersect(square, right, 1e-12));
}
