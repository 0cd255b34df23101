#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <utility>
#include <vector>

#include "doctest.h"
#include "sublog/counterexample.hpp"

using namespace sublog;

namespace {

UPhiSpec log_spec(int count) {
    return UPhiSpec{SlowlyVarying::log_e_r(), 2.0, count};
}

}  // namespace

TEST_CASE("radii follow the multiplicative recurrence") {
    UPhiSpec doubling{SlowlyVarying::constant(2.0), 2.0, 4};
    const std::vector<double> r = u_phi_radii(doubling);
    REQUIRE(r.size() == 4);
    CHECK(r[0] == 2.0);
    CHECK(r[1] == 4.0);
    CHECK(r[2] == 8.0);
    CHECK(r[3] == 16.0);

    doubling.count = 1;
    CHECK(u_phi_radii(doubling) == std::vector<double>{2.0});

    // r_{k+1} = r_k psi(r_k) checked against a manual fold.
    const UPhiSpec spec = log_spec(10);
    const std::vector<double> rl = u_phi_radii(spec);
    double cur = 2.0;
    for (double rk : rl) {
        CHECK(rk == doctest::Approx(cur).epsilon(1e-15));
        cur *= spec.phi(cur);
    }
}

TEST_CASE("radii input validation") {
    CHECK_THROWS_AS(u_phi_radii(UPhiSpec{SlowlyVarying::constant(2.0), 2.0, 0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(u_phi_radii(UPhiSpec{SlowlyVarying::constant(2.0), 1.0, 3}),
                    std::invalid_argument);
    // exp(sqrt(log r)) compounds super-geometrically; 64 steps overflow.
    CHECK_THROWS_AS(u_phi_radii(UPhiSpec{SlowlyVarying::exp_sqrt_log(), 2.0, 64}),
                    std::domain_error);
}

TEST_CASE("the measure puts mass 1/2 at each radius") {
    const Measure u = build_u_phi(log_spec(10));
    const std::vector<double> r = u_phi_radii(log_spec(10));
    REQUIRE(u.size() == 10);
    for (std::size_t i = 0; i < u.size(); ++i) {
        CHECK(u.atoms()[i].mass == 0.5);
        CHECK(u.atoms()[i].position.imag() == 0.0);
        CHECK(u.atoms()[i].position.real() == r[i]);
    }
    CHECK(u.total_mass() == doctest::Approx(5.0).epsilon(1e-15));
}

TEST_CASE("doubling radii sit exactly at the density threshold") {
    // With phi = 2 and psi = phi^2 = 4 every annulus (r, 4r] holds exactly
    // two radii, i.e. mass exactly 1.
    const Measure u = build_u_phi(UPhiSpec{SlowlyVarying::constant(2.0), 2.0, 8});
    for (double r : {2.0, 4.0, 8.0, 16.0, 32.0}) {
        const double in_annulus = counting_function(u, 4.0 * r) - counting_function(u, r);
        CHECK(in_annulus == 1.0);
    }
}

TEST_CASE("rounding adversary takes every second radius") {
    const std::vector<double> r = u_phi_radii(UPhiSpec{SlowlyVarying::constant(2.0), 2.0, 6});
    const ZeroSet f = best_rounding_zero_set(r);
    REQUIRE(f.size() == 3);
    CHECK(f.zeros()[0].position == Complex(4.0, 0.0));
    CHECK(f.zeros()[1].position == Complex(16.0, 0.0));
    CHECK(f.zeros()[2].position == Complex(64.0, 0.0));
    for (const Zero& z : f.zeros()) CHECK(z.multiplicity == 1);

    CHECK(best_rounding_zero_set({}).empty());
    CHECK(best_rounding_zero_set({2.0}).empty());
}

TEST_CASE("counting gap of the adversary stays on {0, 1/2}") {
    const Measure u = build_u_phi(log_spec(10));
    const ZeroSet f = best_rounding_zero_set(u_phi_radii(log_spec(10)));
    const GapReport rep = counting_gap_scan(u, f, 0.0, {2.5, 10.0, 100.0, 1e4, 1e6});
    CHECK(rep.violations.empty());
    CHECK(rep.lattice_ok);
    CHECK(rep.half_step_signature);
    for (std::size_t i = 0; i < rep.r.size(); ++i) {
        const double diff = rep.n_u[i] - rep.n_f[i];
        CHECK((diff == 0.0 || diff == 0.5));
    }
}

TEST_CASE("shifted-plan gap alpha = 0.3 still fits in the half-unit corridor") {
    const Measure u = build_u_phi(log_spec(10));
    const ZeroSet f = best_rounding_zero_set(u_phi_radii(log_spec(10)));
    const GapReport rep = counting_gap_scan(u, f, 0.3, {3.0, 30.0, 3000.0});
    // |{0, 1/2} - 0.3| <= 0.3 < 1/2, so the corridor still holds.
    CHECK(rep.violations.empty());
    CHECK(rep.half_step_signature);
}

TEST_CASE("no zeros at all violates the corridor immediately") {
    const Measure u = build_u_phi(log_spec(10));
    const std::vector<double> r = u_phi_radii(log_spec(10));
    const GapReport rep = counting_gap_scan(u, ZeroSet(), 0.0, {});
    REQUIRE(!rep.violations.empty());
    // n_u reaches 1 at the second radius and never comes back down.
    CHECK(rep.violations.front() == r[1]);
    CHECK(!rep.half_step_signature);
    CHECK(rep.lattice_ok);
}

TEST_CASE("overshooting zeros violate on the other side") {
    const Measure u = build_u_phi(log_spec(10));
    // materialize first: the range-for would outlive the temporary's buffer
    const ZeroSet matched = best_rounding_zero_set(u_phi_radii(log_spec(10)));
    std::vector<Zero> zs;
    for (const Zero& z : matched.zeros())
        zs.push_back(Zero{z.position, 2, z.source});
    const GapReport rep = counting_gap_scan(u, ZeroSet(std::move(zs)), 0.0, {});
    REQUIRE(!rep.violations.empty());
    CHECK(rep.violations.front() == u_phi_radii(log_spec(10))[1]);
    CHECK(rep.lattice_ok);
    CHECK(!rep.half_step_signature);
}

TEST_CASE("gap scan rejects alpha outside [0, 1)") {
    const Measure u = build_u_phi(log_spec(3));
    CHECK_THROWS_AS(counting_gap_scan(u, ZeroSet(), -0.1, {}), std::invalid_argument);
    CHECK_THROWS_AS(counting_gap_scan(u, ZeroSet(), 1.0, {}), std::invalid_argument);
}

TEST_CASE("integrated gap vanishes for an exactly matching zero set") {
    // Doubling every mass gives an integer measure a zero set can match
    // radius for radius, so every probe gap is identically zero.
    const std::vector<double> r = u_phi_radii(log_spec(8));
    std::vector<Atom> atoms;
    std::vector<Zero> zeros;
    for (double rk : r) {
        atoms.push_back(Atom{Complex(rk, 0.0), 1.0});
        zeros.push_back(Zero{Complex(rk, 0.0), 1, ZeroSource::Pair});
    }
    const Measure u2((std::vector<Atom>(atoms)));
    const ZeroSet f2((std::vector<Zero>(zeros)));
    const SlowlyVarying psi = SlowlyVarying::log_e_r();
    const auto res = n_gap_growth(u2, f2, 0.0, psi, {{r[1], r[3]}, {r[3], r[5]}});
    for (const auto& p : res) {
        CHECK(p.gap_t == 0.0);
        CHECK(p.gap_T == 0.0);
        CHECK(p.threshold > 0.0);
        CHECK(!p.activated);
    }
}

TEST_CASE("integrated gap of the adversary grows ~ (1/2) log psi per cycle") {
    const SlowlyVarying psi = SlowlyVarying::log_e_r();
    const Measure u = build_u_phi(log_spec(10));
    const std::vector<double> r = u_phi_radii(log_spec(10));
    const ZeroSet f = best_rounding_zero_set(r);
    std::vector<std::pair<double, double>> probes;
    for (std::size_t k = 1; k + 2 < r.size(); k += 2) probes.push_back({r[k], r[k + 2]});
    const auto res = n_gap_growth(u, f, 0.0, psi, probes, 0.1);
    REQUIRE(res.size() == 4);
    for (std::size_t i = 0; i < res.size(); ++i) {
        CHECK(res[i].activated);
        CHECK(res[i].gap_T > res[i].gap_t);
        // The N-gap is flat between a zero and the next atom, so the scan
        // value at r_{2k+1} serves as both gap_T of one probe and gap_t of
        // the next.
        if (i > 0) CHECK(res[i].gap_t == res[i - 1].gap_T);
        const double normalized = res[i].gap_T / psi.log_psi(res[i].T_star);
        CHECK(normalized > 0.4);
        CHECK(normalized < 1.6);
    }
    // Growth, not saturation: the normalized gap keeps climbing.
    CHECK(res.back().gap_T / psi.log_psi(res.back().T_star) >
          2.0 * res.front().gap_T / psi.log_psi(res.front().T_star));
}

TEST_CASE("probe validation") {
    const Measure u = build_u_phi(log_spec(3));
    const ZeroSet f;
    const SlowlyVarying psi = SlowlyVarying::log_e_r();
    CHECK_THROWS_AS(n_gap_growth(u, f, 0.0, psi, {{10.0, 5.0}}), std::invalid_argument);
    CHECK_THROWS_AS(n_gap_growth(u, f, 0.0, psi, {{5.0, 10.0}}, 0.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(n_gap_growth(u, f, 0.0, psi, {{5.0, 10.0}}, 0.5),
                    std::invalid_argument);
}

TEST_CASE("disk error of the adversary pair, pinned values") {
    // I(16) cross-checked against an independent 4e6-sample Monte Carlo
    // implementation: 364.50 +- 0.06 (alpha 0) and 197.62 +- 0.05
    // (alpha 0.3).
    const SlowlyVarying psi = SlowlyVarying::log_e_r();
    const Measure u = build_u_phi(log_spec(10));
    const ZeroSet f = best_rounding_zero_set(u_phi_radii(log_spec(10)));
    const ErrorReport r0 = sharpness_ratio(u, f, 0.0, psi, {16.0, 32.0, 64.0});
    REQUIRE(r0.I.size() == 3);
    CHECK(r0.I[0] == doctest::Approx(364.41).epsilon(0.01));
    CHECK(r0.I[1] == doctest::Approx(2269.07).epsilon(0.01));
    CHECK(r0.I[2] == doctest::Approx(10137.47).epsilon(0.01));
    for (double q : r0.quad_error) CHECK(q >= 0.0);
    for (double v : r0.ratio) CHECK(v > 0.0);
    CHECK(r0.norm[0] == doctest::Approx(16.0 * 16.0 * psi.log_psi(16.0)).epsilon(1e-12));

    const ErrorReport r3 = sharpness_ratio(u, f, 0.3, psi, {16.0});
    CHECK(r3.I[0] == doctest::Approx(197.56).epsilon(0.01));
}

TEST_CASE("disk error agrees with its own Monte Carlo estimate") {
    const SlowlyVarying psi = SlowlyVarying::log_e_r();
    const Measure u = build_u_phi(log_spec(10));
    const ZeroSet f = best_rounding_zero_set(u_phi_radii(log_spec(10)));
    const ErrorReport rep = sharpness_ratio(u, f, 0.3, psi, {16.0});
    const MonteCarloL1 mc = l1_disk_error_mc(u, f, 16.0, 400000, 7, 0.3);
    CHECK(std::abs(rep.I[0] - mc.value) < std::max(0.01 * rep.I[0], 4.0 * mc.std_error));
}

TEST_CASE("matching sources integrate to exactly zero") {
    const ZeroSet f = best_rounding_zero_set(u_phi_radii(log_spec(10)));
    const SlowlyVarying psi = SlowlyVarying::log_e_r();
    const ErrorReport rep = sharpness_ratio(f.as_measure(), f, 0.0, psi, {16.0, 256.0});
    CHECK(rep.I[0] == 0.0);
    CHECK(rep.I[1] == 0.0);
}

TEST_CASE("sharpness grid validation") {
    const Measure u = build_u_phi(log_spec(3));
    const SlowlyVarying psi = SlowlyVarying::log_e_r();
    CHECK_THROWS_AS(sharpness_ratio(u, ZeroSet(), 0.0, psi, {}), std::invalid_argument);
    CHECK_THROWS_AS(sharpness_ratio(u, ZeroSet(), 0.0, psi, {32.0, 16.0}),
                    std::invalid_argument);
}

TEST_CASE("dropping the innermost atom rewrites the shifted problem") {
    const Measure u = build_u_phi(log_spec(6));
    const std::vector<double> r = u_phi_radii(log_spec(6));
    const Measure rest = drop_first_radius_atom(u);
    REQUIRE(rest.size() == 5);
    CHECK(rest.atoms()[0].position.real() == r[1]);
    CHECK(rest.total_mass() == doctest::Approx(2.5).epsilon(1e-15));
    CHECK_THROWS_AS(drop_first_radius_atom(Measure()), std::invalid_argument);

    // Duplicated first radius merges before the drop.
    const Measure dup(std::vector<Atom>{Atom{Complex(2.0, 0.0), 0.25},
                                        Atom{Complex(2.0, 0.0), 0.25},
                                        Atom{Complex(5.0, 0.0), 0.5}});
    const Measure after = drop_first_radius_atom(dup);
    REQUIRE(after.size() == 1);
    CHECK(after.atoms()[0].position.real() == 5.0);
}
