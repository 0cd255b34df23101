#ifndef SUBLOG_METRICS_HPP
#define SUBLOG_METRICS_HPP

#include <cstdint>
#include <vector>

#include "sublog/measure.hpp"
#include "sublog/potential.hpp"
#include "sublog/slowly_varying.hpp"

namespace sublog {

// ===== counting functions =====

/// Mass of the closed disk of radius r.
double counting_function(const Measure& m, double r);
double counting_function(const ZeroSet& f, double r);

/// N(r) = integral of n(t)/t from 0 to r, evaluated in closed form as
/// sum of mass * log(r / |a|) over atoms with |a| <= r. Throws
/// std::domain_error when mass sits at the origin.
double integrated_counting(const Measure& m, double r);
double integrated_counting(const ZeroSet& f, double r);

// ===== circle means and Jensen =====

struct CircleMeanResult {
    double value = 0.0;
    double error_bound = 0.0;  // a priori trapezoid bound, infinite when an
                               // atom sits on the circle
    int nodes_used = 0;
    bool converged = true;  // bound <= tol before the node cap
};

/// Mean of u over the circle |z| = r by the trapezoid rule (spectrally
/// accurate for this periodic integrand). Nodes double until the a priori
/// error bound drops below tol or the cap 2^22 is hit; the bound decays
/// like q^nodes with q the worst relative margin to an atom modulus.
CircleMeanResult circle_mean(const Measure& m, double r, int nodes = 4096,
                             double tol = 1e-8);
CircleMeanResult circle_mean(const ZeroSet& f, double r, int nodes = 4096,
                             double tol = 1e-8);

/// circle_mean(u, r) - N(r, m); the genus-0 kernel fixes u(0) = 0, so this
/// is the Jensen identity residual and should vanish to quadrature
/// accuracy.
double jensen_residual(const Measure& m, double r, int nodes = 4096);

// ===== L1 disk error =====

struct QuadratureParams {
    double rel_tol = 1e-3;       // target relative accuracy of the integral
    long long max_cells = 400000;  // refinement budget
    int initial_radial = 24;
    int initial_angular = 16;
};

struct L1Result {
    double value = 0.0;
    double error_bound = 0.0;
    bool converged = true;  // false: budget ran out, error_bound inflated
    long long cells = 0;
};

/// Integral over the disk |z| < R of |u(z) - log|f(z)| - alpha log|z||
/// against area measure, by adaptive polar-cell quadrature. Cells holding a
/// log singularity (atom, zero, or the origin when alpha != 0) are shrunk
/// until a closed-form bound of the singular contribution is below the cell
/// budget; they then contribute 0 with that bound as their error.
L1Result l1_disk_error(const Measure& m, const ZeroSet& f, double R,
                       const QuadratureParams& quad = {}, double alpha = 0.0);

/// Independent check of the same integral: plain Monte Carlo with `samples`
/// uniform draws from the disk. Returns the estimate and its standard
/// error.
struct MonteCarloL1 {
    double value = 0.0;
    double std_error = 0.0;
};
MonteCarloL1 l1_disk_error_mc(const Measure& m, const ZeroSet& f, double R,
                              long long samples, std::uint64_t seed,
                              double alpha = 0.0);

// ===== circle maxima =====

/// max of u on |z| = r: dense angular grid plus local parabolic refinement
/// of the best maxima. Empty measure gives 0.
double sup_on_circle(const Measure& m, double r, int nodes = 2048);

// ===== exceptional set =====

struct DensityResult {
    double density = 0.0;     // area fraction of the disk where the bound fails
    double half_width = 0.0;  // 95% binomial confidence half-width
    long long exceed = 0;
    long long total = 0;
};

/// Stratified Monte Carlo estimate of the area fraction of
/// {z in D_R : |u(z) - log|f(z)|| > K log psi(|z|)}. Points colliding with
/// a singularity count as exceeding (the difference blows up there).
DensityResult exceptional_set_density(const Measure& m, const ZeroSet& f, double K,
                                      const SlowlyVarying& psi, double R,
                                      long long samples, std::uint64_t seed);

// ===== reports =====

/// Sampled growth law I(R) vs R^2 log psi(R).
struct ErrorReport {
    std::vector<double> radii;
    std::vector<double> I;
    std::vector<double> norm;   // R^2 log psi(R)
    std::vector<double> ratio;  // I / norm
    std::vector<double> quad_error;
};

/// Counting-function gap scan results.
struct GapReport {
    std::vector<double> r;  // scan grid including all jump radii
    std::vector<double> n_u, n_f;
    std::vector<double> N_u, N_f;
    double alpha = 0.0;
    std::vector<double> violations;  // radii with |n_u - n_f - alpha| > 1/2
    bool lattice_ok = true;   // every n-gap lies on the half-integer lattice
    bool half_step_signature = true;  // n_u - n_f takes only values {0, 1/2}
};

}  // namespace sublog

#endif
