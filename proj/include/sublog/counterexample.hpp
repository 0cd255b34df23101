#ifndef SUBLOG_COUNTEREXAMPLE_HPP
#define SUBLOG_COUNTEREXAMPLE_HPP

#include <utility>
#include <vector>

#include "sublog/measure.hpp"
#include "sublog/metrics.hpp"
#include "sublog/potential.hpp"
#include "sublog/slowly_varying.hpp"

namespace sublog {

/// The sparse radial family: mass-1/2 atoms at r_0, r_1, ... with
/// r_{k+1} = r_k * phi(r_k). Its annulus masses sit right at the density
/// threshold, which is what makes it the sharpness witness.
struct UPhiSpec {
    SlowlyVarying phi;
    double r0 = 2.0;
    int count = 1;  // number of radii emitted
};

/// The radii sequence; throws std::domain_error if phi(r) ever fails to
/// advance the sequence strictly.
std::vector<double> u_phi_radii(const UPhiSpec& spec);

/// Atoms of mass 1/2 at the (real, positive) radii.
Measure build_u_phi(const UPhiSpec& spec);

/// The near-optimal adversary zero set: simple zeros at every second
/// radius, starting with the second one. Any candidate doing better must
/// place its k-th zero inside [r_{2k-1}, r_{2k}], and this choice realizes
/// the resulting {0, 1/2} counting-gap pattern exactly.
ZeroSet best_rounding_zero_set(const std::vector<double>& radii);

/// Evaluates the counting gap n(r,u) - n(r,f) - alpha on the grid plus
/// every jump radius; records violations of the half-unit bound, whether
/// the gap stays on the half-integer lattice, and whether n_u - n_f only
/// takes the values {0, 1/2}.
GapReport counting_gap_scan(const Measure& u, const ZeroSet& f, double alpha,
                            const std::vector<double>& r_grid);

/// One probe pair (t*, T*) of the integrated-counting gap.
/// gap_* = |N(r,u) - N(r,f) - alpha log r|; threshold is the lower-bound
/// expression (1/2 - alpha - eps) log psi(t*). `activated` marks pairs
/// whose combined gaps already exceed the threshold, i.e. the window rules
/// out any approximant keeping both probes below eps log psi.
struct ProbeResult {
    double t_star = 0.0, T_star = 0.0;
    double gap_t = 0.0, gap_T = 0.0;
    double threshold = 0.0;
    bool activated = false;
};

std::vector<ProbeResult> n_gap_growth(const Measure& u, const ZeroSet& f, double alpha,
                                      const SlowlyVarying& psi,
                                      const std::vector<std::pair<double, double>>& probes,
                                      double epsilon = 0.1);

/// I_alpha(R) = integral over |z| < R of |u - log|f| - alpha log|z|| dA on
/// the given grid, against the R^2 log psi(R) normalization.
ErrorReport sharpness_ratio(const Measure& u, const ZeroSet& f, double alpha,
                            const SlowlyVarying& psi, const std::vector<double>& R_grid,
                            const QuadratureParams& quad = {});

/// Removes the atom at the smallest radius (the mass-1/2 term at the first
/// radius). Rewrites the alpha in [1/2, 1) problem as alpha - 1/2 for the
/// remaining measure.
Measure drop_first_radius_atom(const Measure& u);

}  // namespace sublog

#endif
