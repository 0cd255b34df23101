#ifndef SUBLOG_PARTITION_HPP
#define SUBLOG_PARTITION_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "sublog/measure.hpp"

namespace sublog {

/// Axis-aligned rectangle in log coordinates (sigma = log modulus,
/// t = angle). Height never exceeds one full turn.
struct LogRectangle {
    double sigma_min = 0.0, sigma_max = 0.0;
    double t_min = 0.0, t_max = 0.0;

    double width() const { return sigma_max - sigma_min; }
    double height() const { return t_max - t_min; }
    double short_side() const;
    double long_side() const;
    double aspect() const;  // long / short, >= 1
    double diameter() const;
    bool contains(Complex p, double tol = 0.0) const;
    void validate() const;  // throws std::invalid_argument
};

/// Leaf of the recursive bisection: a rectangle carrying exactly mass 2.
struct PartitionPiece {
    LogRectangle rect;
    Measure nu;
    int depth = 0;
    /// False when some ancestor cut had to leave the geometric middle third
    /// of the long side (forced by mass parity).
    bool middle_third_ok = true;
};

struct PartitionOptions {
    int depth_cap = 10000;
    /// Consecutive support-shrink steps allowed before a cut is forced;
    /// guards against ternary-dance cycling on degenerate supports.
    int shrink_streak_cap = 200;
};

/// Recursively cuts (rect, nu) into mass-2 pieces. nu must have even
/// integer total mass >= 2 (tolerance 1e-9) with support inside rect.
///
/// Each internal node cuts perpendicular to the longer side (ties prefer
/// the sigma axis). The cut position is an even-mass quantile inside the
/// geometric middle third when one exists (the even split closest to half,
/// ties to the smaller, placed at the midpoint of the feasible interval
/// intersected with the middle third). When no even quantile reaches the
/// middle third, either the rectangle shrinks toward its support (massless
/// far side) or the cut is forced outside the middle third and the node is
/// flagged. Atoms on a cut line split fractionally; the halves re-add
/// bitwise.
std::vector<PartitionPiece> partition_mass_two(const LogRectangle& rect,
                                               const Measure& nu,
                                               const PartitionOptions& opts = {});

struct PropertyCheck {
    bool pass = true;
    std::string detail;
};

/// The five structural guarantees checked on a finished partition.
struct PartitionReport {
    PropertyCheck support_containment;   // supp nu_k inside rect_k
    PropertyCheck mass_conservation;     // each mass 2; pieces re-add to nu
    PropertyCheck hull_disjointness;     // convex hulls of supports: disjoint interiors
    PropertyCheck aspect_ratio;          // aspect in [1, max(3, l0)]; >3 => short side = a0
    PropertyCheck cover_multiplicity;    // every sampled point inside <= 4 rectangles
    double middle_third_fraction = 1.0;  // share of pieces with middle_third_ok
    bool all_pass() const;
    std::string summary() const;
};

PartitionReport verify_partition(const std::vector<PartitionPiece>& pieces,
                                 const LogRectangle& root, const Measure& nu,
                                 std::uint64_t sample_seed = 20240901,
                                 int cover_samples = 10000);

// Convex hull utilities shared with the verifier and tests.
std::vector<Complex> convex_hull(std::vector<Complex> points);
double polygon_area(const std::vector<Complex>& hull);
bool hull_interiors_intersect(const std::vector<Complex>& a,
                              const std::vector<Complex>& b, double tol);

}  // namespace sublog

#endif
