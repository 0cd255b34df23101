#ifndef SUBLOG_MEASURE_HPP
#define SUBLOG_MEASURE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sublog/numeric.hpp"

namespace sublog {

// ===== atoms and measures =====

/// One point mass. Mass is strictly positive; zero-mass atoms never enter a
/// Measure (fractional splits drop empty halves).
struct Atom {
    Complex position;
    double mass = 0.0;
};

/// Finite nonnegative atomic measure on the plane. Atom order is preserved
/// as given; operations that need a deterministic order canonicalize
/// internally. Instances are immutable by convention: operations return new
/// measures.
class Measure {
public:
    Measure() = default;
    explicit Measure(std::vector<Atom> atoms);

    const std::vector<Atom>& atoms() const { return atoms_; }
    std::size_t size() const { return atoms_.size(); }
    bool empty() const { return atoms_.empty(); }

    /// Total mass through an extended-precision accumulator, so that
    /// disjoint pieces of a measure report masses that add back exactly.
    double total_mass() const;

    /// Merges exactly coincident positions and sorts by
    /// (modulus, angle, re, im). Coincident-atom masses are folded in list
    /// order, which keeps fractional splits reassembling bitwise.
    Measure canonicalized() const;

    /// Support radius bounds; nullopt when empty.
    std::optional<double> min_modulus() const;
    std::optional<double> max_modulus() const;

private:
    std::vector<Atom> atoms_;
};

/// Concatenation (no merging). Mass adds exactly at the list level.
Measure concat(const Measure& a, const Measure& b);

bool same_atoms(const Measure& a, const Measure& b, double mass_tol = 0.0);

// ===== regions =====

struct Disk {
    Complex center;
    double radius = 0.0;
};

struct AnnulusRegion {
    Complex center;
    double inner = 0.0;  // 0 <= inner < outer
    double outer = 0.0;
};

struct RectRegion {
    double x_min = 0.0, x_max = 0.0;
    double y_min = 0.0, y_max = 0.0;
};

/// Closed: all boundary included. OpenInner: the inner circle of an annulus
/// (resp. the min edges of a rectangle, the center point of a disk) is
/// excluded, giving half-open tilings.
enum class BoundaryRule { Closed, OpenInner };

class Region {
public:
    Region(Disk d);           // NOLINT: implicit by design
    Region(AnnulusRegion a);  // NOLINT
    Region(RectRegion r);     // NOLINT

    bool contains(Complex p, BoundaryRule rule = BoundaryRule::Closed) const;
    std::string describe() const;

private:
    std::variant<Disk, AnnulusRegion, RectRegion> shape_;
};

/// Atoms inside the region (whole atoms, no splitting).
Measure restrict_to(const Measure& m, const Region& r,
                    BoundaryRule rule = BoundaryRule::Closed);
/// Atoms outside, i.e. the complement under the same rule; the two parts
/// always reassemble the input exactly.
Measure restrict_outside(const Measure& m, const Region& r,
                         BoundaryRule rule = BoundaryRule::Closed);

// ===== quantile splits =====

enum class Axis { Horizontal, Vertical };  // Horizontal splits by Re, Vertical by Im

struct QuantileSplit {
    Measure lower;  // coordinate <= cut, mass exactly `target`
    Measure upper;
    double cut = 0.0;  // infimum coordinate where cumulative mass reaches target
};

/// Splits so that `lower` carries exactly `target` mass. An atom straddling
/// the cut is divided in two, both halves keeping its position; the halves
/// re-add to the original mass bitwise. target must lie in [0, total].
QuantileSplit split_at_quantile(const Measure& m, Axis axis, double target);

/// Radial analogue ordered by (modulus, angle): `inner` gets exactly
/// `target` mass, atoms on the cut circle are consumed in angle order.
QuantileSplit split_at_radial_quantile(const Measure& m, double target);

// ===== radial discretization =====

/// One ring of a radial profile: total `mass` sitting on the circle of
/// radius `radius`.
struct RadialRing {
    double radius = 0.0;
    double mass = 0.0;
};

/// Spreads each ring over `atoms_per_ring` equally spaced atoms. The last
/// atom absorbs the division rounding so each ring conserves its mass to
/// the last bit the accumulator can see.
Measure discretize_radial_density(const std::vector<RadialRing>& rings,
                                  int atoms_per_ring);

// ===== generic origin =====

/// True when every line through `origin` meets at most one atom position
/// and every circle centered at `origin` carries at most one atom
/// position. Checked by exhaustive pair enumeration: `origin` must avoid
/// every two-atom line and every perpendicular bisector, with relative
/// clearance `tol`.
bool verify_generic_origin(const Measure& m, Complex origin, double tol = 1e-9);

/// Rejection-samples a point with |z'| < radius passing
/// verify_generic_origin with a comfortable margin. Deterministic for a
/// given seed. Throws after `max_tries` rejections.
Complex generic_origin_shift(const Measure& m, double radius, std::uint64_t seed,
                             int max_tries = 10000);

/// The measure translated so that `origin` becomes 0.
Measure translate(const Measure& m, Complex new_origin);

}  // namespace sublog

#endif
