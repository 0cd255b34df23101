#include "sublog/measure.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace sublog {

namespace {

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

/// Canonical sort key: modulus, then angle in [0, 2*pi), then raw parts.
auto canonical_key(const Atom& a) {
    return std::make_tuple(std::abs(a.position), angle01(a.position),
                           a.position.real(), a.position.imag(), a.mass);
}

void validate_atoms(const std::vector<Atom>& atoms) {
    for (const Atom& a : atoms) {
        if (!finite(a.position))
            throw std::invalid_argument("Measure: atom position must be finite");
        if (!std::isfinite(a.mass) || a.mass <= 0.0)
            throw std::invalid_argument("Measure: atom mass must be finite and positive");
    }
}

}  // namespace

// ===== Measure =====

Measure::Measure(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
    validate_atoms(atoms_);
}

double Measure::total_mass() const {
    std::vector<double> ms;
    ms.reserve(atoms_.size());
    for (const Atom& a : atoms_) ms.push_back(a.mass);
    return exact_sum(ms);
}

Measure Measure::canonicalized() const {
    std::vector<Atom> sorted = atoms_;
    std::stable_sort(sorted.begin(), sorted.end(), [](const Atom& a, const Atom& b) {
        return canonical_key(a) < canonical_key(b);
    });
    // Fractional splits keep lo + hi equal to the parent mass as exact
    // reals, so folding coincident masses through a binary128 accumulator
    // reassembles the original double bitwise.
    std::vector<Atom> merged;
    std::vector<__float128> acc;
    merged.reserve(sorted.size());
    for (const Atom& a : sorted) {
        if (!merged.empty() && merged.back().position == a.position) {
            acc.back() += static_cast<__float128>(a.mass);
        } else {
            merged.push_back(a);
            acc.push_back(static_cast<__float128>(a.mass));
        }
    }
    for (std::size_t i = 0; i < merged.size(); ++i)
        merged[i].mass = static_cast<double>(acc[i]);
    Measure out;
    out.atoms_ = std::move(merged);
    return out;
}

std::optional<double> Measure::min_modulus() const {
    if (atoms_.empty()) return std::nullopt;
    double r = std::numeric_limits<double>::infinity();
    for (const Atom& a : atoms_) r = std::min(r, std::abs(a.position));
    return r;
}

std::optional<double> Measure::max_modulus() const {
    if (atoms_.empty()) return std::nullopt;
    double r = 0.0;
    for (const Atom& a : atoms_) r = std::max(r, std::abs(a.position));
    return r;
}

Measure concat(const Measure& a, const Measure& b) {
    std::vector<Atom> atoms = a.atoms();
    atoms.insert(atoms.end(), b.atoms().begin(), b.atoms().end());
    return Measure(std::move(atoms));
}

bool same_atoms(const Measure& a, const Measure& b, double mass_tol) {
    const Measure ca = a.canonicalized();
    const Measure cb = b.canonicalized();
    if (ca.size() != cb.size()) return false;
    for (std::size_t i = 0; i < ca.size(); ++i) {
        const Atom& x = ca.atoms()[i];
        const Atom& y = cb.atoms()[i];
        if (x.position != y.position) return false;
        const double scale = std::max({1.0, x.mass, y.mass});
        if (std::abs(x.mass - y.mass) > mass_tol * scale) return false;
    }
    return true;
}

// ===== regions =====

Region::Region(Disk d) : shape_(d) {
    if (!finite(d.center) || !(d.radius > 0.0) || !std::isfinite(d.radius))
        throw std::invalid_argument("Region: disk needs finite center and radius > 0");
}

Region::Region(AnnulusRegion a) : shape_(a) {
    if (!finite(a.center) || !std::isfinite(a.inner) || !std::isfinite(a.outer) ||
        a.inner < 0.0 || !(a.inner < a.outer))
        throw std::invalid_argument("Region: annulus needs 0 <= inner < outer");
}

Region::Region(RectRegion r) : shape_(r) {
    if (!std::isfinite(r.x_min) || !std::isfinite(r.x_max) || !std::isfinite(r.y_min) ||
        !std::isfinite(r.y_max) || !(r.x_min < r.x_max) || !(r.y_min < r.y_max))
        throw std::invalid_argument("Region: rectangle corners must be ordered");
}

bool Region::contains(Complex p, BoundaryRule rule) const {
    const bool open_inner = rule == BoundaryRule::OpenInner;
    if (const Disk* d = std::get_if<Disk>(&shape_)) {
        const double r = std::abs(p - d->center);
        if (open_inner && r == 0.0) return false;
        return r <= d->radius;
    }
    if (const AnnulusRegion* a = std::get_if<AnnulusRegion>(&shape_)) {
        const double r = std::abs(p - a->center);
        if (open_inner ? r <= a->inner : r < a->inner) return false;
        return r <= a->outer;
    }
    const RectRegion& rc = std::get<RectRegion>(shape_);
    if (open_inner ? (p.real() <= rc.x_min || p.imag() <= rc.y_min)
                   : (p.real() < rc.x_min || p.imag() < rc.y_min))
        return false;
    return p.real() <= rc.x_max && p.imag() <= rc.y_max;
}

std::string Region::describe() const {
    std::ostringstream os;
    if (const Disk* d = std::get_if<Disk>(&shape_))
        os << "disk(center=" << d->center << ", r=" << d->radius << ")";
    else if (const AnnulusRegion* a = std::get_if<AnnulusRegion>(&shape_))
        os << "annulus(center=" << a->center << ", " << a->inner << ".." << a->outer << ")";
    else {
        const RectRegion& r = std::get<RectRegion>(shape_);
        os << "rect([" << r.x_min << "," << r.x_max << "]x[" << r.y_min << "," << r.y_max
           << "])";
    }
    return os.str();
}

Measure restrict_to(const Measure& m, const Region& r, BoundaryRule rule) {
    std::vector<Atom> in;
    for (const Atom& a : m.atoms())
        if (r.contains(a.position, rule)) in.push_back(a);
    return Measure(std::move(in));
}

Measure restrict_outside(const Measure& m, const Region& r, BoundaryRule rule) {
    std::vector<Atom> out;
    for (const Atom& a : m.atoms())
        if (!r.contains(a.position, rule)) out.push_back(a);
    return Measure(std::move(out));
}

// ===== quantile splits =====

namespace {

QuantileSplit split_sorted(std::vector<Atom> sorted, double target, double total,
                           auto coord_of) {
    if (!std::isfinite(target) || target < 0.0)
        throw std::invalid_argument("split_at_quantile: target must be >= 0");
    if (target > total * (1.0 + 1e-12) + 1e-12)
        throw std::invalid_argument("split_at_quantile: target exceeds total mass");

    QuantileSplit out;
    out.cut = -std::numeric_limits<double>::infinity();
    std::vector<Atom> lower, upper;
    const __float128 tq = static_cast<__float128>(std::min(target, total));
    __float128 cum = 0;
    bool done = target <= 0.0;
    for (const Atom& a : sorted) {
        if (done) {
            upper.push_back(a);
            continue;
        }
        const double need = static_cast<double>(tq - cum);
        if (need >= a.mass) {
            lower.push_back(a);
            cum += static_cast<__float128>(a.mass);
            if (!(cum < tq)) {
                done = true;
                out.cut = coord_of(a);
            }
        } else if (need > 0.0) {
            const MassSplit s = split_mass(a.mass, need);
            if (s.lo > 0.0) lower.push_back({a.position, s.lo});
            if (s.hi > 0.0) upper.push_back({a.position, s.hi});
            done = true;
            out.cut = coord_of(a);
        } else {
            done = true;
            upper.push_back(a);
        }
    }
    if (!done && !sorted.empty()) out.cut = coord_of(sorted.back());
    out.lower = Measure(std::move(lower));
    out.upper = Measure(std::move(upper));
    return out;
}

}  // namespace

QuantileSplit split_at_quantile(const Measure& m, Axis axis, double target) {
    auto coord = [axis](const Atom& a) {
        return axis == Axis::Horizontal ? a.position.real() : a.position.imag();
    };
    std::vector<Atom> sorted = m.atoms();
    std::stable_sort(sorted.begin(), sorted.end(), [&](const Atom& a, const Atom& b) {
        return std::make_tuple(coord(a), canonical_key(a)) <
               std::make_tuple(coord(b), canonical_key(b));
    });
    return split_sorted(std::move(sorted), target, m.total_mass(), coord);
}

QuantileSplit split_at_radial_quantile(const Measure& m, double target) {
    auto coord = [](const Atom& a) { return std::abs(a.position); };
    std::vector<Atom> sorted = m.atoms();
    std::stable_sort(sorted.begin(), sorted.end(), [&](const Atom& a, const Atom& b) {
        return canonical_key(a) < canonical_key(b);
    });
    return split_sorted(std::move(sorted), target, m.total_mass(), coord);
}

// ===== radial discretization =====

Measure discretize_radial_density(const std::vector<RadialRing>& rings,
                                  int atoms_per_ring) {
    if (atoms_per_ring < 1)
        throw std::invalid_argument("discretize_radial_density: atoms_per_ring >= 1");
    std::vector<Atom> atoms;
    atoms.reserve(rings.size() * static_cast<std::size_t>(atoms_per_ring));
    for (const RadialRing& ring : rings) {
        if (!(ring.radius > 0.0) || !std::isfinite(ring.radius))
            throw std::invalid_argument("discretize_radial_density: ring radius > 0");
        if (!(ring.mass > 0.0) || !std::isfinite(ring.mass))
            throw std::invalid_argument("discretize_radial_density: ring mass > 0");
        const int k = atoms_per_ring;
        const double q = ring.mass / k;
        double placed = 0.0;
        for (int j = 0; j < k; ++j) {
            const double theta = kTwoPi * j / k;
            const Complex pos = std::polar(ring.radius, theta);
            if (j + 1 < k) {
                atoms.push_back({pos, q});
                placed += q;
            } else {
                // Last atom takes the exact leftover (Sterbenz: placed is
                // within [mass/2, mass] for k >= 2, so the difference is exact).
                atoms.push_back({pos, k == 1 ? ring.mass : ring.mass - placed});
            }
        }
    }
    return Measure(std::move(atoms));
}

// ===== generic origin =====

namespace {

/// Positions deduplicated through canonicalization.
std::vector<Complex> distinct_positions(const Measure& m) {
    std::vector<Complex> ps;
    const Measure canon = m.canonicalized();
    for (const Atom& a : canon.atoms()) ps.push_back(a.position);
    return ps;
}

}  // namespace

bool verify_generic_origin(const Measure& m, Complex origin, double tol) {
    if (!finite(origin)) throw std::invalid_argument("verify_generic_origin: origin finite");
    const std::vector<Complex> ps = distinct_positions(m);
    const std::size_t n = ps.size();
    if (n < 2) return true;
    double scale = std::abs(origin);
    for (const Complex& p : ps) scale = std::max(scale, std::abs(p));
    scale = std::max(scale, 1.0);
    const double clearance = tol * scale;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const Complex d = ps[j] - ps[i];
            const double len = std::abs(d);
            if (len == 0.0) continue;
            // (a) the line through atoms i and j must miss the origin:
            // otherwise that line, drawn through the origin, meets two atoms.
            const Complex rel = origin - ps[i];
            const double line_dist =
                std::abs(d.real() * rel.imag() - d.imag() * rel.real()) / len;
            if (line_dist <= clearance) return false;
            // (b) the origin must be off the perpendicular bisector:
            // otherwise atoms i and j share a circle centered at the origin.
            const double di2 = std::norm(origin - ps[i]);
            const double dj2 = std::norm(origin - ps[j]);
            const double bisector_dist = std::abs(di2 - dj2) / (2.0 * len);
            if (bisector_dist <= clearance) return false;
        }
    }
    return true;
}

Complex generic_origin_shift(const Measure& m, double radius, std::uint64_t seed,
                             int max_tries) {
    if (!(radius > 0.0) || !std::isfinite(radius))
        throw std::invalid_argument("generic_origin_shift: radius must be > 0");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-radius, radius);
    // Sample at a wider clearance than verify_generic_origin checks, so the
    // returned point passes verification with margin to spare.
    const double sample_tol = 1e-6;
    for (int t = 0; t < max_tries; ++t) {
        const Complex z(unif(rng), unif(rng));
        if (std::norm(z) >= radius * radius) continue;
        if (verify_generic_origin(m, z, sample_tol)) return z;
    }
    throw std::runtime_error("generic_origin_shift: no generic point found");
}

Measure translate(const Measure& m, Complex new_origin) {
    std::vector<Atom> atoms = m.atoms();
    for (Atom& a : atoms) a.position -= new_origin;
    return Measure(std::move(atoms));
}

}  // namespace sublog
