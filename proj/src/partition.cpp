#include "sublog/partition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

namespace sublog {

namespace {

constexpr double kMassTol = 1e-9;

double coord_on(const Atom& a, Axis axis) {
    return axis == Axis::Horizontal ? a.position.real() : a.position.imag();
}

}  // namespace

// ===== LogRectangle =====

double LogRectangle::short_side() const { return std::min(width(), height()); }
double LogRectangle::long_side() const { return std::max(width(), height()); }
double LogRectangle::aspect() const { return long_side() / short_side(); }
double LogRectangle::diameter() const { return std::hypot(width(), height()); }

bool LogRectangle::contains(Complex p, double tol) const {
    return p.real() >= sigma_min - tol && p.real() <= sigma_max + tol &&
           p.imag() >= t_min - tol && p.imag() <= t_max + tol;
}

void LogRectangle::validate() const {
    if (!std::isfinite(sigma_min) || !std::isfinite(sigma_max) || !std::isfinite(t_min) ||
        !std::isfinite(t_max) || !(sigma_min < sigma_max) || !(t_min < t_max))
        throw std::invalid_argument("LogRectangle: sides must be ordered and finite");
    if (height() > kTwoPi * (1.0 + 1e-12))
        throw std::invalid_argument("LogRectangle: height exceeds one full turn");
}

// ===== recursive bisection =====

namespace {

/// Interval of geometric cut positions under which the lower side can carry
/// exactly mass m while both supports stay inside their half.
struct CutInterval {
    double lo = 0.0;
    double hi = 0.0;
};

/// Atoms must be sorted by the axis coordinate. Returns the cut interval
/// for even target m in (0, total).
CutInterval cut_interval_for(const std::vector<Atom>& sorted, Axis axis, double m,
                             double axis_hi) {
    __float128 cum = 0;
    const __float128 mq = static_cast<__float128>(m);
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        cum += static_cast<__float128>(sorted[i].mass);
        const double c = coord_on(sorted[i], axis);
        if (cum > mq) return {c, c};  // straddling atom pins the cut
        if (!(cum < mq)) {
            // Exact completion: the cut may slide until the next support
            // coordinate (or the rectangle edge when nothing follows).
            const double next =
                i + 1 < sorted.size() ? coord_on(sorted[i + 1], axis) : axis_hi;
            return {c, next};
        }
    }
    throw std::logic_error("cut_interval_for: target beyond total mass");
}

struct Builder {
    PartitionOptions opts;
    LogRectangle root;
    std::vector<PartitionPiece> out;

    /// A rectangle passes as-is when nearly square-ish (aspect <= 3) or when
    /// elongated with the root's own short side.
    bool shape_legal(const LogRectangle& r) const {
        const double tol = 1e-9;
        const double aspect = r.aspect();
        if (aspect <= 3.0 + tol) return true;
        const double a0 = root.short_side();
        return std::abs(r.short_side() - a0) <= tol * a0 &&
               aspect <= std::max(3.0, root.aspect()) * (1.0 + tol);
    }

    /// Rebuilds an off-shape rectangle (forced cuts, support-shrink
    /// collapse, point-mass peeling) around its support: every side grows
    /// to at least min(long/3, the root extent), with an absolute floor so
    /// a rectangle collapsed to ulp scale cannot absorb the expansion.
    LogRectangle repair_shape(const LogRectangle& r, const Measure& nu) const {
        if (r.short_side() > 0.0 && shape_legal(r)) return r;
        // The floor must dominate one ulp of every coordinate in play,
        // hence the corner magnitudes in the scale.
        const double scale =
            std::max({1.0, root.diameter(), std::abs(root.sigma_min),
                      std::abs(root.sigma_max), std::abs(root.t_min),
                      std::abs(root.t_max)});
        const double floor_eps = 1e-9 * scale;
        double bb[2][2] = {{r.sigma_min, r.sigma_max}, {r.t_min, r.t_max}};
        if (!nu.empty()) {
            bb[0][0] = bb[1][0] = std::numeric_limits<double>::infinity();
            bb[0][1] = bb[1][1] = -bb[0][0];
            for (const Atom& a : nu.atoms()) {
                bb[0][0] = std::min(bb[0][0], a.position.real());
                bb[0][1] = std::max(bb[0][1], a.position.real());
                bb[1][0] = std::min(bb[1][0], a.position.imag());
                bb[1][1] = std::max(bb[1][1], a.position.imag());
            }
        }
        const double l = std::max({r.width(), r.height(), floor_eps});
        LogRectangle fixed = r;
        for (int axis = 0; axis < 2; ++axis) {
            double& lo = axis == 0 ? fixed.sigma_min : fixed.t_min;
            double& hi = axis == 0 ? fixed.sigma_max : fixed.t_max;
            const double root_lo = axis == 0 ? root.sigma_min : root.t_min;
            const double root_hi = axis == 0 ? root.sigma_max : root.t_max;
            double need = std::max({std::min(l / 3.0, root_hi - root_lo),
                                    bb[axis][1] - bb[axis][0], floor_eps});
            need = std::min(need, root_hi - root_lo);
            if (hi - lo >= need) continue;
            double a = 0.5 * (bb[axis][0] + bb[axis][1]) - 0.5 * need;
            a = std::min(std::max(a, root_lo), root_hi - need);
            lo = a;
            hi = a + need;
        }
        return fixed;
    }

    void emit(const LogRectangle& rect, const Measure& nu, int depth, bool third_ok) {
        out.push_back({repair_shape(rect, nu), nu, depth, third_ok});
    }

    void build(LogRectangle rect, const Measure& nu, int depth, int shrink_streak,
               bool third_ok) {
        if (depth > opts.depth_cap)
            throw std::runtime_error("partition_mass_two: depth cap exceeded");
        const double total = nu.total_mass();
        const long long M = std::llround(total);
        if (M == 2) {
            emit(rect, nu, depth, third_ok);
            return;
        }

        // All mass at one position: no cut separates it, and repeated
        // support shrinks would spiral the cell below ulp scale. Peel
        // mass-2 leaves directly; repair_shape boxes them around the point.
        const Complex p0 = nu.atoms().front().position;
        bool single_pos = true;
        for (const Atom& a : nu.atoms())
            if (a.position != p0) { single_pos = false; break; }
        if (single_pos) {
            const LogRectangle point{p0.real(), p0.real(), p0.imag(), p0.imag()};
            Measure rest = nu;
            for (long long k = M; k > 2; k -= 2) {
                QuantileSplit s = split_at_quantile(rest, Axis::Horizontal, 2.0);
                emit(point, s.lower, depth, third_ok);
                rest = s.upper;
            }
            emit(point, rest, depth, third_ok);
            return;
        }

        const Axis axis = rect.width() >= rect.height() ? Axis::Horizontal : Axis::Vertical;
        const double lo = axis == Axis::Horizontal ? rect.sigma_min : rect.t_min;
        const double hi = axis == Axis::Horizontal ? rect.sigma_max : rect.t_max;
        const double L = hi - lo;
        const double q1 = lo + L / 3.0;
        const double q2 = hi - L / 3.0;

        std::vector<Atom> sorted = nu.atoms();
        std::stable_sort(sorted.begin(), sorted.end(), [&](const Atom& a, const Atom& b) {
            return coord_on(a, axis) < coord_on(b, axis);
        });

        // Gather cut intervals for every even split target.
        struct Candidate {
            long long m;
            CutInterval iv;
            double dist;  // distance from the interval to the middle third
        };
        std::vector<Candidate> cands;
        for (long long m = 2; m <= M - 2; m += 2) {
            const CutInterval iv =
                cut_interval_for(sorted, axis, static_cast<double>(m), hi);
            const double dist = std::max({0.0, q1 - iv.hi, iv.lo - q2});
            cands.push_back({m, iv, dist});
        }

        auto better = [M](const Candidate& a, const Candidate& b) {
            const double da = std::abs(static_cast<double>(a.m) - M / 2.0);
            const double db = std::abs(static_cast<double>(b.m) - M / 2.0);
            if (da != db) return da < db;
            return a.m < b.m;
        };

        const Candidate* pick = nullptr;
        for (const Candidate& c : cands)
            if (c.dist == 0.0 && (!pick || better(c, *pick))) pick = &c;

        if (pick) {
            const double c_lo = std::max(pick->iv.lo, q1);
            const double c_hi = std::min(pick->iv.hi, q2);
            cut_and_recurse(rect, nu, axis, 0.5 * (c_lo + c_hi),
                            static_cast<double>(pick->m), depth, third_ok);
            return;
        }

        // No even quantile reaches the middle third. Shrink toward the
        // support when one side of it is massless; otherwise force the cut
        // nearest the middle third and flag the subtree.
        double s_min = std::numeric_limits<double>::infinity();
        double s_max = -s_min;
        for (const Atom& a : sorted) {
            s_min = std::min(s_min, coord_on(a, axis));
            s_max = std::max(s_max, coord_on(a, axis));
        }
        if (shrink_streak < opts.shrink_streak_cap && s_max <= q2) {
            LogRectangle shrunk = rect;
            const double c = std::max(q1, s_max);
            (axis == Axis::Horizontal ? shrunk.sigma_max : shrunk.t_max) = c;
            build(shrunk, nu, depth + 1, shrink_streak + 1, third_ok);
            return;
        }
        if (shrink_streak < opts.shrink_streak_cap && s_min >= q1) {
            LogRectangle shrunk = rect;
            const double c = std::min(q2, s_min);
            (axis == Axis::Horizontal ? shrunk.sigma_min : shrunk.t_min) = c;
            build(shrunk, nu, depth + 1, shrink_streak + 1, third_ok);
            return;
        }

        const Candidate* forced = nullptr;
        for (const Candidate& c : cands) {
            if (!forced || c.dist < forced->dist ||
                (c.dist == forced->dist && better(c, *forced)))
                forced = &c;
        }
        if (!forced) throw std::logic_error("partition_mass_two: no cut candidate");
        const double c = forced->iv.hi < q1 ? forced->iv.hi : forced->iv.lo;
        cut_and_recurse(rect, nu, axis, c, static_cast<double>(forced->m), depth,
                        /*third_ok=*/false);
    }

    void cut_and_recurse(const LogRectangle& rect, const Measure& nu, Axis axis,
                         double cut, double m, int depth, bool third_ok) {
        const QuantileSplit split = split_at_quantile(nu, axis, m);
        LogRectangle left = rect;
        LogRectangle right = rect;
        if (axis == Axis::Horizontal) {
            left.sigma_max = cut;
            right.sigma_min = cut;
        } else {
            left.t_max = cut;
            right.t_min = cut;
        }
        build(left, split.lower, depth + 1, 0, third_ok);
        build(right, split.upper, depth + 1, 0, third_ok);
    }
};

}  // namespace

std::vector<PartitionPiece> partition_mass_two(const LogRectangle& rect,
                                               const Measure& nu,
                                               const PartitionOptions& opts) {
    rect.validate();
    const Measure canon = nu.canonicalized();
    const double total = canon.total_mass();
    const long long M = std::llround(total);
    if (std::abs(total - static_cast<double>(M)) > kMassTol)
        throw std::invalid_argument("partition_mass_two: total mass must be an integer");
    if (M < 2 || M % 2 != 0)
        throw std::invalid_argument("partition_mass_two: total mass must be even and >= 2");
    const double tol = 1e-9 * std::max(1.0, rect.diameter());
    for (const Atom& a : canon.atoms())
        if (!rect.contains(a.position, tol))
            throw std::invalid_argument("partition_mass_two: support escapes rectangle");

    Builder b{opts, rect, {}};
    b.build(rect, canon, 0, 0, true);
    return std::move(b.out);
}

// ===== convex hull utilities =====

std::vector<Complex> convex_hull(std::vector<Complex> pts) {
    std::sort(pts.begin(), pts.end(), [](Complex a, Complex b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    const std::size_t n = pts.size();
    if (n <= 2) return pts;
    auto cross = [](Complex o, Complex a, Complex b) {
        return (a.real() - o.real()) * (b.imag() - o.imag()) -
               (a.imag() - o.imag()) * (b.real() - o.real());
    };
    std::vector<Complex> hull(2 * n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
        hull[k++] = pts[i];
    }
    const std::size_t lower_end = k + 1;
    for (std::size_t i = n - 1; i-- > 0;) {
        while (k >= lower_end && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

double polygon_area(const std::vector<Complex>& hull) {
    if (hull.size() < 3) return 0.0;
    double twice = 0.0;
    for (std::size_t i = 0; i < hull.size(); ++i) {
        const Complex& p = hull[i];
        const Complex& q = hull[(i + 1) % hull.size()];
        twice += p.real() * q.imag() - q.real() * p.imag();
    }
    return 0.5 * std::abs(twice);
}

bool hull_interiors_intersect(const std::vector<Complex>& a,
                              const std::vector<Complex>& b, double tol) {
    if (polygon_area(a) <= tol * tol || polygon_area(b) <= tol * tol) return false;
    // Separating-axis test over both polygons' edge normals; touching
    // boundaries count as separated since only interiors matter.
    auto separated_on = [&](Complex axis) {
        double a_min = std::numeric_limits<double>::infinity(), a_max = -a_min;
        double b_min = a_min, b_max = -a_min;
        for (const Complex& p : a) {
            const double v = p.real() * axis.real() + p.imag() * axis.imag();
            a_min = std::min(a_min, v);
            a_max = std::max(a_max, v);
        }
        for (const Complex& p : b) {
            const double v = p.real() * axis.real() + p.imag() * axis.imag();
            b_min = std::min(b_min, v);
            b_max = std::max(b_max, v);
        }
        return a_max <= b_min + tol || b_max <= a_min + tol;
    };
    auto edges_separate = [&](const std::vector<Complex>& poly) {
        for (std::size_t i = 0; i < poly.size(); ++i) {
            const Complex e = poly[(i + 1) % poly.size()] - poly[i];
            const double len = std::abs(e);
            if (len == 0.0) continue;
            if (separated_on(Complex(-e.imag() / len, e.real() / len))) return true;
        }
        return false;
    };
    return !edges_separate(a) && !edges_separate(b);
}

// ===== verifier =====

namespace {

std::string bad(const std::string& what) { return what; }

}  // namespace

bool PartitionReport::all_pass() const {
    return support_containment.pass && mass_conservation.pass && hull_disjointness.pass &&
           aspect_ratio.pass && cover_multiplicity.pass;
}

std::string PartitionReport::summary() const {
    std::ostringstream os;
    auto line = [&os](const char* name, const PropertyCheck& c) {
        os << name << ": " << (c.pass ? "ok" : "FAIL") << (c.detail.empty() ? "" : " (")
           << c.detail << (c.detail.empty() ? "" : ")") << "\n";
    };
    line("support containment", support_containment);
    line("mass conservation", mass_conservation);
    line("hull disjointness", hull_disjointness);
    line("aspect ratio", aspect_ratio);
    line("cover multiplicity", cover_multiplicity);
    os << "middle-third fraction: " << middle_third_fraction << "\n";
    return os.str();
}

PartitionReport verify_partition(const std::vector<PartitionPiece>& pieces,
                                 const LogRectangle& root, const Measure& nu,
                                 std::uint64_t sample_seed, int cover_samples) {
    PartitionReport rep;
    const double scale = std::max(1.0, root.diameter());
    const double tol = 1e-9 * scale;

    // 1. supports sit inside their rectangles (and inside the root).
    for (std::size_t k = 0; k < pieces.size(); ++k) {
        for (const Atom& a : pieces[k].nu.atoms()) {
            if (!pieces[k].rect.contains(a.position, tol) ||
                !root.contains(a.position, tol)) {
                rep.support_containment = {false,
                                           bad("piece " + std::to_string(k) +
                                               " support escapes its rectangle")};
                break;
            }
        }
        if (!rep.support_containment.pass) break;
    }

    // 2. every piece carries mass 2 and the pieces reassemble nu exactly.
    Measure all;
    for (std::size_t k = 0; k < pieces.size(); ++k) {
        const double mass = pieces[k].nu.total_mass();
        if (std::abs(mass - 2.0) > kMassTol) {
            rep.mass_conservation = {
                false, bad("piece " + std::to_string(k) + " mass " + std::to_string(mass))};
        }
        all = concat(all, pieces[k].nu);
    }
    if (rep.mass_conservation.pass && !same_atoms(all, nu, 0.0))
        rep.mass_conservation = {false, bad("pieces do not reassemble the input measure")};

    // 3. convex hulls of supports have pairwise disjoint interiors.
    std::vector<std::vector<Complex>> hulls;
    hulls.reserve(pieces.size());
    for (const PartitionPiece& p : pieces) {
        std::vector<Complex> pts;
        for (const Atom& a : p.nu.atoms()) pts.push_back(a.position);
        hulls.push_back(convex_hull(std::move(pts)));
    }
    for (std::size_t i = 0; i < hulls.size() && rep.hull_disjointness.pass; ++i)
        for (std::size_t j = i + 1; j < hulls.size(); ++j)
            if (hull_interiors_intersect(hulls[i], hulls[j], 1e-12 * scale)) {
                rep.hull_disjointness = {false, bad("hulls " + std::to_string(i) + "," +
                                                    std::to_string(j) + " overlap")};
                break;
            }

    // 4. aspect ratios within [1, max(3, l0)]; elongated pieces keep the
    // root's short side.
    const double l0 = root.aspect();
    const double a0 = root.short_side();
    for (std::size_t k = 0; k < pieces.size(); ++k) {
        const double aspect = pieces[k].rect.aspect();
        const bool ok = aspect <= std::max(3.0, l0) * (1.0 + 1e-9) &&
                        (aspect <= 3.0 + 1e-9 ||
                         std::abs(pieces[k].rect.short_side() - a0) <= 1e-9 * a0);
        if (!ok) {
            rep.aspect_ratio = {false, bad("piece " + std::to_string(k) + " aspect " +
                                           std::to_string(aspect))};
            break;
        }
    }

    // 5. no plane point lies in the interior of more than four rectangles,
    // checked on uniform samples plus corner-biased probes.
    std::mt19937_64 rng(sample_seed);
    std::uniform_real_distribution<double> ux(root.sigma_min, root.sigma_max);
    std::uniform_real_distribution<double> ut(root.t_min, root.t_max);
    std::vector<Complex> probes;
    probes.reserve(static_cast<std::size_t>(cover_samples) + pieces.size() * 5);
    for (int i = 0; i < cover_samples; ++i) probes.emplace_back(ux(rng), ut(rng));
    const double nudge = 1e-7 * scale;
    for (const PartitionPiece& p : pieces) {
        probes.emplace_back(0.5 * (p.rect.sigma_min + p.rect.sigma_max),
                            0.5 * (p.rect.t_min + p.rect.t_max));
        probes.emplace_back(p.rect.sigma_min + nudge, p.rect.t_min + nudge);
        probes.emplace_back(p.rect.sigma_max - nudge, p.rect.t_min + nudge);
        probes.emplace_back(p.rect.sigma_min + nudge, p.rect.t_max - nudge);
        probes.emplace_back(p.rect.sigma_max - nudge, p.rect.t_max - nudge);
    }
    int worst = 0;
    for (const Complex& z : probes) {
        int count = 0;
        for (const PartitionPiece& p : pieces) {
            if (z.real() > p.rect.sigma_min && z.real() < p.rect.sigma_max &&
                z.imag() > p.rect.t_min && z.imag() < p.rect.t_max)
                ++count;
        }
        worst = std::max(worst, count);
    }
    if (worst > 4)
        rep.cover_multiplicity = {false, bad("a point lies in " + std::to_string(worst) +
                                             " rectangle interiors")};

    std::size_t third_ok = 0;
    for (const PartitionPiece& p : pieces) third_ok += p.middle_third_ok ? 1 : 0;
    rep.middle_third_fraction =
        pieces.empty() ? 1.0 : static_cast<double>(third_ok) / pieces.size();
    return rep;
}

}  // namespace sublog
