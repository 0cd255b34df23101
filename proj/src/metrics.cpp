#include "sublog/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <random>
#include <stdexcept>

namespace sublog {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_radius(double r, const char* who) {
    if (!std::isfinite(r) || r < 0.0)
        throw std::invalid_argument(std::string(who) + ": radius must be finite and >= 0");
}

// Net signed weights after cancelling measure atoms against zero
// multiplicities at coincident positions. Keeps the u - log|f| evaluation
// exact where the two sides share support.
struct WeightedPoint {
    Complex pos;
    double w = 0.0;
};

std::vector<WeightedPoint> combined_sources(const Measure& m, const ZeroSet& f) {
    std::vector<WeightedPoint> pts;
    pts.reserve(m.size() + f.size());
    // Keep the canonical copies alive: atoms()/zeros() return views into them.
    const Measure cm = m.canonicalized();
    const ZeroSet cf = f.canonicalized();
    for (const Atom& a : cm.atoms()) pts.push_back({a.position, a.mass});
    for (const Zero& z : cf.zeros()) {
        bool merged = false;
        for (WeightedPoint& p : pts) {
            if (p.pos == z.position) {
                p.w -= static_cast<double>(z.multiplicity);
                merged = true;
                break;
            }
        }
        if (!merged) pts.push_back({z.position, -static_cast<double>(z.multiplicity)});
    }
    std::erase_if(pts, [](const WeightedPoint& p) { return p.w == 0.0; });
    return pts;
}

// Signed potential sum over weighted points; nullopt on collision with any
// carrying point (guard 1e-12 relative).
std::optional<double> signed_potential(const std::vector<WeightedPoint>& pts,
                                       Complex z) {
    std::vector<double> terms;
    terms.reserve(pts.size());
    for (const WeightedPoint& p : pts) {
        const double dist = std::abs(z - p.pos);
        if (dist <= 1e-12 * std::abs(p.pos)) return std::nullopt;
        terms.push_back(p.w * std::log(std::abs(1.0 - z / p.pos)));
    }
    return pairwise_sum(terms);
}

}  // namespace

// ===== counting =====

double counting_function(const Measure& m, double r) {
    check_radius(r, "counting_function");
    std::vector<double> masses;
    masses.reserve(m.size());
    for (const Atom& a : m.atoms())
        if (std::abs(a.position) <= r) masses.push_back(a.mass);
    return exact_sum(masses);
}

double counting_function(const ZeroSet& f, double r) {
    return counting_function(f.as_measure(), r);
}

double integrated_counting(const Measure& m, double r) {
    check_radius(r, "integrated_counting");
    std::vector<double> terms;
    terms.reserve(m.size());
    for (const Atom& a : m.atoms()) {
        const double mod = std::abs(a.position);
        if (mod == 0.0)
            throw std::domain_error("integrated_counting: mass at the origin");
        if (mod <= r) terms.push_back(a.mass * std::log(r / mod));
    }
    return pairwise_sum(terms);
}

double integrated_counting(const ZeroSet& f, double r) {
    return integrated_counting(f.as_measure(), r);
}

// ===== circle means =====

namespace {

// Trapezoid error for the circle mean of sum m_j log|1 - r e^{i t}/a_j|:
// the integrand's Fourier modes decay like q^|k|/|k| with
// q = min(r/|a|, |a|/r), and an N-node rule only misses modes k = lN.
double trapezoid_bound(const std::vector<std::pair<double, double>>& mass_q, int n) {
    long double b = 0.0L;
    for (const auto& [mass, q] : mass_q) {
        if (q >= 1.0) return kInf;
        const long double qn = std::exp(static_cast<long double>(n) * std::log((long double)q));
        if (qn >= 1.0L) return kInf;
        b += static_cast<long double>(mass) * qn / (1.0L - qn);
    }
    return static_cast<double>(2.0L * b / static_cast<long double>(n));
}

CircleMeanResult circle_mean_impl(const Measure& m, double r, int nodes, double tol) {
    check_radius(r, "circle_mean");
    if (!(r > 0.0)) throw std::invalid_argument("circle_mean: radius must be positive");
    if (nodes < 4) throw std::invalid_argument("circle_mean: needs at least 4 nodes");
    if (!(tol > 0.0)) throw std::invalid_argument("circle_mean: tolerance must be positive");
    CircleMeanResult out;
    if (m.empty()) {
        out.nodes_used = nodes;
        return out;
    }

    std::vector<std::pair<double, double>> mass_q;
    mass_q.reserve(m.size());
    for (const Atom& a : m.atoms()) {
        const double mod = std::abs(a.position);
        if (mod == 0.0) throw std::domain_error("circle_mean: mass at the origin");
        mass_q.emplace_back(a.mass, std::min(r / mod, mod / r));
    }

    int n = nodes;
    constexpr int kCap = 1 << 22;
    while (n < kCap && trapezoid_bound(mass_q, n) > tol) n *= 2;
    out.error_bound = trapezoid_bound(mass_q, n);
    out.nodes_used = n;
    out.converged = out.error_bound <= tol;

    // Golden-fraction node offset keeps the grid off atom arguments; on the
    // rare exact collision, slide the offset and try again.
    for (int attempt = 0; attempt < 8; ++attempt) {
        const double off = std::fmod(0.38196601125010515 + 0.1234567 * attempt, 1.0);
        std::vector<double> vals;
        vals.reserve(static_cast<std::size_t>(n));
        bool ok = true;
        for (int i = 0; i < n && ok; ++i) {
            const double th = (i + off) * (kTwoPi / n);
            const auto u = log_potential(m, std::polar(r, th));
            if (!u) {
                ok = false;
                break;
            }
            vals.push_back(*u);
        }
        if (ok) {
            out.value = pairwise_sum(vals) / n;
            return out;
        }
    }
    throw std::runtime_error("circle_mean: could not place nodes off the atoms");
}

}  // namespace

CircleMeanResult circle_mean(const Measure& m, double r, int nodes, double tol) {
    return circle_mean_impl(m, r, nodes, tol);
}

CircleMeanResult circle_mean(const ZeroSet& f, double r, int nodes, double tol) {
    return circle_mean_impl(f.as_measure(), r, nodes, tol);
}

double jensen_residual(const Measure& m, double r, int nodes) {
    const CircleMeanResult mean = circle_mean(m, r, nodes);
    return mean.value - integrated_counting(m, r);
}

// ===== sup on circle =====

double sup_on_circle(const Measure& m, double r, int nodes) {
    check_radius(r, "sup_on_circle");
    if (m.empty()) return 0.0;
    if (nodes < 8) throw std::invalid_argument("sup_on_circle: needs at least 8 nodes");

    const auto eval = [&](double th) -> double {
        const auto u = log_potential(m, std::polar(r, th));
        return u ? *u : -kInf;  // collisions sit at log poles, never the max
    };

    const double h = kTwoPi / nodes;
    std::vector<double> vals(static_cast<std::size_t>(nodes));
    for (int i = 0; i < nodes; ++i) vals[static_cast<std::size_t>(i)] = eval(i * h);

    double best = -kInf;
    for (int i = 0; i < nodes; ++i) {
        const double vm = vals[static_cast<std::size_t>((i + nodes - 1) % nodes)];
        const double v0 = vals[static_cast<std::size_t>(i)];
        const double vp = vals[static_cast<std::size_t>((i + 1) % nodes)];
        best = std::max(best, v0);
        if (v0 < vm || v0 < vp || !std::isfinite(vm) || !std::isfinite(vp)) continue;
        // One parabolic step through the three samples around the local max.
        const double denom = vm - 2.0 * v0 + vp;
        if (denom >= 0.0) continue;
        double shift = 0.5 * (vm - vp) / denom;
        shift = std::clamp(shift, -1.0, 1.0);
        best = std::max(best, eval(i * h + shift * h));
    }
    return best;
}

// ===== L1 disk error =====

namespace {

// |t| < h integral of |log| t ||, closed form, both branches of h vs 1.
double log_disk_integral(double h) {
    if (h <= 0.0) return 0.0;
    const double pi = 3.14159265358979323846;
    if (h <= 1.0) return pi * h * h * (0.5 - std::log(h));
    return pi * h * h * std::log(h) - pi * h * h / 2.0 + pi;
}

struct Cell {
    double r_lo, r_hi, th_lo, th_hi;
    double value = 0.0;
    double err = 0.0;
    std::vector<int> sing;  // indices of sources inside the cell

    double dr() const { return r_hi - r_lo; }
    double arc() const { return 0.5 * (r_lo + r_hi) * (th_hi - th_lo); }
    double area() const {
        return 0.5 * (r_hi * r_hi - r_lo * r_lo) * (th_hi - th_lo);
    }
    double diameter() const {
        // Chord of the outer arc plus radial extent bounds the cell diameter.
        const double chord = 2.0 * r_hi * std::sin(std::min(0.5 * (th_hi - th_lo), kTwoPi / 4));
        return std::hypot(dr(), chord);
    }
};

struct Integrand {
    std::vector<WeightedPoint> pts;
    double alpha = 0.0;

    std::optional<double> operator()(Complex z) const {
        const auto base = signed_potential(pts, z);
        if (!base) return std::nullopt;
        if (alpha == 0.0) return std::abs(*base);
        const double mod = std::abs(z);
        if (mod == 0.0) return std::nullopt;
        return std::abs(*base - alpha * std::log(mod));
    }

    // Same, with the sources listed in `skip` left out; used to gauge the
    // regular part of a singular cell.
    double regular_part(Complex z, const std::vector<int>& skip, bool skip_alpha) const {
        double acc = 0.0;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (std::find(skip.begin(), skip.end(), static_cast<int>(i)) != skip.end())
                continue;
            const double dist = std::abs(z - pts[i].pos);
            if (dist <= 1e-12 * std::abs(pts[i].pos)) return kInf;
            acc += pts[i].w * std::log(std::abs(1.0 - z / pts[i].pos));
        }
        if (alpha != 0.0 && !skip_alpha) {
            const double mod = std::abs(z);
            if (mod == 0.0) return kInf;
            acc -= alpha * std::log(mod);
        }
        return std::abs(acc);
    }
};

constexpr double kGl2Node = 0.57735026918962576;  // 1/sqrt(3)
constexpr double kGl4Node[2] = {0.33998104358485626, 0.86113631159405258};
constexpr double kGl4Weight[2] = {0.65214515486254614, 0.34785484513745386};

// Tensor Gauss-Legendre of g(r e^{i th}) * r over the cell; nullopt when a
// node collides with a source.
template <int kOrder>
std::optional<double> gauss_cell(const Integrand& g, const Cell& c) {
    double rn[kOrder], rw[kOrder], tn[kOrder], tw[kOrder];
    const double rc = 0.5 * (c.r_lo + c.r_hi), rh = 0.5 * c.dr();
    const double tc = 0.5 * (c.th_lo + c.th_hi), th = 0.5 * (c.th_hi - c.th_lo);
    if constexpr (kOrder == 2) {
        rn[0] = rc - rh * kGl2Node;
        rn[1] = rc + rh * kGl2Node;
        tn[0] = tc - th * kGl2Node;
        tn[1] = tc + th * kGl2Node;
        rw[0] = rw[1] = rh;
        tw[0] = tw[1] = th;
    } else {
        rn[0] = rc - rh * kGl4Node[1];
        rn[1] = rc - rh * kGl4Node[0];
        rn[2] = rc + rh * kGl4Node[0];
        rn[3] = rc + rh * kGl4Node[1];
        tn[0] = tc - th * kGl4Node[1];
        tn[1] = tc - th * kGl4Node[0];
        tn[2] = tc + th * kGl4Node[0];
        tn[3] = tc + th * kGl4Node[1];
        rw[0] = rw[3] = rh * kGl4Weight[1];
        rw[1] = rw[2] = rh * kGl4Weight[0];
        tw[0] = tw[3] = th * kGl4Weight[1];
        tw[1] = tw[2] = th * kGl4Weight[0];
    }
    double acc = 0.0;
    for (int a = 0; a < kOrder; ++a)
        for (int b = 0; b < kOrder; ++b) {
            const auto v = g(std::polar(rn[a], tn[b]));
            if (!v) return std::nullopt;
            acc += rw[a] * tw[b] * *v * rn[a];
        }
    return acc;
}

// Closed-form control of a cell containing log singularities: each in-cell
// source contributes at most |w| (LogDiskInt(diam) + area (1 + |log|s||)),
// and the regular remainder at most its corner maximum times the area.
double singular_bound(const Integrand& g, const Cell& c) {
    const double h = c.diameter();
    const double area = c.area();
    double bound = 0.0;
    bool origin_term = false;
    for (int idx : c.sing) {
        if (idx < 0) {
            // The alpha log|z| term around the origin integrates exactly.
            const double a = std::abs(g.alpha);
            const double rr = std::max(std::abs(c.r_lo), std::abs(c.r_hi));
            // integral over r < rr of |log r| r dr dth within the cell's angle
            double radial;
            if (rr <= 1.0)
                radial = rr * rr * (0.25 - 0.5 * std::log(rr));
            else
                radial = 0.25 + 0.5 * rr * rr * std::log(rr) - 0.25 * (rr * rr - 1.0);
            bound += a * (c.th_hi - c.th_lo) * radial;
            origin_term = true;
        } else {
            const WeightedPoint& p = g.pts[static_cast<std::size_t>(idx)];
            const double mod = std::abs(p.pos);
            bound += std::abs(p.w) *
                     (log_disk_integral(h) + area * (1.0 + std::abs(std::log(mod))));
        }
    }
    // Regular remainder over the cell corners.
    double reg = 0.0;
    const double corners[4][2] = {{c.r_lo, c.th_lo}, {c.r_lo, c.th_hi},
                                  {c.r_hi, c.th_lo}, {c.r_hi, c.th_hi}};
    for (const auto& corner : corners) {
        const double v = g.regular_part(std::polar(corner[0], corner[1]), c.sing, origin_term);
        if (std::isfinite(v)) reg = std::max(reg, v);
    }
    return bound + 2.0 * reg * area;
}

void classify(Cell& c, const Integrand& g, double alpha) {
    c.sing.clear();
    for (std::size_t i = 0; i < g.pts.size(); ++i) {
        const Complex& p = g.pts[i].pos;
        const double mod = std::abs(p);
        if (mod < c.r_lo || mod > c.r_hi) continue;
        const double th = angle01(p);
        const bool inside = (th >= c.th_lo && th <= c.th_hi) ||
                            (th + kTwoPi >= c.th_lo && th + kTwoPi <= c.th_hi);
        if (inside) c.sing.push_back(static_cast<int>(i));
    }
    if (alpha != 0.0 && c.r_lo <= 0.0) c.sing.push_back(-1);
}

void evaluate_cell(Cell& c, const Integrand& g) {
    if (!c.sing.empty()) {
        c.value = 0.0;
        c.err = singular_bound(g, c);
        return;
    }
    const auto i2 = gauss_cell<2>(g, c);
    const auto i4 = gauss_cell<4>(g, c);
    if (!i2 || !i4) {
        // A node collided with a source just outside the detection box;
        // treat the cell as singular against every nearby source.
        c.value = 0.0;
        c.err = kInf;
        return;
    }
    c.value = *i4;
    c.err = std::abs(*i4 - *i2);
}

}  // namespace

L1Result l1_disk_error(const Measure& m, const ZeroSet& f, double R,
                       const QuadratureParams& quad, double alpha) {
    if (!(R > 0.0) || !std::isfinite(R))
        throw std::invalid_argument("l1_disk_error: R must be positive and finite");
    if (quad.initial_radial < 1 || quad.initial_angular < 1 || !(quad.rel_tol > 0.0))
        throw std::invalid_argument("l1_disk_error: bad quadrature parameters");

    Integrand g{combined_sources(m, f), alpha};

    const auto cmp = [](const Cell& a, const Cell& b) {
        if (a.err != b.err) return a.err < b.err;
        if (a.r_lo != b.r_lo) return a.r_lo < b.r_lo;
        return a.th_lo < b.th_lo;
    };
    std::priority_queue<Cell, std::vector<Cell>, decltype(cmp)> heap(cmp);

    double value = 0.0, err = 0.0;
    const auto push = [&](Cell c) {
        classify(c, g, alpha);
        evaluate_cell(c, g);
        value += c.value;
        err += c.err;
        heap.push(std::move(c));
    };

    for (int i = 0; i < quad.initial_radial; ++i)
        for (int j = 0; j < quad.initial_angular; ++j) {
            Cell c;
            c.r_lo = R * i / quad.initial_radial;
            c.r_hi = R * (i + 1) / quad.initial_radial;
            c.th_lo = kTwoPi * j / quad.initial_angular;
            c.th_hi = kTwoPi * (j + 1) / quad.initial_angular;
            push(c);
        }

    L1Result out;
    const double abs_floor = 1e-12 * R * R;
    while (err > std::max(quad.rel_tol * std::abs(value), abs_floor) &&
           static_cast<long long>(heap.size()) < quad.max_cells) {
        Cell c = heap.top();
        heap.pop();
        if (c.err <= 0.0) {
            heap.push(std::move(c));
            break;  // nothing left to improve
        }
        value -= c.value;
        err -= c.err;
        Cell left = c, right = c;
        if (c.dr() >= c.arc()) {
            const double mid = 0.5 * (c.r_lo + c.r_hi);
            left.r_hi = mid;
            right.r_lo = mid;
        } else {
            const double mid = 0.5 * (c.th_lo + c.th_hi);
            left.th_hi = mid;
            right.th_lo = mid;
        }
        push(std::move(left));
        push(std::move(right));
    }

    // Final deterministic accumulation over the surviving decomposition.
    std::vector<Cell> cells;
    cells.reserve(heap.size());
    while (!heap.empty()) {
        cells.push_back(heap.top());
        heap.pop();
    }
    std::sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) {
        if (a.r_lo != b.r_lo) return a.r_lo < b.r_lo;
        if (a.th_lo != b.th_lo) return a.th_lo < b.th_lo;
        return a.r_hi < b.r_hi;
    });
    std::vector<double> vals, errs;
    vals.reserve(cells.size());
    errs.reserve(cells.size());
    for (const Cell& c : cells) {
        vals.push_back(c.value);
        errs.push_back(c.err);
    }
    out.value = pairwise_sum(vals);
    out.error_bound = pairwise_sum(errs);
    out.cells = static_cast<long long>(cells.size());
    out.converged =
        out.error_bound <= std::max(quad.rel_tol * std::abs(out.value), abs_floor);
    return out;
}

MonteCarloL1 l1_disk_error_mc(const Measure& m, const ZeroSet& f, double R,
                              long long samples, std::uint64_t seed, double alpha) {
    if (!(R > 0.0) || samples <= 0)
        throw std::invalid_argument("l1_disk_error_mc: bad arguments");
    Integrand g{combined_sources(m, f), alpha};
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    long double acc = 0.0L, acc2 = 0.0L;
    long long kept = 0;
    for (long long i = 0; i < samples; ++i) {
        std::optional<double> v;
        for (int tries = 0; tries < 64 && !v; ++tries) {
            const double r = R * std::sqrt(unit(rng));
            const double th = kTwoPi * unit(rng);
            v = g(std::polar(r, th));
        }
        if (!v) continue;  // a measure-zero event 64 times in a row
        acc += *v;
        acc2 += static_cast<long double>(*v) * *v;
        ++kept;
    }
    MonteCarloL1 out;
    if (kept == 0) return out;
    const double area = kTwoPi / 2.0 * R * R;  // pi R^2
    const double mean = static_cast<double>(acc / kept);
    const double var =
        std::max(0.0L, acc2 / kept - static_cast<long double>(mean) * mean);
    out.value = area * mean;
    out.std_error = area * std::sqrt(static_cast<double>(var) / static_cast<double>(kept));
    return out;
}

DensityResult exceptional_set_density(const Measure& m, const ZeroSet& f, double K,
                                      const SlowlyVarying& psi, double R,
                                      long long samples, std::uint64_t seed) {
    if (!(R > 1.0))
        throw std::invalid_argument("exceptional_set_density: needs R > 1");
    if (samples <= 0)
        throw std::invalid_argument("exceptional_set_density: needs samples > 0");
    Integrand g{combined_sources(m, f), 0.0};
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    const int strata = static_cast<int>(std::min<long long>(64, samples));
    long double density = 0.0L, variance = 0.0L;
    long long exceed_total = 0, total = 0;
    for (int s = 0; s < strata; ++s) {
        const double area_lo = R * R * s / strata;
        const double area_hi = R * R * (s + 1) / strata;
        const long long n = samples / strata + (s < samples % strata ? 1 : 0);
        long long exceed = 0;
        for (long long i = 0; i < n; ++i) {
            const double r =
                std::sqrt(area_lo + unit(rng) * (area_hi - area_lo));
            const double th = kTwoPi * unit(rng);
            const auto v = g(std::polar(r, th));
            const double gate = K * psi.log_psi(std::max(1.0, r));
            // collisions sit on log poles: the gap is unbounded there
            if (!v || *v > gate) ++exceed;
        }
        const long double p = n > 0 ? static_cast<long double>(exceed) / n : 0.0L;
        density += p / strata;
        if (n > 0) variance += p * (1.0L - p) / (strata * (long double)strata * n);
        exceed_total += exceed;
        total += n;
    }
    DensityResult out;
    out.density = static_cast<double>(density);
    out.half_width = 1.96 * std::sqrt(static_cast<double>(variance));
    out.exceed = exceed_total;
    out.total = total;
    return out;
}

}  // namespace sublog
