#include "sublog/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

namespace sublog {

namespace {

constexpr double kMassTol = 1e-9;

void append_line(std::string& detail, const std::string& line) {
    if (!detail.empty()) detail += "\n";
    detail += line;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

NormalizeResult normalize_origin(const Measure& m) {
    NormalizeResult out;
    const Measure canon = m.canonicalized();
    const Measure in_disk = restrict_to(canon, Region(Disk{Complex(0.0, 0.0), 1.0}));
    const double disk_mass = in_disk.total_mass();
    if (disk_mass <= 0.0) {
        out.remainder = canon;
        return out;
    }
    long long N = static_cast<long long>(std::ceil(disk_mass - kMassTol));
    const long long budget =
        static_cast<long long>(std::floor(canon.total_mass() + kMassTol));
    N = std::min(N, budget);
    if (N <= 0) {
        // Too light to pull an integer out: leave the measure alone.
        out.remainder = canon;
        return out;
    }
    const QuantileSplit qs = split_at_radial_quantile(canon, static_cast<double>(N));
    out.correction.nu = qs.lower;
    out.correction.N = N;
    out.remainder = qs.upper;
    return out;
}

Measure AnnularDecomposition::mu1_total() const {
    Measure acc;
    for (const AnnulusStage& s : stages) acc = concat(acc, s.mu1);
    return acc;
}

Measure AnnularDecomposition::mu2_total() const {
    Measure acc;
    for (const AnnulusStage& s : stages) acc = concat(acc, s.mu2_part);
    return acc;
}

AnnularDecomposition annular_split(const Measure& m, const SlowlyVarying& psi,
                                   double R1) {
    AnnularDecomposition dec;
    const Measure canon = m.canonicalized();
    if (canon.empty()) {
        dec.R1 = std::max(R1, 0.0);
        return dec;
    }
    const double min_mod = *canon.min_modulus();
    if (R1 <= 0.0) R1 = min_mod;
    if (!(R1 >= 1.0))
        throw std::invalid_argument("annular_split: needs R1 >= 1 (normalize first)");
    if (min_mod < R1 * (1.0 - 1e-12))
        throw std::invalid_argument("annular_split: atoms below the starting radius");
    dec.R1 = R1;
    dec.truncation_radius = *canon.max_modulus();

    Measure remaining = canon;
    double R = R1;
    constexpr int kStageCap = 1000000;
    for (int k = 0; !remaining.empty(); ++k) {
        if (k >= kStageCap)
            throw std::runtime_error("annular_split: stage cap exceeded");
        const double psi_R = psi.Psi1(R);
        if (!(psi_R > R * (1.0 + 1e-15)))
            throw std::domain_error("annular_split: psi step does not advance");

        const Region annulus(AnnulusRegion{Complex(0.0, 0.0), 0.0, psi_R});
        const Measure inside = restrict_to(remaining, annulus);
        Measure outside = restrict_outside(remaining, annulus);

        AnnulusStage stage;
        stage.R = R;
        stage.psi_R = psi_R;

        const double m_in = inside.total_mass();
        double even = 2.0 * std::floor(m_in / 2.0 + kMassTol);
        if (even > m_in) even = m_in;  // only reachable through fp slop

        Measure rest = inside;
        if (even >= 2.0 - kMassTol) {
            const QuantileSplit qs = split_at_radial_quantile(inside, even);
            stage.mu1 = qs.lower;
            rest = qs.upper;
        }

        const double tail = rest.total_mass();
        if (tail >= 1.0 - kMassTol) {
            stage.R_next = psi_R;
            stage.mu2_part = rest;
        } else {
            // The annulus ran light: extend the tail outward until it picks
            // up one more unit of mass, or the measure ends first.
            const double beyond = outside.total_mass();
            if (beyond >= 1.0) {
                const QuantileSplit qs = split_at_radial_quantile(outside, 1.0);
                stage.mu2_part = concat(rest, qs.lower);
                stage.R_next = qs.cut;
                outside = qs.upper;
            } else {
                stage.mu2_part = concat(rest, outside);
                stage.R_next = outside.empty() ? psi_R
                                               : std::max(psi_R, *outside.max_modulus());
                outside = Measure();
            }
        }

        remaining = outside;
        stage.truncated = remaining.empty();
        R = stage.R_next;
        dec.stages.push_back(std::move(stage));
    }
    return dec;
}

DecompositionReport verify_decomposition(const AnnularDecomposition& dec,
                                         const Measure& input,
                                         const SlowlyVarying& psi) {
    DecompositionReport rep;
    const Measure canon = input.canonicalized();

    // Radial cumulative of the input, for the density condition.
    std::vector<double> radii;
    std::vector<double> cum;
    {
        radii.reserve(canon.size());
        cum.reserve(canon.size());
        __float128 acc = 0;
        for (const Atom& a : canon.atoms()) {
            acc += static_cast<__float128>(a.mass);
            const double r = std::abs(a.position);
            if (!radii.empty() && radii.back() == r) {
                cum.back() = static_cast<double>(acc);
            } else {
                radii.push_back(r);
                cum.push_back(static_cast<double>(acc));
            }
        }
    }
    const auto closed_disk_mass = [&](double r) -> double {
        const auto it = std::upper_bound(radii.begin(), radii.end(), r);
        if (it == radii.begin()) return 0.0;
        return cum[static_cast<std::size_t>(it - radii.begin()) - 1];
    };

    Measure reassembled;
    for (std::size_t i = 0; i < dec.stages.size(); ++i) {
        const AnnulusStage& s = dec.stages[i];
        const bool final_stage = (i + 1 == dec.stages.size());
        const std::string tag = "stage " + std::to_string(i + 1);

        const double m1 = s.mu1.total_mass();
        const double rounded = std::llround(m1);
        if (std::abs(m1 - rounded) > kMassTol ||
            (static_cast<long long>(rounded) % 2) != 0) {
            rep.even_mu1 = false;
            append_line(rep.detail, tag + ": even part has mass " + fmt(m1));
        }

        if (!final_stage) {
            const double lo = psi.Psi1(s.R);
            const double hi = psi.Psi(2, s.R);
            if (s.R_next < lo * (1.0 - 1e-9) || s.R_next > hi * (1.0 + 1e-9)) {
                rep.step_bounds = false;
                append_line(rep.detail, tag + ": R_next " + fmt(s.R_next) +
                                            " outside [" + fmt(lo) + ", " + fmt(hi) + "]");
            }
            const double t = s.mu2_part.total_mass();
            if (t < 1.0 - kMassTol || t > 2.0 + kMassTol) {
                rep.tail_mass_bounds = false;
                append_line(rep.detail, tag + ": tail mass " + fmt(t));
            }
            const double ring = closed_disk_mass(s.R * psi(s.R)) - closed_disk_mass(s.R);
            if (!(ring > 1.0)) {
                rep.density_condition = false;
                append_line(rep.detail, tag + ": input carries only " + fmt(ring) +
                                            " in (R, R psi(R)]");
            }
        }

        const auto in_band = [](const Measure& part, double lo, double hi) {
            for (const Atom& a : part.atoms()) {
                const double r = std::abs(a.position);
                if (r < lo * (1.0 - kMassTol) || r > hi * (1.0 + kMassTol)) return false;
            }
            return true;
        };
        if (!in_band(s.mu1, s.R, s.psi_R)) {
            rep.support_bounds = false;
            append_line(rep.detail, tag + ": even part leaves its annulus");
        }
        if (!in_band(s.mu2_part, s.R, std::max(s.R_next, s.psi_R))) {
            rep.support_bounds = false;
            append_line(rep.detail, tag + ": tail part leaves its annulus");
        }

        reassembled = concat(reassembled, s.mu1);
        reassembled = concat(reassembled, s.mu2_part);
    }

    if (!same_atoms(reassembled, canon, 0.0)) {
        rep.conserved = false;
        append_line(rep.detail, "stages do not reassemble the input");
    }
    return rep;
}

HeavyTailSchedule heavy_tail_schedule(const Measure& mu2) {
    HeavyTailSchedule out;
    Measure remaining = mu2.canonicalized();
    double prev_T = 0.0;
    double total = remaining.total_mass();
    while (total >= 5.0 - kMassTol) {
        const double target = std::min(5.0, total);
        const QuantileSplit qs = split_at_radial_quantile(remaining, target);

        HeavyTailBlock block;
        block.mu = qs.lower;
        block.T_lo = prev_T;

        // sup{R : cumulative(R) <= 5n}: if mass is left on the cut circle the
        // cumulative already exceeds 5n there; otherwise it stays flat until
        // the next support radius.
        bool straddle = false;
        for (const Atom& a : qs.upper.atoms()) {
            if (std::abs(a.position) == qs.cut) {
                straddle = true;
                break;
            }
            if (std::abs(a.position) > qs.cut) break;
        }
        if (straddle || qs.upper.empty())
            block.T_hi = qs.cut;
        else
            block.T_hi = *qs.upper.min_modulus();
        prev_T = block.T_hi;

        long double log_r = 0.0L;
        for (const Atom& a : block.mu.atoms())
            log_r += static_cast<long double>(a.mass) *
                     static_cast<long double>(std::log(std::abs(a.position)));
        block.r = std::exp(static_cast<double>(log_r / 5.0L));

        out.blocks.push_back(std::move(block));
        remaining = qs.upper;
        total = remaining.total_mass();
    }
    out.remainder = remaining;
    return out;
}

ZeroSet build_f2(const HeavyTailSchedule& sched, const SlowlyVarying* psi,
                 std::vector<TailSpacing>* spacing) {
    std::vector<Zero> zeros;
    zeros.reserve(sched.blocks.size());
    double prev_r = 0.0;
    for (const HeavyTailBlock& b : sched.blocks) {
        if (!(b.r > prev_r))
            throw std::domain_error("build_f2: block radii are not strictly increasing");
        prev_r = b.r;
        zeros.push_back(Zero{Complex(b.r, 0.0), 5, ZeroSource::HeavyTail});
    }
    if (spacing != nullptr) {
        spacing->clear();
        if (psi != nullptr && sched.blocks.size() >= 3) {
            for (std::size_t i = 1; i + 1 < sched.blocks.size(); ++i) {
                TailSpacing cert;
                cert.ratio = sched.blocks[i + 1].r / sched.blocks[i - 1].r;
                cert.psi_at_T = (*psi)(sched.blocks[i].T_hi);
                cert.satisfied = cert.ratio >= cert.psi_at_T * (1.0 - 1e-9);
                spacing->push_back(cert);
            }
        } else if (psi != nullptr && sched.blocks.size() == 2) {
            // two blocks leave only the adjacent gap to certify
            TailSpacing cert;
            cert.ratio = sched.blocks[1].r / sched.blocks[0].r;
            cert.psi_at_T = (*psi)(sched.blocks[0].T_hi);
            cert.satisfied = cert.ratio >= cert.psi_at_T * (1.0 - 1e-9);
            spacing->push_back(cert);
        }
    }
    return ZeroSet(std::move(zeros));
}

std::vector<TailStepCheck> verify_tail_schedule(const HeavyTailSchedule& sched,
                                                const SlowlyVarying& psi) {
    std::vector<TailStepCheck> out;
    if (sched.blocks.size() < 2) return out;
    const bool clamped_end = sched.remainder.empty();
    for (std::size_t i = 0; i + 1 < sched.blocks.size(); ++i) {
        if (clamped_end && i + 2 == sched.blocks.size()) break;
        TailStepCheck c;
        c.T = sched.blocks[i].T_hi;
        c.T_next = sched.blocks[i + 1].T_hi;
        c.lo = psi.Psi1(c.T);
        c.hi = psi.Psi(6, c.T);
        c.ok = c.T_next >= c.lo * (1.0 - 1e-9) && c.T_next <= c.hi * (1.0 + 1e-9);
        out.push_back(c);
    }
    return out;
}

IntegerAtomExtraction extract_integer_atoms(const Measure& mu1_stage) {
    IntegerAtomExtraction out;
    std::vector<Zero> zeros;
    std::vector<Atom> rest;
    const Measure canon = mu1_stage.canonicalized();
    for (const Atom& a : canon.atoms()) {
        if (a.mass >= 2.0 - kMassTol) {
            const double j = std::floor(a.mass / 2.0 + kMassTol);
            const double k = 2.0 * j;
            const double rem = a.mass - k;
            zeros.push_back(Zero{a.position, static_cast<int>(k), ZeroSource::IntegerAtom});
            if (rem > 1e-12 * std::max(1.0, a.mass)) rest.push_back(Atom{a.position, rem});
        } else {
            rest.push_back(a);
        }
    }
    out.zeros = ZeroSet(std::move(zeros));
    out.remainder = Measure(std::move(rest));
    return out;
}

}  // namespace sublog
