#include "sublog/counterexample.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sublog {

std::vector<double> u_phi_radii(const UPhiSpec& spec) {
    if (spec.count < 1)
        throw std::invalid_argument("u_phi_radii: count must be >= 1");
    if (!(spec.r0 > 1.0) || !std::isfinite(spec.r0))
        throw std::invalid_argument("u_phi_radii: r0 must be finite and > 1");
    std::vector<double> radii;
    radii.reserve(static_cast<std::size_t>(spec.count));
    double r = spec.r0;
    for (int k = 0; k < spec.count; ++k) {
        radii.push_back(r);
        const double next = r * spec.phi(r);
        if (!(next > r * (1.0 + 1e-12)))
            throw std::domain_error("u_phi_radii: phi stalls, radii not increasing");
        if (!std::isfinite(next))
            throw std::domain_error("u_phi_radii: radii overflow");
        r = next;
    }
    return radii;
}

Measure build_u_phi(const UPhiSpec& spec) {
    std::vector<Atom> atoms;
    for (double r : u_phi_radii(spec)) atoms.push_back(Atom{Complex(r, 0.0), 0.5});
    return Measure(std::move(atoms));
}

ZeroSet best_rounding_zero_set(const std::vector<double>& radii) {
    std::vector<Zero> zeros;
    for (std::size_t i = 1; i < radii.size(); i += 2)
        zeros.push_back(Zero{Complex(radii[i], 0.0), 1, ZeroSource::Pair});
    return ZeroSet(std::move(zeros));
}

GapReport counting_gap_scan(const Measure& u, const ZeroSet& f, double alpha,
                            const std::vector<double>& r_grid) {
    if (alpha < 0.0 || alpha >= 1.0)
        throw std::invalid_argument("counting_gap_scan: alpha must be in [0, 1)");
    std::vector<double> scan = r_grid;
    for (const Atom& a : u.atoms()) scan.push_back(std::abs(a.position));
    for (const Zero& z : f.zeros()) scan.push_back(std::abs(z.position));
    std::sort(scan.begin(), scan.end());
    scan.erase(std::unique(scan.begin(), scan.end()), scan.end());
    std::erase_if(scan, [](double r) { return !(r > 0.0) || !std::isfinite(r); });

    GapReport rep;
    rep.alpha = alpha;
    for (double r : scan) {
        const double nu = counting_function(u, r);
        const double nf = counting_function(f, r);
        rep.r.push_back(r);
        rep.n_u.push_back(nu);
        rep.n_f.push_back(nf);
        rep.N_u.push_back(integrated_counting(u, r));
        rep.N_f.push_back(integrated_counting(f, r));
        const double diff = nu - nf;
        // half-integer lattice: 2*diff must be an integer
        if (std::abs(2.0 * diff - std::llround(2.0 * diff)) > 1e-9)
            rep.lattice_ok = false;
        if (std::abs(diff) > 1e-9 && std::abs(diff - 0.5) > 1e-9)
            rep.half_step_signature = false;
        if (std::abs(diff - alpha) > 0.5 + 1e-9) rep.violations.push_back(r);
    }
    return rep;
}

std::vector<ProbeResult> n_gap_growth(const Measure& u, const ZeroSet& f, double alpha,
                                      const SlowlyVarying& psi,
                                      const std::vector<std::pair<double, double>>& probes,
                                      double epsilon) {
    if (!(epsilon > 0.0) || !(epsilon < 0.5))
        throw std::invalid_argument("n_gap_growth: epsilon must be in (0, 1/2)");
    std::vector<ProbeResult> out;
    out.reserve(probes.size());
    for (const auto& [t_star, T_star] : probes) {
        if (!(0.0 < t_star && t_star <= T_star))
            throw std::invalid_argument("n_gap_growth: probe radii must satisfy 0 < t <= T");
        ProbeResult p;
        p.t_star = t_star;
        p.T_star = T_star;
        const auto gap_at = [&](double r) {
            return std::abs(integrated_counting(u, r) - integrated_counting(f, r) -
                            alpha * std::log(r));
        };
        p.gap_t = gap_at(t_star);
        p.gap_T = gap_at(T_star);
        p.threshold = (0.5 - alpha - epsilon) * psi.log_psi(t_star);
        p.activated = p.gap_t + p.gap_T >= p.threshold;
        out.push_back(p);
    }
    return out;
}

ErrorReport sharpness_ratio(const Measure& u, const ZeroSet& f, double alpha,
                            const SlowlyVarying& psi, const std::vector<double>& R_grid,
                            const QuadratureParams& quad) {
    if (R_grid.empty())
        throw std::invalid_argument("sharpness_ratio: empty radius grid");
    if (!std::is_sorted(R_grid.begin(), R_grid.end()))
        throw std::invalid_argument("sharpness_ratio: radius grid must be increasing");
    ErrorReport rep;
    for (double R : R_grid) {
        const L1Result res = l1_disk_error(u, f, R, quad, alpha);
        const double norm = R * R * psi.log_psi(R);
        rep.radii.push_back(R);
        rep.I.push_back(res.value);
        rep.norm.push_back(norm);
        rep.ratio.push_back(norm > 0.0 ? res.value / norm : 0.0);
        rep.quad_error.push_back(res.error_bound);
    }
    return rep;
}

Measure drop_first_radius_atom(const Measure& u) {
    const Measure canon = u.canonicalized();
    if (canon.empty())
        throw std::invalid_argument("drop_first_radius_atom: empty measure");
    std::vector<Atom> rest(canon.atoms().begin() + 1, canon.atoms().end());
    return Measure(std::move(rest));
}

}  // namespace sublog
