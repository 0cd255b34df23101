#include "sublog/pipeline.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "sublog/metrics.hpp"

namespace sublog {

namespace {

// Mass-geometric-mean radius, the same averaging the tail blocks use.
double geometric_radius(const Measure& m) {
    long double acc = 0.0L;
    const long double total = static_cast<long double>(m.total_mass());
    for (const Atom& a : m.atoms())
        acc += static_cast<long double>(a.mass) *
               static_cast<long double>(std::log(std::abs(a.position)));
    return std::exp(static_cast<double>(acc / total));
}

}  // namespace

ZeroSet assemble_approximant(const AnnularDecomposition& dec,
                             const HeavyTailSchedule& sched,
                             const std::vector<AtomPair>& pairs,
                             const ZeroSet& tilde_zeros) {
    std::vector<Zero> zeros;

    const ZeroSet f2 = build_f2(sched);
    zeros.insert(zeros.end(), f2.zeros().begin(), f2.zeros().end());

    // Close out the truncated tail: the sub-5 remainder becomes one zero of
    // the rounded multiplicity at the remainder's geometric radius, so the
    // counting functions stay aligned at the outer edge of the run.
    const double rem_mass = sched.remainder.total_mass();
    const long long rem_mult = std::llround(rem_mass);
    if (rem_mult >= 1)
        zeros.push_back(Zero{Complex(geometric_radius(sched.remainder), 0.0),
                             static_cast<int>(rem_mult), ZeroSource::HeavyTail});

    zeros.insert(zeros.end(), tilde_zeros.zeros().begin(), tilde_zeros.zeros().end());
    for (const AtomPair& p : pairs) {
        zeros.push_back(Zero{p.zeta1, 1, ZeroSource::Pair});
        zeros.push_back(Zero{p.zeta2, 1, ZeroSource::Pair});
    }
    ZeroSet f((std::vector<Zero>(zeros)));

    const double consumed = 5.0 * static_cast<double>(sched.blocks.size()) + rem_mass +
                            static_cast<double>(tilde_zeros.total_multiplicity()) +
                            2.0 * static_cast<double>(pairs.size());
    if (f.total_multiplicity() != std::llround(consumed))
        throw std::logic_error(
            "assemble_approximant: zero count " + std::to_string(f.total_multiplicity()) +
            " != rounded consumed mass " + std::to_string(std::llround(consumed)));
    const double dec_total =
        dec.mu1_total().total_mass() + dec.mu2_total().total_mass();
    if (std::abs(consumed - dec_total) > 1e-6 * std::max(1.0, dec_total))
        throw std::logic_error("assemble_approximant: consumed mass " +
                               std::to_string(consumed) +
                               " disagrees with decomposition mass " +
                               std::to_string(dec_total));
    return f;
}

PipelineResult approximate(const Measure& input, const PipelineOptions& opts) {
    PipelineResult out;
    out.origin = Complex(0.0, 0.0);

    const Measure canon = input.canonicalized();
    if (canon.empty()) {
        out.shifted = canon;
        return out;
    }

    if (opts.auto_origin_shift && !verify_generic_origin(canon, Complex(0.0, 0.0))) {
        out.origin = generic_origin_shift(canon, opts.origin_shift_radius, opts.seed);
    }
    out.shifted = translate(canon, out.origin);

    out.normalized = normalize_origin(out.shifted);
    out.dec = annular_split(out.normalized.remainder, opts.psi, opts.R1);

    std::vector<AtomPair> all_pairs;
    std::vector<Zero> all_tilde;
    for (std::size_t k = 0; k < out.dec.stages.size(); ++k) {
        const AnnulusStage& stage = out.dec.stages[k];
        StageArtifacts art;
        art.stage_index = k;

        const IntegerAtomExtraction ext = extract_integer_atoms(stage.mu1);
        art.integer_zeros = ext.zeros;
        all_tilde.insert(all_tilde.end(), ext.zeros.zeros().begin(),
                         ext.zeros.zeros().end());

        const double rest_mass = ext.remainder.total_mass();
        if (rest_mass > 0.5) {  // even integer, so anything real is >= 2
            LogRectangle rect;
            rect.sigma_min = std::log(stage.R);
            rect.sigma_max = std::log(stage.psi_R);
            rect.t_min = 0.0;
            rect.t_max = kTwoPi;
            art.pieces =
                partition_mass_two(rect, to_log_coords(ext.remainder), opts.partition);
            for (const PartitionPiece& piece : art.pieces) {
                art.pairs.push_back(atomize_pair(piece));
                all_pairs.push_back(art.pairs.back());
            }
        }
        out.stages.push_back(std::move(art));
    }

    out.sched = heavy_tail_schedule(out.dec.mu2_total());
    out.f = assemble_approximant(out.dec, out.sched, all_pairs, ZeroSet(std::move(all_tilde)));
    out.consumed_mass = out.normalized.remainder.total_mass();
    return out;
}

CountingCheck verify_counting_agreement(const PipelineResult& result) {
    CountingCheck check;
    const Measure& mu = result.normalized.remainder;
    if (result.dec.stages.empty()) return check;

    std::vector<double> scan;
    for (const Atom& a : mu.atoms()) scan.push_back(std::abs(a.position));
    for (const Zero& z : result.f.zeros()) scan.push_back(std::abs(z.position));
    const double first_edge = result.dec.stages.front().R_next;

    // Reconstructed zero radii come from exp of log-space means and can
    // land a few ulps off the atom radii they shadow; read both counting
    // functions just past each radius so that cannot register as a gap.
    const double kSlack = 1e-9;
    auto gap_at = [&](double r) {
        const double rr = r * (1.0 + kSlack);
        return std::abs(counting_function(mu, rr) - counting_function(result.f, rr));
    };

    for (double r : scan) {
        if (r < first_edge) continue;
        check.max_gap = std::max(check.max_gap, gap_at(r));
    }
    for (std::size_t k = 1; k < result.dec.stages.size(); ++k) {
        const double gap = gap_at(result.dec.stages[k].R);
        check.max_gap_at_stages = std::max(check.max_gap_at_stages, gap);
        check.max_gap = std::max(check.max_gap, gap);
    }
    check.ok_global = check.max_gap <= 7.0 + 1e-9;
    check.ok_at_stages = check.max_gap_at_stages <= 2.0 + 1e-9;
    return check;
}

}  // namespace sublog
