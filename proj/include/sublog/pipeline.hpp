#ifndef SUBLOG_PIPELINE_HPP
#define SUBLOG_PIPELINE_HPP

#include <cstdint>
#include <vector>

#include "sublog/atomize.hpp"
#include "sublog/decomposition.hpp"
#include "sublog/measure.hpp"
#include "sublog/partition.hpp"
#include "sublog/potential.hpp"
#include "sublog/slowly_varying.hpp"

namespace sublog {

struct PipelineOptions {
    explicit PipelineOptions(SlowlyVarying psi_fn) : psi(std::move(psi_fn)) {}

    SlowlyVarying psi;
    double R1 = 0.0;  // 0: start at the first atom modulus
    /// When set and the raw origin fails the line/circle genericity check,
    /// sample a nearby generic origin and translate the measure first.
    bool auto_origin_shift = false;
    double origin_shift_radius = 0.5;
    std::uint64_t seed = 20240901;
    PartitionOptions partition;
};

/// Everything produced for one annulus: integer-atom zeros pulled out of
/// mu1, the mass-2 partition of what remained (in log coordinates), and the
/// moment-matched pair per piece.
struct StageArtifacts {
    std::size_t stage_index = 0;
    ZeroSet integer_zeros;
    std::vector<PartitionPiece> pieces;
    std::vector<AtomPair> pairs;
};

struct PipelineResult {
    Complex origin;     // generic origin used (0 when no shift was needed)
    Measure shifted;    // input translated so `origin` is 0
    NormalizeResult normalized;
    AnnularDecomposition dec;
    HeavyTailSchedule sched;
    std::vector<StageArtifacts> stages;
    ZeroSet f;  // assembled approximant, in shifted coordinates
    double consumed_mass = 0.0;
};

/// Union of the tail zeros (quintuple zeros at block radii plus one rounded
/// zero closing out the sub-5 truncation remainder), the integer-atom
/// zeros, and one simple zero per pair atom. Enforces the exact accounting
/// law: total multiplicity == round(mass consumed), and consumed mass ==
/// decomposition mass; violations throw std::logic_error since they can
/// only come from a broken pipeline.
ZeroSet assemble_approximant(const AnnularDecomposition& dec,
                             const HeavyTailSchedule& sched,
                             const std::vector<AtomPair>& pairs,
                             const ZeroSet& tilde_zeros);

/// Full run: optional origin shift, origin normalization, annular split,
/// per-stage integer extraction + partition + atomization, heavy-tail
/// schedule, assembly.
PipelineResult approximate(const Measure& input, const PipelineOptions& opts);

/// Counting-function agreement between the measure fed to the
/// decomposition and the assembled zero set, scanned at every jump radius
/// beyond the first annulus and at the stage boundaries R_k.
struct CountingCheck {
    double max_gap = 0.0;           // over jump radii beyond the first annulus
    double max_gap_at_stages = 0.0;  // over stage boundaries R_k, k >= 2
    bool ok_global = true;           // max_gap <= 7
    bool ok_at_stages = true;        // max_gap_at_stages <= 2
};
CountingCheck verify_counting_agreement(const PipelineResult& result);

}  // namespace sublog

#endif
