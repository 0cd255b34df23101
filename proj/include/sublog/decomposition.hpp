#ifndef SUBLOG_DECOMPOSITION_HPP
#define SUBLOG_DECOMPOSITION_HPP

#include <optional>
#include <string>
#include <vector>

#include "sublog/measure.hpp"
#include "sublog/potential.hpp"
#include "sublog/slowly_varying.hpp"

namespace sublog {

/// Integer-mass cap removed near the origin so the remainder starts beyond
/// modulus 1. The potential of `nu` is added back verbatim when comparing
/// against the original measure.
struct OriginCorrection {
    Measure nu;       // empty when no correction was needed
    long long N = 0;  // nu's (integer) mass
};

struct NormalizeResult {
    Measure remainder;
    OriginCorrection correction;
};

/// Splits off the smallest integer cap that empties the closed unit disk,
/// consuming atoms radially inward-out and splitting the boundary atom.
/// When the measure is too light to reach that integer, the largest
/// achievable integer cap is taken instead.
NormalizeResult normalize_origin(const Measure& m);

/// One step of the annular induction on [R_k, R_k * psi(R_k)].
struct AnnulusStage {
    double R = 0.0;        // R_k
    double psi_R = 0.0;    // R_k * psi(R_k), outer edge of Q_k
    double R_next = 0.0;   // R_{k+1}
    Measure mu1;           // even-mass part, supported in Q_k
    Measure mu2_part;      // tail part, supported in [R_k, R_{k+1}]
    bool truncated = false;  // final stage cut short by the last atom
};

struct AnnularDecomposition {
    std::vector<AnnulusStage> stages;
    std::optional<OriginCorrection> origin_correction;
    double R1 = 0.0;
    double truncation_radius = 0.0;  // outermost support modulus consumed

    Measure mu1_total() const;
    Measure mu2_total() const;
};

/// Runs the induction until the measure is exhausted. Preconditions: all
/// atoms have modulus >= R1 > 1. Each stage takes the even quantile part of
/// the mass found in Q_k as mu1; the sub-2 leftover joins the tail, topped
/// up to mass 1 from beyond Q_k when the annulus ran light (the
/// mass-density condition check lives in verify_decomposition, not here).
AnnularDecomposition annular_split(const Measure& m, const SlowlyVarying& psi,
                                   double R1 = 0.0);

struct DecompositionReport {
    bool even_mu1 = true;              // each mu1 stage mass in 2Z>=0
    bool step_bounds = true;           // Psi1(R_k) <= R_{k+1} <= Psi2(R_k)
    bool support_bounds = true;        // stage supports inside their annuli
    bool tail_mass_bounds = true;      // per-stage tail mass in [1, 2]
    bool conserved = true;             // stages re-add to the split input
    /// Input-side density check mass((R, R psi(R)]) > 1 at stage starts;
    /// reported for warnings but not part of all_pass, since it grades the
    /// input rather than the construction.
    bool density_condition = true;
    std::string detail;
    bool all_pass() const {
        return even_mu1 && step_bounds && support_bounds && tail_mass_bounds && conserved;
    }
};

/// Checks the stage properties; the final truncated stage is exempt from
/// the tail-mass and step bounds.
DecompositionReport verify_decomposition(const AnnularDecomposition& dec,
                                         const Measure& input,
                                         const SlowlyVarying& psi);

/// Tail regrouped into mass-5 radial blocks. T_n is where the cumulative
/// radial tail mass first exceeds 5n (sup convention); block n lives on
/// [T_{n-1}, T_n] and carries exactly mass 5. The sub-5 leftover is kept as
/// `remainder`.
struct HeavyTailBlock {
    Measure mu;        // mass exactly 5
    double T_lo = 0.0;  // T_{n-1} (0 for the first block)
    double T_hi = 0.0;  // T_n
    double r = 0.0;     // zero radius: log r = (1/5) integral of log|zeta| d mu
};

struct HeavyTailSchedule {
    std::vector<HeavyTailBlock> blocks;
    Measure remainder;  // total mass < 5
};

HeavyTailSchedule heavy_tail_schedule(const Measure& mu2);

/// Quintuple zeros at the block radii. Also verifies r is strictly
/// increasing across blocks (throws std::domain_error otherwise) and
/// records the spacing certificate r_{n+1}/r_{n-1} vs psi(T_n) when psi is
/// given.
struct TailSpacing {
    double ratio = 0.0;      // r_{n+1} / r_{n-1}
    double psi_at_T = 0.0;   // psi(T_n)
    bool satisfied = true;   // ratio >= psi_at_T
};
ZeroSet build_f2(const HeavyTailSchedule& sched, const SlowlyVarying* psi = nullptr,
                 std::vector<TailSpacing>* spacing = nullptr);

/// Step certificates Psi_1(T_n) <= T_{n+1} <= Psi_6(T_n) between
/// consecutive blocks. When the schedule consumed the entire tail, the last
/// step is skipped: its T_hi is clamped to the support edge instead of the
/// true supremum, so the bound does not apply.
struct TailStepCheck {
    double T = 0.0, T_next = 0.0;
    double lo = 0.0, hi = 0.0;  // Psi_1(T), Psi_6(T)
    bool ok = true;
};
std::vector<TailStepCheck> verify_tail_schedule(const HeavyTailSchedule& sched,
                                                const SlowlyVarying& psi);

/// Pulls the largest even integer out of every atom with mass >= 2,
/// emitting it as a zero with that multiplicity; what remains has all point
/// masses < 2 and even total whenever the input total was even.
struct IntegerAtomExtraction {
    ZeroSet zeros;
    Measure remainder;
};
IntegerAtomExtraction extract_integer_atoms(const Measure& mu1_stage);

}  // namespace sublog

#endif
