#ifndef SUBLOG_POTENTIAL_HPP
#define SUBLOG_POTENTIAL_HPP

#include <optional>
#include <string>
#include <vector>

#include "sublog/measure.hpp"

namespace sublog {

/// Where a zero of the assembled function came from.
enum class ZeroSource { HeavyTail, IntegerAtom, Pair };

struct Zero {
    Complex position;  // never 0
    int multiplicity = 1;
    ZeroSource source = ZeroSource::Pair;
};

/// Zero set of a genus-0 product f(z) = prod (1 - z/a)^k. Positions are
/// nonzero and multiplicities positive.
class ZeroSet {
public:
    ZeroSet() = default;
    explicit ZeroSet(std::vector<Zero> zeros);

    const std::vector<Zero>& zeros() const { return zeros_; }
    bool empty() const { return zeros_.empty(); }
    std::size_t size() const { return zeros_.size(); }
    long long total_multiplicity() const;

    /// Merge coincident positions (summing multiplicities), sort by
    /// (modulus, angle, re, im).
    ZeroSet canonicalized() const;

    /// The counting measure: one atom of mass = multiplicity per zero.
    Measure as_measure() const;

private:
    std::vector<Zero> zeros_;
};

ZeroSet concat(const ZeroSet& a, const ZeroSet& b);

/// u(z) = sum over atoms of mass * log|1 - z/zeta|, accumulated by a fixed
/// pairwise tree. nullopt if z collides with an atom (relative guard
/// 1e-12): a log pole, reported as a condition rather than -inf.
std::optional<double> log_potential(const Measure& m, Complex z);

/// log|f(z)| = sum of multiplicity * log|1 - z/a|; same guard as above.
std::optional<double> log_modulus(const ZeroSet& f, Complex z);

}  // namespace sublog

#endif
