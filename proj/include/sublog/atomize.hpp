#ifndef SUBLOG_ATOMIZE_HPP
#define SUBLOG_ATOMIZE_HPP

#include <optional>

#include "sublog/partition.hpp"

namespace sublog {

/// Log-plane image of a measure: atom at zeta = exp(omega) maps to omega =
/// log|zeta| + i * arg(zeta) with the angle taken in [0, 2*pi). Masses are
/// untouched. Atoms at 0 are rejected.
Measure to_log_coords(const Measure& m);

/// Inverse of to_log_coords on positions.
Complex from_log_point(Complex omega);

/// Two unit atoms replacing a mass-2 piece, chosen so that first and second
/// complex moments of the piece measure are preserved:
///   omega1 + omega2   = integral of omega d nu,
///   omega1^2 + omega2^2 = integral of omega^2 d nu.
struct AtomPair {
    Complex omega1, omega2;   // log-plane pair, lexicographic order
    Complex zeta1, zeta2;     // exp(omega_j), the zero positions
    Complex omega_center;     // half the first moment
    double d = 0.0;           // diameter of the piece rectangle
    Measure nu;               // the piece measure (log plane)
    LogRectangle rect;
};

/// Solves the quadratic x^2 - S x + P = 0 with S the first moment and
/// P = (S^2 - Q)/2, Q the second moment. Requires piece mass 2 within 1e-9.
AtomPair atomize_pair(const PartitionPiece& piece);

/// Local defect of the pair surrogate at z (plane coordinates):
///   integral of log|1 - z e^{-omega}| d nu
///     - log|1 - z e^{-omega1}| - log|1 - z e^{-omega2}|.
/// nullopt when z collides with a source or pair point (relative guard
/// 1e-12), instead of producing an infinity.
std::optional<double> delta_term(const AtomPair& pair, Complex z);

}  // namespace sublog

#endif
