#ifndef SUBLOG_NUMERIC_HPP
#define SUBLOG_NUMERIC_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace sublog {

using Complex = std::complex<double>;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Angle of z normalized to [0, 2*pi).
inline double angle01(Complex z) {
    double a = std::arg(z);
    if (a < 0.0) a += kTwoPi;
    if (a >= kTwoPi) a = 0.0;
    return a;
}

/// Fixed-shape pairwise (tree) reduction. Deterministic for a given input
/// order, and much better conditioned than a left fold on long sums.
double pairwise_sum(std::span<const double> xs);

/// Sum of many doubles through a binary128 accumulator. Order-insensitive
/// in practice; used wherever mass accounting must reassemble exactly.
double exact_sum(std::span<const double> xs);

/// Splits a positive mass `a` into (lo, hi) with lo ~= want and the
/// guarantee lo + hi == a in floating point (Sterbenz pairing).
struct MassSplit {
    double lo;
    double hi;
};
MassSplit split_mass(double a, double want);

}  // namespace sublog

#endif
