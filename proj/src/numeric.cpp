#include "sublog/numeric.hpp"

#include <stdexcept>

namespace sublog {

namespace {

double pairwise_rec(const double* xs, std::size_t n) {
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += xs[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_rec(xs, half) + pairwise_rec(xs + half, n - half);
}

}  // namespace

double pairwise_sum(std::span<const double> xs) {
    return pairwise_rec(xs.data(), xs.size());
}

double exact_sum(std::span<const double> xs) {
    __float128 acc = 0;
    for (double x : xs) acc += static_cast<__float128>(x);
    return static_cast<double>(acc);
}

MassSplit split_mass(double a, double want) {
    if (!(a > 0.0)) throw std::invalid_argument("split_mass: mass must be positive");
    if (want <= 0.0) return {0.0, a};
    if (want >= a) return {a, 0.0};
    if (want > a / 2) {
        // want in (a/2, a): a - want is exact by Sterbenz.
        return {want, a - want};
    }
    // want <= a/2: round hi first, then lo = a - hi is exact and
    // lo + hi == a bitwise; lo differs from want by at most one ulp of a.
    const double hi = a - want;
    return {a - hi, hi};
}

}  // namespace sublog
