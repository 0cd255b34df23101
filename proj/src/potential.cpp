#include "sublog/potential.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>

namespace sublog {

namespace {

auto zero_key(const Zero& z) {
    return std::make_tuple(std::abs(z.position), angle01(z.position), z.position.real(),
                           z.position.imag());
}

}  // namespace

ZeroSet::ZeroSet(std::vector<Zero> zeros) : zeros_(std::move(zeros)) {
    for (const Zero& z : zeros_) {
        if (z.position == Complex(0.0, 0.0) || !std::isfinite(z.position.real()) ||
            !std::isfinite(z.position.imag()))
            throw std::invalid_argument("ZeroSet: positions must be finite and nonzero");
        if (z.multiplicity <= 0)
            throw std::invalid_argument("ZeroSet: multiplicities must be positive");
    }
}

long long ZeroSet::total_multiplicity() const {
    long long n = 0;
    for (const Zero& z : zeros_) n += z.multiplicity;
    return n;
}

ZeroSet ZeroSet::canonicalized() const {
    std::vector<Zero> sorted = zeros_;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const Zero& a, const Zero& b) { return zero_key(a) < zero_key(b); });
    std::vector<Zero> merged;
    for (const Zero& z : sorted) {
        if (!merged.empty() && merged.back().position == z.position &&
            merged.back().source == z.source)
            merged.back().multiplicity += z.multiplicity;
        else
            merged.push_back(z);
    }
    ZeroSet out;
    out.zeros_ = std::move(merged);
    return out;
}

Measure ZeroSet::as_measure() const {
    std::vector<Atom> atoms;
    atoms.reserve(zeros_.size());
    for (const Zero& z : zeros_)
        atoms.push_back({z.position, static_cast<double>(z.multiplicity)});
    return Measure(std::move(atoms));
}

ZeroSet concat(const ZeroSet& a, const ZeroSet& b) {
    std::vector<Zero> zs = a.zeros();
    zs.insert(zs.end(), b.zeros().begin(), b.zeros().end());
    return ZeroSet(std::move(zs));
}

namespace {

constexpr double kCollisionGuard = 1e-12;

std::optional<double> kernel_sum(const std::vector<Atom>& atoms, Complex z) {
    std::vector<double> terms;
    terms.reserve(atoms.size());
    for (const Atom& a : atoms) {
        const double dist = std::abs(z - a.position);
        if (dist <= kCollisionGuard * std::max(1.0, std::abs(a.position)))
            return std::nullopt;
        terms.push_back(a.mass * std::log(std::abs(1.0 - z / a.position)));
    }
    return pairwise_sum(terms);
}

}  // namespace

std::optional<double> log_potential(const Measure& m, Complex z) {
    for (const Atom& a : m.atoms())
        if (a.position == Complex(0.0, 0.0))
            throw std::domain_error("log_potential: atom at the origin");
    return kernel_sum(m.atoms(), z);
}

std::optional<double> log_modulus(const ZeroSet& f, Complex z) {
    return kernel_sum(f.as_measure().atoms(), z);
}

}  // namespace sublog
