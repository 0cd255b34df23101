#include "sublog/atomize.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace sublog {

Measure to_log_coords(const Measure& m) {
    std::vector<Atom> out;
    out.reserve(m.size());
    for (const Atom& a : m.atoms()) {
        const double r = std::abs(a.position);
        if (r == 0.0)
            throw std::domain_error("to_log_coords: atom at the origin has no image");
        out.push_back({Complex(std::log(r), angle01(a.position)), a.mass});
    }
    return Measure(std::move(out));
}

Complex from_log_point(Complex omega) {
    return std::polar(std::exp(omega.real()), omega.imag());
}

AtomPair atomize_pair(const PartitionPiece& piece) {
    const double mass = piece.nu.total_mass();
    if (std::abs(mass - 2.0) > 1e-9)
        throw std::invalid_argument("atomize_pair: piece mass must be 2");

    Complex S(0.0, 0.0);  // first moment
    Complex Q(0.0, 0.0);  // second moment
    for (const Atom& a : piece.nu.atoms()) {
        S += a.mass * a.position;
        Q += a.mass * a.position * a.position;
    }
    // omega1 + omega2 = S and omega1^2 + omega2^2 = Q pin the product
    // P = (S^2 - Q)/2; the pair is the root set of x^2 - S x + P.
    const Complex P = 0.5 * (S * S - Q);
    const Complex disc = S * S - 4.0 * P;  // = 2 Q - S^2
    const Complex root = std::sqrt(disc);
    Complex w1 = 0.5 * (S - root);
    Complex w2 = 0.5 * (S + root);
    if (w2.real() < w1.real() ||
        (w2.real() == w1.real() && w2.imag() < w1.imag()))
        std::swap(w1, w2);

    AtomPair out;
    out.omega1 = w1;
    out.omega2 = w2;
    out.zeta1 = from_log_point(w1);
    out.zeta2 = from_log_point(w2);
    out.omega_center = 0.5 * S;
    out.d = piece.rect.diameter();
    out.nu = piece.nu;
    out.rect = piece.rect;
    return out;
}

std::optional<double> delta_term(const AtomPair& pair, Complex z) {
    const double guard = 1e-12;
    auto term = [&](Complex omega) -> std::optional<double> {
        const Complex zeta = from_log_point(omega);
        const double dist = std::abs(z - zeta);
        if (dist <= guard * std::max(1.0, std::abs(zeta))) return std::nullopt;
        return std::log(std::abs(1.0 - z / zeta));
    };
    double acc = 0.0;
    for (const Atom& a : pair.nu.atoms()) {
        const auto v = term(a.position);
        if (!v) return std::nullopt;
        acc += a.mass * *v;
    }
    const auto v1 = term(pair.omega1);
    const auto v2 = term(pair.omega2);
    if (!v1 || !v2) return std::nullopt;
    return acc - *v1 - *v2;
}

}  // namespace sublog
