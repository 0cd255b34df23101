#ifndef SUBLOG_SLOWLY_VARYING_HPP
#define SUBLOG_SLOWLY_VARYING_HPP

#include <functional>
#include <memory>
#include <string>

namespace sublog {

/// Weight function psi on [1, oo) with psi(R) >= 1, wrapped with the
/// iterated maps Psi_n used by the annular induction:
///   Psi_1(R) = R * psi(R),   Psi_n = Psi_1 o Psi_{n-1},   Psi_0 = id.
class SlowlyVarying {
public:
    double operator()(double R) const;
    double log_psi(double R) const;
    double Psi1(double R) const;
    /// n-fold iterate; saturates at +inf on overflow.
    double Psi(int n, double R) const;
    const std::string& name() const { return name_; }

    /// Largest of psi(2R)/psi(R) and its inverse over a dyadic grid
    /// [r_lo, r_hi]; a cheap drift check callers can warn on.
    double worst_doubling_ratio(double r_lo, double r_hi) const;

    static SlowlyVarying constant(double c);
    static SlowlyVarying log_e_r();        // psi(R) = log(e R)
    static SlowlyVarying exp_sqrt_log();   // psi(R) = exp(sqrt(log R))
    static SlowlyVarying squared(const SlowlyVarying& base);
    /// psi(R) = exp( integral_1^R sigma(t)/t dt ), evaluated on a cached
    /// log-spaced grid (nodes_per_octave panels per octave, Gauss panels,
    /// far tighter than the 1e-8 relative target) and grown on demand.
    static SlowlyVarying from_sigma(std::function<double(double)> sigma,
                                    std::string sigma_name,
                                    int nodes_per_octave = 64);

private:
    SlowlyVarying(std::string name, std::function<double(double)> fn);

    std::string name_;
    std::function<double(double)> fn_;
};

/// Spec grammar: "constant:<v>", "log_e_r", "exp_sqrt_log",
/// "squared:<spec>", "sigma:one_over_log". Throws std::invalid_argument on
/// anything else.
SlowlyVarying parse_psi_spec(const std::string& spec);

}  // namespace sublog

#endif
