#include "sublog/slowly_varying.hpp"

#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace sublog {

namespace {

void check_domain(double R) {
    if (!std::isfinite(R) || R < 1.0)
        throw std::domain_error("SlowlyVarying: argument must lie in [1, oo)");
}

/// Cumulative integral of sigma(e^s) over s in [0, S], on a uniform grid in
/// s extended lazily octave by octave. Each panel uses 5-point
/// Gauss-Legendre, so panel error decays like h^10.
class SigmaCache {
public:
    SigmaCache(std::function<double(double)> sigma, int panels_per_octave)
        : sigma_(std::move(sigma)),
          h_(std::log(2.0) / std::max(1, panels_per_octave)) {
        cum_.push_back(0.0);
    }

    double integral_to(double s) {
        if (s <= 0.0) return 0.0;
        const std::size_t panel = static_cast<std::size_t>(s / h_);
        extend(panel + 1);
        const double s_lo = static_cast<double>(panel) * h_;
        return cum_[panel] + gauss_panel(s_lo, s);
    }

private:
    static constexpr double kNodes[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                         0.5384693101056831, 0.9061798459386640};
    static constexpr double kWeights[5] = {0.2369268850561891, 0.4786286704993665,
                                           0.5688888888888889, 0.4786286704993665,
                                           0.2369268850561891};

    double gauss_panel(double a, double b) const {
        const double mid = 0.5 * (a + b);
        const double half = 0.5 * (b - a);
        double acc = 0.0;
        for (int i = 0; i < 5; ++i) {
            const double s = mid + half * kNodes[i];
            const double v = sigma_(std::exp(s));
            if (!std::isfinite(v))
                throw std::domain_error("SlowlyVarying: sigma not finite on grid");
            acc += kWeights[i] * v;
        }
        return half * acc;
    }

    void extend(std::size_t panels) {
        std::lock_guard<std::mutex> lock(mu_);
        while (cum_.size() < panels + 1) {
            const std::size_t k = cum_.size() - 1;
            const double a = static_cast<double>(k) * h_;
            cum_.push_back(cum_[k] + gauss_panel(a, a + h_));
        }
    }

    std::function<double(double)> sigma_;
    double h_;
    std::vector<double> cum_;
    std::mutex mu_;
};

}  // namespace

SlowlyVarying::SlowlyVarying(std::string name, std::function<double(double)> fn)
    : name_(std::move(name)), fn_(std::move(fn)) {}

double SlowlyVarying::operator()(double R) const {
    check_domain(R);
    const double v = fn_(R);
    if (!std::isfinite(v) || v < 1.0)
        throw std::domain_error("SlowlyVarying: psi(" + std::to_string(R) +
                                ") fell below 1");
    return v;
}

double SlowlyVarying::log_psi(double R) const { return std::log((*this)(R)); }

double SlowlyVarying::Psi1(double R) const { return R * (*this)(R); }

double SlowlyVarying::Psi(int n, double R) const {
    if (n < 0) throw std::invalid_argument("SlowlyVarying::Psi: n >= 0");
    double v = R;
    for (int i = 0; i < n; ++i) {
        if (!std::isfinite(v) || v > 1e300) return std::numeric_limits<double>::infinity();
        v = Psi1(v);
    }
    return v;
}

double SlowlyVarying::worst_doubling_ratio(double r_lo, double r_hi) const {
    check_domain(r_lo);
    double worst = 1.0;
    for (double r = r_lo; r <= r_hi; r *= 2.0) {
        const double a = (*this)(r);
        const double b = (*this)(2.0 * r);
        const double ratio = b > a ? b / a : a / b;
        worst = std::max(worst, ratio);
    }
    return worst;
}

SlowlyVarying SlowlyVarying::constant(double c) {
    if (!(c > 1.0) || !std::isfinite(c))
        throw std::invalid_argument("SlowlyVarying::constant: need c > 1");
    return SlowlyVarying("constant:" + std::to_string(c), [c](double) { return c; });
}

SlowlyVarying SlowlyVarying::log_e_r() {
    return SlowlyVarying("log_e_r", [](double R) { return 1.0 + std::log(R); });
}

SlowlyVarying SlowlyVarying::exp_sqrt_log() {
    return SlowlyVarying("exp_sqrt_log",
                         [](double R) { return std::exp(std::sqrt(std::log(R))); });
}

SlowlyVarying SlowlyVarying::squared(const SlowlyVarying& base) {
    return SlowlyVarying("squared:" + base.name(), [base](double R) {
        const double v = base(R);
        return v * v;
    });
}

SlowlyVarying SlowlyVarying::from_sigma(std::function<double(double)> sigma,
                                        std::string sigma_name, int nodes_per_octave) {
    if (nodes_per_octave < 1)
        throw std::invalid_argument("SlowlyVarying::from_sigma: nodes_per_octave >= 1");
    auto cache = std::make_shared<SigmaCache>(std::move(sigma), nodes_per_octave);
    return SlowlyVarying("sigma:" + std::move(sigma_name), [cache](double R) {
        return std::exp(cache->integral_to(std::log(R)));
    });
}

SlowlyVarying parse_psi_spec(const std::string& spec) {
    if (spec == "log_e_r") return SlowlyVarying::log_e_r();
    if (spec == "exp_sqrt_log") return SlowlyVarying::exp_sqrt_log();
    const std::string kConst = "constant:";
    if (spec.rfind(kConst, 0) == 0) {
        std::size_t pos = 0;
        double c = 0.0;
        const std::string arg = spec.substr(kConst.size());
        try {
            c = std::stod(arg, &pos);
        } catch (const std::exception&) {
            throw std::invalid_argument("psi spec: bad constant value '" + arg + "'");
        }
        if (pos != arg.size())
            throw std::invalid_argument("psi spec: bad constant value '" + arg + "'");
        return SlowlyVarying::constant(c);
    }
    const std::string kSquared = "squared:";
    if (spec.rfind(kSquared, 0) == 0)
        return SlowlyVarying::squared(parse_psi_spec(spec.substr(kSquared.size())));
    if (spec == "sigma:one_over_log") {
        return SlowlyVarying::from_sigma(
            [](double t) { return 1.0 / (1.0 + std::log(t)); }, "one_over_log");
    }
    throw std::invalid_argument("psi spec: unknown '" + spec + "'");
}

}  // namespace sublog
