#include "sliq/model.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

namespace sliq {

ImpactFunction ImpactFunction::linear(double slope, double intercept) {
    ImpactFunction fn;
    fn.value = [slope, intercept](double x) { return slope * x + intercept; };
    fn.derivative = [slope](double) { return slope; };
    fn.kind = Kind::Linear;
    return fn;
}

ImpactFunction ImpactFunction::polynomial(std::vector<double> coeffs) {
    if (coeffs.empty()) coeffs.push_back(0.0);
    ImpactFunction fn;
    fn.value = [coeffs](double x) {
        double acc = 0.0;
        for (size_t i = coeffs.size(); i-- > 0;) acc = acc * x + coeffs[i];
        return acc;
    };
    fn.derivative = [coeffs](double x) {
        double acc = 0.0;
        for (size_t i = coeffs.size(); i-- > 1;)
            acc = acc * x + static_cast<double>(i) * coeffs[i];
        return acc;
    };
    fn.kind = Kind::Polynomial;
    return fn;
}

ImpactFunction ImpactFunction::user_defined(std::function<double(double)> value,
                                            std::function<double(double)> derivative) {
    ImpactFunction fn;
    fn.value = std::move(value);
    fn.derivative = std::move(derivative);
    fn.kind = Kind::UserDefined;
    return fn;
}

double derivative_consistency(const ImpactFunction& fn,
                              const std::vector<double>& points) {
    double worst = 0.0;
    for (double x : points) {
        const double h = 1e-6 * std::max(1.0, std::abs(x));
        const double fd = (fn.value(x + h) - fn.value(x - h)) / (2.0 * h);
        const double an = fn.derivative(x);
        const double scale = std::max({1.0, std::abs(fd), std::abs(an)});
        worst = std::max(worst, std::abs(fd - an) / scale);
    }
    return worst;
}

void require_consistent_derivative(const ImpactFunction& fn,
                                   const std::vector<double>& points,
                                   double rel_tol, const std::string& label) {
    const double err = derivative_consistency(fn, points);
    if (err > rel_tol) {
        std::ostringstream os;
        os << label << ": derivative inconsistent with value (relative error "
           << err << " > " << rel_tol << ")";
        throw ValidationError(label, os.str());
    }
}

DiffusionSpec DiffusionSpec::cir(double lambda, double theta, double sigma_v) {
    if (!(lambda > 0.0) || !(theta > 0.0) || !(sigma_v > 0.0))
        throw ValidationError("cir", "CIR parameters must satisfy lambda, theta, sigma_v > 0");
    DiffusionSpec s;
    s.kind = Kind::CIR;
    s.lambda = lambda;
    s.theta = theta;
    s.sigma_v = sigma_v;
    s.drift = [lambda, theta](double z) { return lambda * (theta - z); };
    s.diffusion = [sigma_v](double z) { return sigma_v * std::sqrt(std::max(z, 0.0)); };
    return s;
}

DiffusionSpec DiffusionSpec::user_defined(std::function<double(double)> drift,
                                          std::function<double(double)> diffusion) {
    DiffusionSpec s;
    s.kind = Kind::UserDefined;
    s.drift = std::move(drift);
    s.diffusion = std::move(diffusion);
    return s;
}

bool feller_check(const DiffusionSpec& spec) {
    if (spec.kind != DiffusionSpec::Kind::CIR)
        throw NotApplicable("feller_check: only defined for CIR dynamics");
    return 2.0 * spec.lambda * spec.theta > spec.sigma_v * spec.sigma_v;
}

void MarketModel::validate() const {
    if (!(rho >= -1.0 && rho <= 1.0))
        throw ValidationError("model.rho", "rho must lie in [-1, 1]");
    if (!(sigma >= 0.0))
        throw ValidationError("model.sigma", "sigma must be non-negative");
    if (!f.value || !f.derivative || !g.value || !g.derivative)
        throw ValidationError("model.impact", "impact functions must be set");
    if (!a_dyn.drift || !a_dyn.diffusion || !b_dyn.drift || !b_dyn.diffusion)
        throw ValidationError("model.dynamics", "diffusion specs must be set");
}

std::string regime_name(Regime r) {
    switch (r) {
        case Regime::Nonlimiting: return "nonlimiting";
        case Regime::KappaInfinity: return "kappa-infinity";
        case Regime::KappaInfinityPhiZero: return "kappa-infinity-phi-zero";
    }
    return "?";
}

Regime regime_from_name(const std::string& name) {
    if (name == "nonlimiting") return Regime::Nonlimiting;
    if (name == "kappa-infinity") return Regime::KappaInfinity;
    if (name == "kappa-infinity-phi-zero") return Regime::KappaInfinityPhiZero;
    throw ValidationError("penalties.regime", "unknown regime '" + name + "'");
}

void PenaltyParams::validate() const {
    if (!(T > 0.0))
        throw ValidationError("penalties.T", "horizon T must be positive");
    switch (regime) {
        case Regime::Nonlimiting:
            if (!(kappa > 0.0))
                throw ValidationError("penalties.kappa", "kappa must be positive in the nonlimiting regime");
            if (!(phi > 0.0))
                throw ValidationError("penalties.phi", "phi must be positive in the nonlimiting regime");
            break;
        case Regime::KappaInfinity:
            if (!(phi > 0.0))
                throw ValidationError("penalties.phi", "phi must be positive in the kappa-infinity regime");
            break;
        case Regime::KappaInfinityPhiZero:
            break;
    }
}

namespace {

// Root scan for 1 - zeta*e^{2 gamma (T-t)} = 0, in the decaying form
// d(t) = e^{-2 gamma (T-t)} - zeta. Only reachable when zeta in (0, 1].
void scan_singular_denominator(double gamma, double zeta, double T) {
    constexpr int kGrid = 1024;
    auto d = [&](double t) { return std::exp(-2.0 * gamma * (T - t)) - zeta; };
    double prev_t = 0.0;
    double prev_d = d(0.0);
    if (prev_d == 0.0)
        throw SingularDenominator("strategy denominator vanishes at t = 0", 0.0);
    for (int i = 1; i <= kGrid; ++i) {
        const double t = T * static_cast<double>(i) / kGrid;
        const double di = d(t);
        if (di == 0.0 || (di > 0.0) != (prev_d > 0.0)) {
            // bisect to locate the root for the error message
            double lo = prev_t, hi = t;
            for (int it = 0; it < 80; ++it) {
                const double mid = 0.5 * (lo + hi);
                if ((d(mid) > 0.0) == (prev_d > 0.0)) lo = mid; else hi = mid;
            }
            const double ts = 0.5 * (lo + hi);
            std::ostringstream os;
            os << "strategy denominator 1 - zeta*e^{2*gamma*(T-t)} vanishes at t = " << ts;
            throw SingularDenominator(os.str(), ts);
        }
        prev_t = t;
        prev_d = di;
    }
}

}  // namespace

LocalCoefficients local_coefficients(const MarketModel& model,
                                     const PenaltyParams& penalties,
                                     double abar, double bbar) {
    LocalCoefficients co;
    co.abar = abar;
    co.bbar = bbar;
    co.f0 = model.f.value(abar);
    if (!(co.f0 > 0.0)) {
        std::ostringstream os;
        os << "f(" << abar << ") = " << co.f0 << " must be positive";
        throw NonPositiveTemporaryImpact(os.str());
    }
    co.g0 = model.g.value(bbar);
    co.df0 = model.f.derivative(abar);
    co.dg0 = model.g.derivative(bbar);
    co.mu0 = model.a_dyn.drift(abar);
    co.eta0 = model.b_dyn.drift(bbar);
    const double om0 = model.a_dyn.diffusion(abar);
    const double psi0 = model.b_dyn.diffusion(bbar);
    co.half_om2 = 0.5 * om0 * om0;
    co.half_psi2 = 0.5 * psi0 * psi0;
    co.rho_om_psi = model.rho * om0 * psi0;

    switch (penalties.regime) {
        case Regime::Nonlimiting: {
            co.gamma = std::sqrt(penalties.phi / co.f0);
            const double b = std::sqrt(penalties.phi * co.f0);
            const double num = penalties.kappa - 0.5 * co.g0 + b;
            const double den = penalties.kappa - 0.5 * co.g0 - b;
            if (den == 0.0)
                throw DegenerateZeta("kappa - g0/2 - sqrt(phi*f0) vanishes; zeta undefined");
            co.zeta = num / den;
            if (co.zeta > 0.0 && co.zeta <= 1.0)
                scan_singular_denominator(co.gamma, co.zeta, penalties.T);
            break;
        }
        case Regime::KappaInfinity:
            co.gamma = std::sqrt(penalties.phi / co.f0);
            co.zeta = std::numeric_limits<double>::infinity();
            break;
        case Regime::KappaInfinityPhiZero:
            co.gamma = 0.0;
            co.zeta = std::numeric_limits<double>::infinity();
            break;
    }
    return co;
}

}  // namespace sliq
