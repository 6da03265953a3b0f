#include "sliq/strategy.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace sliq {

StrategyKind StrategyKind::almgren_chriss(double frozen_a, double frozen_b,
                                          bool no_buy) {
    StrategyKind k;
    k.family = Family::AlmgrenChriss;
    k.frozen_a = frozen_a;
    k.frozen_b = frozen_b;
    k.no_buy = no_buy;
    return k;
}

StrategyKind StrategyKind::order0(bool no_buy) {
    StrategyKind k;
    k.family = Family::Order0;
    k.no_buy = no_buy;
    return k;
}

StrategyKind StrategyKind::order1(bool no_buy) {
    StrategyKind k;
    k.family = Family::Order1;
    k.no_buy = no_buy;
    return k;
}

std::string StrategyKind::name() const {
    std::string base;
    switch (family) {
        case Family::AlmgrenChriss: base = "ac"; break;
        case Family::Order0: base = "order0"; break;
        case Family::Order1: base = "order1"; break;
    }
    if (no_buy) base += "_nobuy";
    return base;
}

namespace {

double coth(double x) { return 1.0 / std::tanh(x); }

void require_inside_horizon(double t, double T, const char* what) {
    if (t >= T) {
        std::ostringstream os;
        os << what << ": limiting regime is singular at t = T (t = " << t
           << ", T = " << T << ")";
        throw HorizonBoundary(os.str());
    }
}

}  // namespace

double theta0(double t, const LocalCoefficients& co, double T) {
    if (std::isinf(co.zeta)) {
        require_inside_horizon(t, T, "theta0");
        return -coth(co.gamma * (T - t));
    }
    const double u = std::exp(-2.0 * co.gamma * (T - t));
    return (u + co.zeta) / (u - co.zeta);
}

double h0(double t, const LocalCoefficients& co, const PenaltyParams& penalties) {
    const double T = penalties.T;
    switch (penalties.regime) {
        case Regime::Nonlimiting:
            return -0.5 * co.g0 + co.f0 * co.gamma * theta0(t, co, T);
        case Regime::KappaInfinity:
            require_inside_horizon(t, T, "h0");
            return -0.5 * co.g0 - co.f0 * co.gamma * coth(co.gamma * (T - t));
        case Regime::KappaInfinityPhiZero:
            require_inside_horizon(t, T, "h0");
            return -0.5 * co.g0 - co.f0 / (T - t);
    }
    return 0.0;
}

double psi0(double t, double s, const LocalCoefficients& co, double T) {
    if (s < t) {
        std::ostringstream os;
        os << "psi0: s = " << s << " precedes t = " << t;
        throw OrderViolation(os.str());
    }
    if (s == t) return 1.0;
    const double decay = std::exp(-2.0 * co.gamma * (s - t));
    const double us = std::exp(-2.0 * co.gamma * (T - s));
    const double ut = std::exp(-2.0 * co.gamma * (T - t));
    if (std::isinf(co.zeta)) {
        const double ratio = (1.0 - us) / (1.0 - ut);
        return decay * ratio * ratio;
    }
    const double ratio = (co.zeta - us) / (co.zeta - ut);
    return decay * ratio * ratio;
}

IntegralsI integrals_I(double t, const LocalCoefficients& co,
                       const PenaltyParams& penalties) {
    const double T = penalties.T;
    if (penalties.regime == Regime::KappaInfinityPhiZero)
        throw NotApplicable("integrals_I: the (inf,0) regime uses the assembled limit products");
    IntegralsI out;
    if (t == T) return out;  // empty interval
    const double g = co.gamma;
    const double g2 = g * g;
    const double u = std::exp(-2.0 * g * (T - t));
    if (penalties.regime == Regime::KappaInfinity) {
        const double den2 = (u - 1.0) * (u - 1.0);
        out.i1 = (u * (4.0 * g2 * (T * T - t * t) - 2.0) + u * u * (1.0 - 2.0 * g * t) +
                  (2.0 * g * t + 1.0)) /
                 (4.0 * g2 * den2);
        out.i2 = (-u * u - 4.0 * g * (t - T) * u + 1.0) / (2.0 * g * den2);
        out.i3 = (u * u * (1.0 - 2.0 * g * t) + 4.0 * g * T * u - (2.0 * g * t + 1.0)) /
                 (4.0 * g2 * den2);
        out.i4 = -1.0 / (2.0 * g);
        return out;
    }
    const double z = co.zeta;
    const double z2 = z * z;
    const double den2 = (u - z) * (u - z);
    out.i1 = (u * (4.0 * g2 * z * (T * T - t * t) - z2 * (2.0 * g * T + 1.0) + 2.0 * g * T - 1.0) +
              u * u * (1.0 - 2.0 * g * t) + z2 * (2.0 * g * t + 1.0)) /
             (4.0 * g2 * den2);
    out.i2 = -(u * u + u * (z2 + 4.0 * g * z * (t - T) - 1.0) - z2) / (2.0 * g * den2);
    out.i3 = (u * u * (1.0 - 2.0 * g * t) - z2 * (2.0 * g * t + 1.0) +
              u * (z2 + 2.0 * g * (z2 + 1.0) * T - 1.0)) /
             (4.0 * g2 * den2);
    out.i4 = -((u - 1.0) * (u - z2)) / (2.0 * g * den2);
    return out;
}

double h1(double t, double a, double b, const LocalCoefficients& co,
          const PenaltyParams& penalties) {
    const double T = penalties.T;
    if (penalties.regime == Regime::KappaInfinityPhiZero) {
        require_inside_horizon(t, T, "h1");
        const double rem = T - t;
        return -co.df0 / (2.0 * rem) * (2.0 * (a - co.abar) + co.mu0 * rem) -
               co.dg0 / 6.0 * (3.0 * (b - co.bbar) + co.eta0 * rem);
    }
    if (penalties.regime == Regime::KappaInfinity)
        require_inside_horizon(t, T, "h1");
    const IntegralsI iv = integrals_I(t, co, penalties);
    const double g = co.gamma;
    const double c1 = -g * g * co.df0 * co.mu0;
    const double c2 = -g * g * co.df0 * (a - co.abar - t * co.mu0);
    const double c3 = g * co.dg0 * co.eta0;
    const double c4 = g * co.dg0 * (b - co.bbar - t * co.eta0);
    return c1 * iv.i1 + c2 * iv.i2 + c3 * iv.i3 + c4 * iv.i4;
}

double rate(const StrategyKind& kind, double t, double q, double a, double b,
            const MarketModel& model, const PenaltyParams& penalties) {
    const bool frozen = kind.family == StrategyKind::Family::AlmgrenChriss;
    const double ea = frozen ? kind.frozen_a : a;
    const double eb = frozen ? kind.frozen_b : b;
    const LocalCoefficients co = local_coefficients(model, penalties, ea, eb);
    double hbar = h0(t, co, penalties);
    if (kind.family == StrategyKind::Family::Order1)
        hbar += h1(t, a, b, co, penalties);
    double nu = -(0.5 * co.g0 + hbar) / co.f0 * q;
    if (kind.no_buy) nu = std::max(0.0, nu);
    return nu;
}

ValueExpansion value_expansion(int order, double t, double a, double b,
                               const MarketModel& model,
                               const PenaltyParams& penalties) {
    if (order != 0 && order != 1)
        throw NotApplicable("value_expansion: order must be 0 or 1");
    const LocalCoefficients co = local_coefficients(model, penalties, a, b);
    ValueExpansion v;
    v.order = order;
    v.h0 = h0(t, co, penalties);
    v.h1 = order == 1 ? h1(t, a, b, co, penalties) : 0.0;
    v.hbar = v.h0 + v.h1;
    return v;
}

double full_value(double t, double x, double s, double q, double a, double b,
                  int order, const MarketModel& model,
                  const PenaltyParams& penalties) {
    const ValueExpansion v = value_expansion(order, t, a, b, model, penalties);
    return x + q * s + q * q * v.hbar;
}

}  // namespace sliq
