#pragma once

#include <string>

#include "sliq/model.hpp"

namespace sliq {

// Liquidation-rate strategy selector. Combined with PenaltyParams::regime
// this covers nu_AC, the zeroth- and first-order approximations, and their
// kappa->inf and (kappa,phi)->(inf,0) limits.
struct StrategyKind {
    enum class Family { AlmgrenChriss, Order0, Order1 };

    Family family = Family::Order0;
    // Frozen impact pair, used only by AlmgrenChriss.
    double frozen_a = 0.0;
    double frozen_b = 0.0;
    // Truncate the rate to max(0, nu): never buy.
    bool no_buy = false;

    static StrategyKind almgren_chriss(double frozen_a, double frozen_b,
                                       bool no_buy = false);
    static StrategyKind order0(bool no_buy = false);
    static StrategyKind order1(bool no_buy = false);

    std::string name() const;
};

struct ValueExpansion {
    double h0 = 0.0;
    double h1 = 0.0;    // zero when order == 0
    double hbar = 0.0;  // h0 (order 0) or h0 + h1 (order 1)
    int order = 0;
};

// theta0(t) = (1 + zeta e^{2 gamma (T-t)}) / (1 - zeta e^{2 gamma (T-t)}),
// evaluated in the decaying form (e^{-2 gamma (T-t)} + zeta)/(e^{-2 gamma (T-t)} - zeta)
// so that gamma*(T-t) up to a few hundred cannot overflow. For limiting
// coefficients (zeta = +inf) this is -coth(gamma (T-t)).
double theta0(double t, const LocalCoefficients& co, double T);

// h0 in the active regime. Nonlimiting: -g0/2 + f0*gamma*theta0(t);
// kappa-infinity: -g0/2 - f0*gamma*coth(gamma (T-t));
// (inf,0): -g0/2 - f0/(T-t).
double h0(double t, const LocalCoefficients& co, const PenaltyParams& penalties);

// Psi0(t,s) = e^{-2 gamma (s-t)} ((zeta - e^{-2 gamma (T-s)})/(zeta - e^{-2 gamma (T-t)}))^2,
// equal to exp(2 gamma int_t^s theta0). Requires t <= s.
double psi0(double t, double s, const LocalCoefficients& co, double T);

struct IntegralsI {
    double i1 = 0.0;  // int_t^T s theta0^2(s) Psi0(t,s) ds
    double i2 = 0.0;  // int_t^T theta0^2(s) Psi0(t,s) ds
    double i3 = 0.0;  // int_t^T s theta0(s) Psi0(t,s) ds
    double i4 = 0.0;  // int_t^T theta0(s) Psi0(t,s) ds
};

// Closed forms of the four integrals, nonlimiting or kappa-infinity regime.
IntegralsI integrals_I(double t, const LocalCoefficients& co,
                       const PenaltyParams& penalties);

// First-order value correction h1(t,a,b) about the expansion point in co.
double h1(double t, double a, double b, const LocalCoefficients& co,
          const PenaltyParams& penalties);

// Liquidation rate (shares per unit time) for the selected strategy.
// Order0/Order1 recompute local coefficients at (abar,bbar) = (a,b) on every
// call; AlmgrenChriss uses its frozen pair.
double rate(const StrategyKind& kind, double t, double q, double a, double b,
            const MarketModel& model, const PenaltyParams& penalties);

// h0, h1 and their truncated sum at (abar,bbar) = (a,b).
ValueExpansion value_expansion(int order, double t, double a, double b,
                               const MarketModel& model,
                               const PenaltyParams& penalties);

// Approximate value function H = x + q*s + q^2*hbar.
double full_value(double t, double x, double s, double q, double a, double b,
                  int order, const MarketModel& model,
                  const PenaltyParams& penalties);

}  // namespace sliq
