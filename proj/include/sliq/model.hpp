#pragma once

#include <functional>
#include <string>
#include <vector>

#include "sliq/errors.hpp"

namespace sliq {

// Scalar impact function with its analytic first derivative. The first-order
// strategy formulas need f' and g' exactly, so derivatives are carried
// explicitly instead of being differenced.
struct ImpactFunction {
    enum class Kind { Linear, Polynomial, UserDefined };

    std::function<double(double)> value;
    std::function<double(double)> derivative;
    Kind kind = Kind::UserDefined;

    // slope*x + intercept
    static ImpactFunction linear(double slope, double intercept = 0.0);
    // coeffs[0] + coeffs[1]*x + coeffs[2]*x^2 + ...
    static ImpactFunction polynomial(std::vector<double> coeffs);
    static ImpactFunction user_defined(std::function<double(double)> value,
                                       std::function<double(double)> derivative);
};

// Checks derivative(x) against a centered difference of value at each sample
// point, step 1e-6*max(1,|x|). Returns the worst relative error.
double derivative_consistency(const ImpactFunction& fn,
                              const std::vector<double>& points);

// Throws ValidationError if the consistency check exceeds rel_tol. Intended
// for user-defined impact functions before they enter a model.
void require_consistent_derivative(const ImpactFunction& fn,
                                   const std::vector<double>& points,
                                   double rel_tol = 1e-6,
                                   const std::string& label = "impact");

// Scalar diffusion dz = drift(z) dt + diffusion(z) dW.
struct DiffusionSpec {
    enum class Kind { CIR, UserDefined };

    std::function<double(double)> drift;
    std::function<double(double)> diffusion;
    Kind kind = Kind::UserDefined;

    // CIR parameters, valid when kind == CIR.
    double lambda = 0.0;   // mean-reversion rate
    double theta = 0.0;    // long-run mean
    double sigma_v = 0.0;  // vol-of-vol

    static DiffusionSpec cir(double lambda, double theta, double sigma_v);
    static DiffusionSpec user_defined(std::function<double(double)> drift,
                                      std::function<double(double)> diffusion);
};

// true iff 2*lambda*theta > sigma_v^2 (strict): the process stays positive.
bool feller_check(const DiffusionSpec& spec);

struct MarketModel {
    ImpactFunction f;     // temporary impact
    ImpactFunction g;     // permanent impact
    DiffusionSpec a_dyn;  // dynamics of the temporary-impact factor
    DiffusionSpec b_dyn;  // dynamics of the permanent-impact factor
    double rho = 0.0;     // corr(B1, B2)
    double sigma = 0.0;   // midprice volatility

    // rho in [-1,1], sigma >= 0. The model text requires sigma > 0 but
    // deterministic-midprice runs (sigma = 0) are needed for testing, so
    // zero is accepted.
    void validate() const;
};

enum class Regime { Nonlimiting, KappaInfinity, KappaInfinityPhiZero };

std::string regime_name(Regime r);
Regime regime_from_name(const std::string& name);

struct PenaltyParams {
    double kappa = 0.0;  // terminal liquidation penalty
    double phi = 0.0;    // running inventory penalty
    double T = 1.0;      // horizon
    Regime regime = Regime::Nonlimiting;

    void validate() const;
};

// Zeroth/first Taylor data of the PDE coefficients at (abar, bbar), plus the
// derived constants gamma and zeta.
struct LocalCoefficients {
    double f0 = 0.0;   // f(abar)
    double g0 = 0.0;   // g(bbar)
    double df0 = 0.0;  // f'(abar)
    double dg0 = 0.0;  // g'(bbar)
    double mu0 = 0.0;  // mu(abar)
    double eta0 = 0.0; // eta(bbar)
    double half_om2 = 0.0;    // 0.5*omega^2(abar)
    double half_psi2 = 0.0;   // 0.5*psi^2(bbar)
    double rho_om_psi = 0.0;  // rho*omega(abar)*psi(bbar)
    double gamma = 0.0;       // sqrt(phi/f0); 0 in the (inf,0) regime
    double zeta = 0.0;        // +inf in the limiting regimes
    double abar = 0.0;
    double bbar = 0.0;
};

// Evaluates all local coefficients at (abar, bbar) for the given penalties.
// Throws NonPositiveTemporaryImpact, DegenerateZeta, SingularDenominator.
LocalCoefficients local_coefficients(const MarketModel& model,
                                     const PenaltyParams& penalties,
                                     double abar, double bbar);

}  // namespace sliq
