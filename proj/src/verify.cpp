#include "sliq/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sliq {

namespace {

double simpson_slice(const std::function<double(double)>& f, double a,
                     double fa, double b, double fb, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_step(const std::function<double(double)>& f, double a,
                     double fa, double b, double fb, double fm, double whole,
                     double tol, int depth, int max_depth) {
    if (depth > max_depth)
        throw NonConvergence("adaptive_simpson: refinement exceeded depth limit");
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson_slice(f, a, fa, m, fm, flm);
    const double right = simpson_slice(f, m, fm, b, fb, frm);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return adaptive_step(f, a, fa, m, fm, flm, left, 0.5 * tol, depth + 1, max_depth) +
           adaptive_step(f, m, fm, b, fb, frm, right, 0.5 * tol, depth + 1, max_depth);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol, int max_depth) {
    if (a == b) return 0.0;
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    const double whole = simpson_slice(f, a, fa, b, fb, fm);
    return adaptive_step(f, a, fa, b, fb, fm, whole, tol, 0, max_depth);
}

double quadrature_I(int i, double t, const LocalCoefficients& co,
                    const PenaltyParams& penalties, double tol) {
    if (i < 1 || i > 4)
        throw NotApplicable("quadrature_I: i must be in 1..4");
    const double T = penalties.T;
    if (t == T) return 0.0;
    const double g = co.gamma;

    std::function<double(double)> integrand;
    if (penalties.regime == Regime::KappaInfinity) {
        // theta0 = -coth(g (T-s)) diverges at s = T while Psi0 vanishes
        // there; the products are regular once combined:
        //   theta0   Psi0 = -(1+u_s)(1-u_s) e^{-2g(s-t)} / (1-u_t)^2
        //   theta0^2 Psi0 =  (1+u_s)^2      e^{-2g(s-t)} / (1-u_t)^2
        const double ut = std::exp(-2.0 * g * (T - t));
        const double den = (1.0 - ut) * (1.0 - ut);
        integrand = [=](double s) {
            const double us = std::exp(-2.0 * g * (T - s));
            const double decay = std::exp(-2.0 * g * (s - t));
            const double one = 1.0 + us;
            double v = (i <= 2) ? one * one : -one * (1.0 - us);
            v *= decay / den;
            if (i == 1 || i == 3) v *= s;
            return v;
        };
    } else if (penalties.regime == Regime::Nonlimiting) {
        integrand = [=, &penalties](double s) {
            const double th = theta0(s, co, T);
            double v = (i <= 2) ? th * th : th;
            v *= psi0(t, s, co, T);
            if (i == 1 || i == 3) v *= s;
            return v;
        };
    } else {
        throw NotApplicable("quadrature_I: not defined in the (inf,0) regime");
    }
    return adaptive_simpson(integrand, t, T, tol);
}

ResidualReport riccati_residual(const LocalCoefficients& co,
                                const PenaltyParams& penalties, int n_grid,
                                double t_hi_frac) {
    if (penalties.regime != Regime::Nonlimiting)
        throw NotApplicable("riccati_residual: nonlimiting regime only");
    const double T = penalties.T;
    const double phi = penalties.phi;
    const double h = 1e-6 * T;
    const double t_hi = t_hi_frac * T;

    ResidualReport rep;
    rep.name = "riccati-h0";
    {
        std::ostringstream os;
        os << n_grid << " uniform points on [0, " << t_hi_frac
           << "*T], centered step 1e-6*T";
        rep.grid = os.str();
    }
    rep.tol = 1e-7;
    for (int k = 0; k < n_grid; ++k) {
        const double t = t_hi * k / (n_grid - 1);
        const double hp = (h0(t + h, co, penalties) - h0(t - h, co, penalties)) / (2.0 * h);
        const double v = h0(t, co, penalties);
        const double res = hp + v * v / co.f0 + (co.g0 / co.f0) * v +
                           co.g0 * co.g0 / (4.0 * co.f0) - phi;
        rep.max_abs = std::max(rep.max_abs, std::abs(res));
    }
    rep.max_rel = rep.max_abs / std::max(1.0, std::abs(phi));
    rep.finalize();
    return rep;
}

ResidualReport h0_terminal_check(const LocalCoefficients& co,
                                 const PenaltyParams& penalties) {
    ResidualReport rep;
    rep.name = "h0-terminal";
    rep.grid = "t = T";
    rep.tol = 1e-12;
    rep.max_abs = std::abs(h0(penalties.T, co, penalties) + penalties.kappa);
    rep.max_rel = rep.max_abs / std::max(1.0, penalties.kappa);
    rep.finalize();
    return rep;
}

double h1_pde_residual_at(double t, double a, double b,
                          const LocalCoefficients& co,
                          const PenaltyParams& penalties, double dt_step,
                          double da_step, double db_step) {
    const auto H = [&](double tt, double aa, double bb) {
        return h1(tt, aa, bb, co, penalties);
    };
    const double h_t = (H(t + dt_step, a, b) - H(t - dt_step, a, b)) / (2.0 * dt_step);
    const double h_a = (H(t, a + da_step, b) - H(t, a - da_step, b)) / (2.0 * da_step);
    const double h_b = (H(t, a, b + db_step) - H(t, a, b - db_step)) / (2.0 * db_step);
    const double h_c = H(t, a, b);
    const double h_aa = (H(t, a + da_step, b) - 2.0 * h_c + H(t, a - da_step, b)) /
                        (da_step * da_step);
    const double h_bb = (H(t, a, b + db_step) - 2.0 * h_c + H(t, a, b - db_step)) /
                        (db_step * db_step);
    const double h_ab = (H(t, a + da_step, b + db_step) - H(t, a + da_step, b - db_step) -
                         H(t, a - da_step, b + db_step) + H(t, a - da_step, b - db_step)) /
                        (4.0 * da_step * db_step);

    // F1 assembled from the first-order Taylor coefficients of the PDE's
    // nonlinear coefficients, not from the collapsed gamma*theta0 form.
    const double da_ = a - co.abar;
    const double db_ = b - co.bbar;
    const double f2 = co.f0 * co.f0;
    const double inv_f_1 = -co.df0 / f2 * da_;
    const double inv_fg_1 = -co.df0 * co.g0 / f2 * da_ + co.dg0 / co.f0 * db_;
    const double quarter_inv_fg2_1 =
        -co.df0 * co.g0 * co.g0 / (4.0 * f2) * da_ + co.g0 * co.dg0 / (2.0 * co.f0) * db_;
    const double h0v = h0(t, co, penalties);
    const double F1 = inv_f_1 * h0v * h0v + inv_fg_1 * h0v + quarter_inv_fg2_1;

    const double zeroth = 2.0 * co.gamma * theta0(t, co, penalties.T) * h_c;
    const double residual = h_t + co.half_om2 * h_aa + co.rho_om_psi * h_ab +
                            co.half_psi2 * h_bb + co.mu0 * h_a + co.eta0 * h_b +
                            zeroth + F1;
    const double scale = std::abs(h_t) + std::abs(co.half_om2 * h_aa) +
                         std::abs(co.rho_om_psi * h_ab) + std::abs(co.half_psi2 * h_bb) +
                         std::abs(co.mu0 * h_a) + std::abs(co.eta0 * h_b) +
                         std::abs(zeroth) + std::abs(F1);
    return std::abs(residual) / std::max(scale, 1e-300);
}

ResidualReport h1_pde_residual(const std::vector<ProbePoint>& probes,
                               const LocalCoefficients& co,
                               const PenaltyParams& penalties) {
    ResidualReport rep;
    rep.name = "h1-pde-residual";
    {
        std::ostringstream os;
        os << probes.size() << " probe points, steps dt=1e-5*T, da/db=1e-4*state scale";
        rep.grid = os.str();
    }
    rep.tol = 1e-4;
    const double T = penalties.T;
    for (const ProbePoint& p : probes) {
        const double da = 1e-4 * std::max(std::abs(co.abar), std::abs(p.a));
        const double db = 1e-4 * std::max(std::abs(co.bbar), std::abs(p.b));
        const double rel =
            h1_pde_residual_at(p.t, p.a, p.b, co, penalties, 1e-5 * T, da, db);
        rep.max_rel = std::max(rep.max_rel, rel);

        // Convergence order at coarse steps, where truncation dominates
        // roundoff: halving all steps should cut the residual about 4x.
        const double coarse =
            h1_pde_residual_at(p.t, p.a, p.b, co, penalties, 1e-3 * T, 100.0 * da, 100.0 * db);
        const double half =
            h1_pde_residual_at(p.t, p.a, p.b, co, penalties, 5e-4 * T, 50.0 * da, 50.0 * db);
        if (half > coarse)
            throw StepTooSmall("h1_pde_residual: residual grew under step halving");
        const double ratio = coarse / std::max(half, 1e-300);
        if (ratio < 2.0 || ratio > 8.0) {
            rep.max_rel = std::max(rep.max_rel, 1.0);  // flag as failure
        }
    }
    rep.max_abs = rep.max_rel;
    rep.finalize();
    return rep;
}

ResidualReport gamma0_moment_check(double t, double a, double b, double s,
                                   const LocalCoefficients& co,
                                   const PenaltyParams& penalties) {
    ResidualReport rep;
    rep.name = "gamma0-moments";
    {
        std::ostringstream os;
        os << "(t,s) = (" << t << ", " << s << "), 2-D Simpson on +-8 sigma";
        rep.grid = os.str();
    }
    rep.tol = 1e-6;
    const double T = penalties.T;
    if (s < t) throw OrderViolation("gamma0_moment_check: s < t");

    const double dt_ = s - t;
    const double c11 = 2.0 * co.half_om2 * dt_;
    const double c22 = 2.0 * co.half_psi2 * dt_;
    const double c12 = co.rho_om_psi * dt_;
    const double det = c11 * c22 - c12 * c12;
    if (!(det > 1e-12 * c11 * c22) || c11 <= 0.0 || c22 <= 0.0) {
        // |rho| = 1 (or degenerate diffusion) makes the density singular.
        rep.applicable = false;
        rep.finalize();
        return rep;
    }

    const double psi = psi0(t, s, co, T);
    const double mean_a = a + co.mu0 * dt_;
    const double mean_b = b + co.eta0 * dt_;
    const double inv11 = c22 / det;
    const double inv22 = c11 / det;
    const double inv12 = -c12 / det;
    const double norm = psi / (2.0 * M_PI * std::sqrt(det));

    const double sig_a = std::sqrt(c11);
    const double sig_b = std::sqrt(c22);
    constexpr int kN = 800;  // Simpson intervals per axis (even)
    const double lo_a = mean_a - 8.0 * sig_a, hi_a = mean_a + 8.0 * sig_a;
    const double lo_b = mean_b - 8.0 * sig_b, hi_b = mean_b + 8.0 * sig_b;
    const double ha = (hi_a - lo_a) / kN;
    const double hb = (hi_b - lo_b) / kN;

    auto simpson_w = [](int idx, int n) {
        if (idx == 0 || idx == n) return 1.0;
        return idx % 2 == 1 ? 4.0 : 2.0;
    };

    double m0 = 0.0, m1a = 0.0, m1b = 0.0;
    for (int ia = 0; ia <= kN; ++ia) {
        const double alpha = lo_a + ha * ia;
        const double wa = simpson_w(ia, kN);
        const double xa = alpha - mean_a;
        double row0 = 0.0, row1b = 0.0;
        for (int ib = 0; ib <= kN; ++ib) {
            const double beta = lo_b + hb * ib;
            const double wb = simpson_w(ib, kN);
            const double xb = beta - mean_b;
            const double quad = inv11 * xa * xa + 2.0 * inv12 * xa * xb + inv22 * xb * xb;
            const double dens = wb * std::exp(-0.5 * quad);
            row0 += dens;
            row1b += dens * beta;
        }
        m0 += wa * row0;
        m1a += wa * row0 * alpha;
        m1b += wa * row1b;
    }
    const double cell = norm * ha * hb / 9.0;
    m0 *= cell;
    m1a *= cell;
    m1b *= cell;

    const double tgt0 = psi;
    const double tgt1a = psi * mean_a;
    const double tgt1b = psi * mean_b;
    const double r0 = std::abs(m0 - tgt0) / std::max(std::abs(tgt0), 1e-300);
    const double r1 = std::abs(m1a - tgt1a) / std::max(std::abs(tgt1a), 1e-300);
    const double r2 = std::abs(m1b - tgt1b) / std::max(std::abs(tgt1b), 1e-300);
    rep.max_rel = std::max({r0, r1, r2});
    rep.max_abs = std::max({std::abs(m0 - tgt0), std::abs(m1a - tgt1a), std::abs(m1b - tgt1b)});
    rep.finalize();
    return rep;
}

std::vector<ResidualReport> limit_consistency(const MarketModel& model,
                                              const PenaltyParams& penalties,
                                              double abar, double bbar,
                                              int n_grid) {
    std::vector<ResidualReport> out;
    const double T = penalties.T;
    const double phi = penalties.phi;

    PenaltyParams pen_k8{1e8, phi, T, Regime::Nonlimiting};
    PenaltyParams pen_inf{0.0, phi, T, Regime::KappaInfinity};
    PenaltyParams pen_inf_eps{0.0, 1e-12, T, Regime::KappaInfinity};
    PenaltyParams pen_inf0{0.0, 0.0, T, Regime::KappaInfinityPhiZero};

    // Offset expansion point so mu0 and eta0 are nonzero and every c^(i)
    // participates.
    const double ab = 1.1 * abar;
    const double bb = 0.9 * bbar;
    const double pa = 1.2 * abar;
    const double pb = 0.8 * bbar;

    const LocalCoefficients co_k8 = local_coefficients(model, pen_k8, ab, bb);
    const LocalCoefficients co_inf = local_coefficients(model, pen_inf, ab, bb);
    const LocalCoefficients co_inf_eps = local_coefficients(model, pen_inf_eps, ab, bb);
    const LocalCoefficients co_inf0 = local_coefficients(model, pen_inf0, ab, bb);

    ResidualReport rep_k8;
    rep_k8.name = "limit-kappa-1e8-vs-inf";
    rep_k8.tol = 1e-4;
    ResidualReport rep_phi;
    rep_phi.name = "limit-phi-1e-12-vs-inf0";
    rep_phi.tol = 1e-6;
    ResidualReport rep_prod;
    rep_prod.name = "limit-inf0-products";
    rep_prod.tol = 1e-6;
    {
        std::ostringstream os;
        os << n_grid << " uniform points on [0, 0.99*T]";
        rep_k8.grid = rep_phi.grid = rep_prod.grid = os.str();
    }

    for (int k = 0; k < n_grid; ++k) {
        const double t = 0.99 * T * k / (n_grid - 1);

        // kappa = 1e8 vs kappa -> infinity
        const double h0_k8 = h0(t, co_k8, pen_k8);
        const double h0_inf = h0(t, co_inf, pen_inf);
        rep_k8.max_rel = std::max(rep_k8.max_rel,
                                  std::abs(h0_k8 - h0_inf) / std::abs(h0_inf));
        const double h1_k8 = h1(t, pa, pb, co_k8, pen_k8);
        const double h1_inf = h1(t, pa, pb, co_inf, pen_inf);
        {
            const IntegralsI iv = integrals_I(t, co_inf, pen_inf);
            const double g = co_inf.gamma;
            const double scale = std::abs(g * g * co_inf.df0 * co_inf.mu0 * iv.i1) +
                                 std::abs(g * g * co_inf.df0 * (pa - ab - t * co_inf.mu0) * iv.i2) +
                                 std::abs(g * co_inf.dg0 * co_inf.eta0 * iv.i3) +
                                 std::abs(g * co_inf.dg0 * (pb - bb - t * co_inf.eta0) * iv.i4);
            rep_k8.max_rel = std::max(rep_k8.max_rel,
                                      std::abs(h1_k8 - h1_inf) / std::max(scale, 1e-300));
        }

        // phi = 1e-12 (inf,phi) vs (inf,0)
        const double h0_eps = h0(t, co_inf_eps, pen_inf_eps);
        const double h0_lim = h0(t, co_inf0, pen_inf0);
        rep_phi.max_rel = std::max(rep_phi.max_rel,
                                   std::abs(h0_eps - h0_lim) / std::abs(h0_lim));
        const double h1_eps = h1(t, pa, pb, co_inf_eps, pen_inf_eps);
        const double h1_lim = h1(t, pa, pb, co_inf0, pen_inf0);
        {
            const double rem = T - t;
            const double term1 = co_inf0.df0 / (2.0 * rem) *
                                 (2.0 * (pa - ab) + co_inf0.mu0 * rem);
            const double term2 = co_inf0.dg0 / 6.0 *
                                 (3.0 * (pb - bb) + co_inf0.eta0 * rem);
            const double scale = std::abs(term1) + std::abs(term2);
            rep_phi.max_rel = std::max(rep_phi.max_rel,
                                       std::abs(h1_eps - h1_lim) / std::max(scale, 1e-300));
        }

        // the four c^(i) I^(i) products against their stated (inf,0) limits
        {
            const IntegralsI iv = integrals_I(t, co_inf_eps, pen_inf_eps);
            const double g = co_inf_eps.gamma;
            const double mu0 = co_inf_eps.mu0;
            const double eta0 = co_inf_eps.eta0;
            const double df0 = co_inf_eps.df0;
            const double dg0 = co_inf_eps.dg0;
            const double rem = T - t;
            const double prod[4] = {
                -g * g * df0 * mu0 * iv.i1,
                -g * g * df0 * (pa - ab - t * mu0) * iv.i2,
                g * dg0 * eta0 * iv.i3,
                g * dg0 * (pb - bb - t * eta0) * iv.i4,
            };
            const double lim[4] = {
                -df0 * mu0 * (T + t) / (2.0 * rem),
                -df0 * (pa - ab - t * mu0) / rem,
                -dg0 * eta0 * (T + 2.0 * t) / 6.0,
                -dg0 * (pb - bb - t * eta0) / 2.0,
            };
            for (int i = 0; i < 4; ++i) {
                const double denom = std::max(std::abs(lim[i]), 1e-300);
                rep_prod.max_rel = std::max(rep_prod.max_rel,
                                            std::abs(prod[i] - lim[i]) / denom);
            }
        }
    }
    rep_k8.max_abs = rep_k8.max_rel;
    rep_phi.max_abs = rep_phi.max_rel;
    rep_prod.max_abs = rep_prod.max_rel;
    rep_k8.finalize();
    rep_phi.finalize();
    rep_prod.finalize();
    out.push_back(rep_k8);
    out.push_back(rep_phi);
    out.push_back(rep_prod);
    return out;
}

std::vector<ResidualReport> run_verify_suite(const MarketModel& model,
                                             const PenaltyParams& penalties,
                                             double abar, double bbar) {
    if (!(penalties.kappa > 0.0) || !(penalties.phi > 0.0))
        throw ValidationError("penalties",
                              "the verify suite needs positive kappa and phi");
    const double T = penalties.T;
    PenaltyParams pen_non{penalties.kappa, penalties.phi, T, Regime::Nonlimiting};
    PenaltyParams pen_inf{0.0, penalties.phi, T, Regime::KappaInfinity};

    std::vector<ResidualReport> out;
    const LocalCoefficients co = local_coefficients(model, pen_non, abar, bbar);
    const LocalCoefficients co_inf = local_coefficients(model, pen_inf, abar, bbar);

    out.push_back(riccati_residual(co, pen_non, 1000));
    out.push_back(h0_terminal_check(co, pen_non));

    // psi0 against exp(2 gamma int theta0)
    {
        ResidualReport rep;
        rep.name = "psi0-quadrature";
        rep.grid = "(t,s) in {(0,0.5T),(0.2T,0.7T),(0.5T,T)}";
        rep.tol = 1e-8;
        const double pairs[3][2] = {{0.0, 0.5 * T}, {0.2 * T, 0.7 * T}, {0.5 * T, T}};
        for (const auto& p : pairs) {
            const double t = p[0], s = p[1];
            const double integral = adaptive_simpson(
                [&](double r) { return theta0(r, co, T); }, t, s, 1e-13);
            const double expected = std::exp(2.0 * co.gamma * integral);
            const double got = psi0(t, s, co, T);
            rep.max_rel = std::max(rep.max_rel,
                                   std::abs(got - expected) / std::abs(expected));
        }
        rep.max_abs = rep.max_rel;
        rep.finalize();
        out.push_back(rep);
    }

    // closed-form I's against quadrature, both regimes
    for (int regime_pass = 0; regime_pass < 2; ++regime_pass) {
        const PenaltyParams& pen = regime_pass == 0 ? pen_non : pen_inf;
        const LocalCoefficients& c = regime_pass == 0 ? co : co_inf;
        ResidualReport rep;
        rep.name = regime_pass == 0 ? "I-quadrature-nonlimiting"
                                    : "I-quadrature-kappa-infinity";
        rep.grid = "t in {0, 0.3T, 0.6T, 0.9T}, i in 1..4";
        rep.tol = 1e-8;
        for (double frac : {0.0, 0.3, 0.6, 0.9}) {
            const double t = frac * T;
            const IntegralsI closed = integrals_I(t, c, pen);
            const double closed_v[4] = {closed.i1, closed.i2, closed.i3, closed.i4};
            for (int i = 1; i <= 4; ++i) {
                const double quad = quadrature_I(i, t, c, pen, 1e-13);
                rep.max_rel = std::max(rep.max_rel,
                                       std::abs(closed_v[i - 1] - quad) /
                                           std::max(std::abs(quad), 1e-300));
            }
        }
        rep.max_abs = rep.max_rel;
        rep.finalize();
        out.push_back(rep);
    }

    // h1 PDE residual at frozen expansion point
    {
        const std::vector<ProbePoint> probes = {
            {0.25 * T, 1.2 * abar, 0.8 * bbar},
            {0.50 * T, 1.2 * abar, 0.8 * bbar},
            {0.75 * T, 0.9 * abar, 1.1 * bbar},
        };
        out.push_back(h1_pde_residual(probes, co, pen_non));
    }

    out.push_back(gamma0_moment_check(0.2 * T, abar, bbar, 0.6 * T, co, pen_non));
    out.push_back(gamma0_moment_check(0.1 * T, abar, bbar, 0.9 * T, co, pen_non));

    for (ResidualReport& rep : limit_consistency(model, penalties, abar, bbar, 101))
        out.push_back(std::move(rep));
    return out;
}

}  // namespace sliq
