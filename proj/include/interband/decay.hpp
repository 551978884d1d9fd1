#pragma once

#include <utility>
#include <vector>

#include "interband/resonance.hpp"

namespace interband {

/// Sampled spectral density W(x, .) above the threshold xi0 = nu + u^{-1}(x).
struct SpectralDensity {
    double x = 0.0;
    double kappa = 0.0;
    double xi0 = 0.0;
    std::vector<std::pair<double, double>> samples;  // (xi, W)
    double p_threshold = 1.0;
    double norm = 0.0;  // int W dxi
};

/// Constants of the long-time power law at fixed (x, kappa).
struct TailConstants {
    double p = 1.0;             // threshold exponent
    double a_threshold = 1.0;   // amplitude of v(y, nu + s) ~ A s^p
    double d_nu_x = 0.0;        // threshold limit of D+-
    double kappa_crit = 0.0;    // coupling at which d_nu_x crosses zero
    double threshold_integral = 0.0;  // int v(y, z)/(z - nu) dz
    Complex w_nu_x{0.0, 0.0};   // kappa^2 rho A / d^2
    double xi0 = 0.0;
};

/// Validity window [t1, t2] of the intermediate exponential approximation.
struct ExpWindow {
    double t1 = 0.0;
    double t2 = 0.0;
};

/// Time sweep of the decay amplitude with all comparison curves.
struct DecayRecord {
    double x = 0.0;
    double kappa = 0.0;
    PolePoint pole;
    TailConstants tail;
    ExpWindow window;
    std::vector<double> times;
    std::vector<Complex> u_direct;
    std::vector<Complex> u_contour;
    std::vector<Complex> u_exp;   // A e^{-i zeta t}
    std::vector<Complex> u_tail;  // power-law asymptote
};

/// Spectral density W(x, xi) for xi above the threshold; zero at or below it.
/// kappa = 0 has no density (the survival measure degenerates to a point
/// mass) and is rejected.
double spectral_density_W(const TwoBandModel& model, double x, double kappa,
                          double xi, double tol = 1e-10);

/// Reusable piecewise-Chebyshev interpolant of W(x, .) on [xi0, xi_max],
/// graded at the threshold (xi = xi0 + s^2) and refined across the resonance
/// peak; xi_max is chosen so the truncated mass is below the build tolerance.
class SpectralDensityTable {
public:
    SpectralDensityTable(const TwoBandModel& model, double x, double kappa,
                         double tol = 1e-9);

    double xi0() const { return xi0_; }
    double xi_max() const { return xi_max_; }
    double eval(double xi) const;
    double norm() const { return norm_; }

    /// int_{xi0}^{inf} W(xi) e^{-i xi t} dxi on the interpolant.
    Complex fourier(double t, double tol = 1e-8) const;

private:
    struct Domain {
        double a, b;                 // in s for graded domains, else in xi
        bool graded;                 // xi = xi0 + s^2
        std::vector<double> coeffs;  // Chebyshev coefficients
        double eval(double u) const;
    };
    void fit_domain(const TwoBandModel& model, double x, double kappa,
                    double a, double b, bool graded, double tol, int depth);

    double xi0_ = 0.0;
    double xi_max_ = 0.0;
    double norm_ = 0.0;
    std::vector<Domain> domains_;
};

/// Decay amplitude by direct Fourier integration of the spectral density.
/// kappa = 0 returns the free evolution e^{-i x t} exactly.
Complex decay_amplitude_direct(const TwoBandModel& model, double x,
                               double kappa, double t, double tol = 1e-8);
Complex decay_amplitude_direct(const SpectralDensityTable& table, double t,
                               double tol = 1e-8);

/// Decay amplitude as residue plus background: the integration contour is
/// rotated onto the ray xi0 + s e^{-i theta}, which picks up the pole term
/// A e^{-i zeta t} and leaves a non-oscillatory background integral.
Complex decay_amplitude_contour(const TwoBandModel& model, double x,
                                double kappa, double t, const PolePoint& pole,
                                double tol = 1e-10, double theta = 0.0);

/// Solves kappa^2 eta2 T e^{-kappa^2 eta2 T} = c6 kappa^4 eta2 for both
/// branches, with eta2 = zeta2 / kappa^2 taken from the solved pole. No
/// window exists once the right-hand side exceeds 1/e.
ExpWindow exp_window(const TwoBandModel& model, double x, double kappa,
                     const PolePoint& pole, double c6);

/// Threshold constants of the power-law tail.
TailConstants tail_constants(const TwoBandModel& model, double x, double kappa,
                             double tol = 1e-10);

/// The long-time asymptote
/// w e^{-i xi0 t} e^{-i pi (p+1)/2} Gamma(p+1) t^{-(p+1)}.
Complex tail_asymptote(const TwoBandModel& model, double x, double kappa,
                       const TailConstants& tail, double t);

/// Full record over a geometric time grid; pass t_min = t_max = 0 for the
/// default window t1/4 .. 10 t2.
DecayRecord make_decay_record(const TwoBandModel& model, double x, double kappa,
                              double c6, double t_min = 0.0, double t_max = 0.0,
                              int per_decade = 40, double tol = 1e-8);

/// Density samples for emission; n_points = 0 selects the automatic composite
/// grid (graded threshold, refined peak, uniform tail).
SpectralDensity make_spectral_density(const TwoBandModel& model, double x,
                                      double kappa, int n_points = 0,
                                      double tol = 1e-9);

}  // namespace interband
