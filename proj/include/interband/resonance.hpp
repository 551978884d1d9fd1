#pragma once

#include <optional>
#include <vector>

#include "interband/resolvent.hpp"

namespace interband {

/// A converged zero of D+ at fixed (x, kappa): the deformed image of the band
/// point x in the lower half-plane, with the residue amplitude of the pole.
struct PolePoint {
    double x = 0.0;
    double kappa = 0.0;
    Complex zeta{0.0, 0.0};
    double residual = 0.0;     // |D+| at zeta
    Complex amplitude_A{1.0, 0.0};
    int newton_iters = 0;

    double zeta1() const { return zeta.real(); }
    double zeta2() const { return -zeta.imag(); }  // decay width, >= 0
};

/// The x-parametrized resonance curve at fixed coupling.
struct ResonanceCurve {
    double kappa = 0.0;
    std::vector<PolePoint> points;
    int grid_count = 0;
    double edge_clip = 0.0;
};

/// Leading-order pole displacement per unit kappa^2 at coupling zero:
/// -rho(x) [ I(u^{-1}(x), x) + i pi v(u^{-1}(x), x - u^{-1}(x)) ].
Complex golden_rule_pole(const TwoBandModel& model, double x,
                         double tol = 1e-10);

/// Newton iteration on D+(x, kappa, .) = 0 with the analytic derivative.
/// Default guess is x + kappa^2 * golden_rule_pole(x); kappa = 0 returns
/// zeta = x without iterating. A converged root with Im zeta > 1e-10 is
/// rejected (the continued resolvent has no upper half-plane zeros).
PolePoint solve_pole(const TwoBandModel& model, double x, double kappa,
                     std::optional<Complex> guess = std::nullopt,
                     double tol = 1e-12);

/// d zeta / d(kappa^2) at a solved pole:
/// -rho G_Omega / (1 + kappa^2 rho dG_Omega/dzeta).
Complex dzeta_dk2(const TwoBandModel& model, double x, double kappa,
                  const PolePoint& pole, double tol = 1e-10);

/// Residue amplitude A(x, kappa) = [1 + kappa^2 rho dG_Omega/dzeta]^{-1}.
Complex residue_amplitude_A(const TwoBandModel& model, double x, double kappa,
                            const PolePoint& pole, double tol = 1e-10);

/// Sweeps the clipped interior grid of the upper band, seeding each solve
/// with the previous point's zeta (branch continuation).
ResonanceCurve trace_resonance_curve(const TwoBandModel& model, double kappa,
                                     int n_points, double tol = 1e-12);

}  // namespace interband
