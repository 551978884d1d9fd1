#pragma once

#include <complex>
#include <functional>
#include <optional>

#include "interband/model.hpp"

namespace interband {

/// Which branch of the level-shift function a complex energy refers to.
/// Physical is the first-sheet function (the plain Cauchy integral on both
/// half-planes, upper boundary value on the axis). ContinuedBelow is the
/// continuation of the upper half-plane values through the band cut into the
/// lower half-plane; ContinuedAbove is the mirror continuation of the lower
/// half-plane values upward.
enum class Sheet { Physical, ContinuedBelow, ContinuedAbove };

struct ComplexEnergy {
    Complex value{0.0, 0.0};
    Sheet sheet = Sheet::Physical;
};

inline ComplexEnergy physical(Complex z) { return {z, Sheet::Physical}; }
inline ComplexEnergy continued_below(Complex z) {
    return {z, Sheet::ContinuedBelow};
}
inline ComplexEnergy continued_above(Complex z) {
    return {z, Sheet::ContinuedAbove};
}

/// Level-shift evaluation result: the continued value, the principal-value
/// part when the query sat on the real axis, and the jump correction that was
/// actually added to the plain integral.
struct LevelShift {
    Complex g_value{0.0, 0.0};
    std::optional<Complex> i_value;
    Complex jump{0.0, 0.0};
};

/// Plain Cauchy integral  G(y, zeta) = int_nu^inf v(y, z)/(y + z - zeta) dz,
/// defined off the real axis.
Complex g_plain(const TwoBandModel& model, double y, Complex zeta,
                double tol = 1e-10);

/// Principal-value boundary function I(y, xi) for xi > y + nu.
Complex i_pv(const TwoBandModel& model, double y, double xi,
             double tol = 1e-10);

/// The level-shift function on the requested sheet. On the real axis (only
/// admissible for xi > y + nu) Physical and ContinuedBelow return the upper
/// boundary value I + i pi v, ContinuedAbove returns I - i pi v. For
/// |Im zeta| below 1e-6 the plain integral is ill-conditioned and the value
/// is produced by a first-order step off the axis instead.
LevelShift g_continued(const TwoBandModel& model, double y, ComplexEnergy zeta,
                       double tol = 1e-10);

/// d/dzeta of the continued level-shift function on the same sheet.
Complex dg_continued_dzeta(const TwoBandModel& model, double y,
                           ComplexEnergy zeta, double tol = 1e-10);

/// Denominators of the reduced resolvent and of its mirror continuation:
/// D+(x, kappa, zeta) = x - zeta - kappa^2 rho(x) G_Omega(u^{-1}(x), zeta),
/// D-(x, kappa, zeta) = x - zeta - kappa^2 rho(x) G^Omega(u^{-1}(x), zeta).
Complex d_plus(const TwoBandModel& model, double x, double kappa, Complex zeta,
               double tol = 1e-10);
Complex d_minus(const TwoBandModel& model, double x, double kappa, Complex zeta,
                double tol = 1e-10);

/// dD+/dzeta (and dD-/dzeta) at the given point.
Complex d_plus_dzeta(const TwoBandModel& model, double x, double kappa,
                     Complex zeta, double tol = 1e-10);

/// Reduced resolvent multiplier r(x, zeta) = 1/D+ with the physical-sheet G;
/// requires Im zeta != 0.
Complex reduced_resolvent_r(const TwoBandModel& model, double x, double kappa,
                            Complex zeta, double tol = 1e-10);

/// Pointwise action of the full resolvent (H - zeta)^{-1} on (f1, g1) at the
/// query point (x; y, z). The photon measure is taken flat (omega = 1) with
/// lambda = sqrt(v), which leaves every reduced quantity unchanged.
struct ResolventAction {
    Complex f_value{0.0, 0.0};
    Complex g_value{0.0, 0.0};
};

ResolventAction apply_resolvent(const TwoBandModel& model, double kappa,
                                Complex zeta,
                                const std::function<Complex(double)>& f1,
                                const std::function<Complex(double, double)>& g1,
                                double x, double y, double z,
                                double tol = 1e-10);

}  // namespace interband
