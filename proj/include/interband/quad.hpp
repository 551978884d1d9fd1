#pragma once

#include <complex>
#include <functional>

#include "interband/errors.hpp"

namespace interband {
namespace quad {

using Complex = std::complex<double>;
using Integrand = std::function<Complex(double)>;

/// Result of a quadrature call.
struct QuadResult {
    Complex value{0.0, 0.0};
    double abs_error_estimate = 0.0;
    long evaluations = 0;
};

/// The three subintervals of the principal-value split around a pole at z = pole:
/// [lo, pole-k], [pole-k, pole+k] (regularized), [pole+k, infinity).
struct PvSplit {
    double k = 0.0;
    double lo = 0.0;    // left end of the full range
    double pole = 0.0;  // location of the simple pole
};

inline constexpr double kDefaultTol = 1e-10;
inline constexpr int kMaxSubdivisions = 2000;

/// Adaptive Gauss-Kronrod 15(7) integration of a complex-valued f over [a, b].
/// The result satisfies |value - exact| <= max(tol, tol*|value|) with the usual
/// nested-rule confidence. Throws AccuracyError (carrying the best estimate)
/// after kMaxSubdivisions.
QuadResult integrate_adaptive(const Integrand& f, double a, double b,
                              double tol = kDefaultTol);

/// Integration over [a, infinity) via the substitution z = a + s/(1-s).
QuadResult integrate_semi_infinite(const Integrand& f, double a,
                                   double tol = kDefaultTol);

/// Cauchy principal value  P.V. int_nu^inf v(z)/(z - (xi-y)) dz  for a simple
/// pole at z = xi - y > nu. Uses the three-piece split with symmetric window
/// k = min(xi-y-nu, 1)/2 (overridable for window-independence checks): two
/// ordinary integrals plus the regularized middle piece with integrand
/// (v(z) - v(xi-y))/(z - (xi-y)).
QuadResult principal_value(const Integrand& v_slice, double y, double xi,
                           double nu, double tol = kDefaultTol,
                           double k_override = 0.0);

/// Describes the split principal_value would use (diagnostics / tests).
PvSplit make_pv_split(double y, double xi, double nu, double k_override = 0.0);

/// Oscillatory Fourier integral  int_a^b g(xi) e^{-i xi t} dxi  by panelwise
/// Chebyshev interpolation of g with exact trigonometric moments. Panel width
/// scales like min(b-a, 2*pi/max(|t|,1)); for |t|*(b-a) < 1 this reduces to
/// integrate_adaptive on g(xi)*e^{-i xi t}.
QuadResult filon_fourier(const Integrand& g, double a, double b, double t,
                         double tol = kDefaultTol);

}  // namespace quad
}  // namespace interband
