#include "interband/resonance.hpp"

#include <cmath>
#include <sstream>

namespace interband {

Complex golden_rule_pole(const TwoBandModel& model, double x, double tol) {
    if (!model.i1.interior(x))
        throw DomainError("golden_rule_pole: x must be interior to the upper band");
    const double y = model.u_inv(x);
    const double rho = rho_of(model, x);
    const Complex I = i_pv(model, y, x, tol);
    const Complex v = model.v(y, x - y);
    return -rho * (I + Complex(0.0, M_PI) * v);
}

PolePoint solve_pole(const TwoBandModel& model, double x, double kappa,
                     std::optional<Complex> guess, double tol) {
    PolePoint p;
    p.x = x;
    p.kappa = kappa;
    if (kappa == 0.0) {
        p.zeta = Complex(x, 0.0);
        p.residual = 0.0;
        p.amplitude_A = Complex(1.0, 0.0);
        p.newton_iters = 0;
        return p;
    }

    const double inner_tol = std::clamp(tol * 1e-2, 5e-14, 1e-10);
    // The derivative integral carries a squared kernel whose peak sits at
    // v/zeta2^2; certifying it at the residual tolerance would hit the
    // roundoff floor for small couplings, and Newton only needs a few digits
    // of it anyway.
    const double deriv_tol = std::max(inner_tol, 1e-11);
    const double k2 = kappa * kappa;
    Complex zeta = guess.value_or(x + k2 * golden_rule_pole(model, x, inner_tol));
    // Zeros stay within O(kappa^2) of x; anything farther is a different branch.
    const double trust_radius = 0.5 * model.i1.width();

    Complex f = d_plus(model, x, kappa, zeta, inner_tol);
    double res = std::abs(f);
    int iters = 0;
    int stalled = 0;
    const int max_iters = 50;
    while (res > tol && iters < max_iters) {
        Complex step;
        if (stalled < 3) {
            const Complex fp = d_plus_dzeta(model, x, kappa, zeta, deriv_tol);
            if (std::abs(fp) < 1e-12)
                throw ConvergenceError("solve_pole: vanishing derivative", zeta,
                                       res);
            step = -f / fp;
        } else {
            // secant restart from two perturbed iterates
            const Complex dz(1e-7 * std::max(1.0, std::abs(zeta)), -1e-7);
            const Complex f2 = d_plus(model, x, kappa, zeta + dz, inner_tol);
            const Complex slope = (f2 - f) / dz;
            if (std::abs(slope) < 1e-12)
                throw ConvergenceError("solve_pole: secant breakdown", zeta, res);
            step = -f / slope;
            stalled = 0;
        }
        Complex next = zeta + step;
        // Keep the iterate off the cut so the continuation stays evaluable.
        const double ycut = model.u_inv(x) + model.nu;
        if (next.imag() == 0.0 && next.real() <= ycut)
            next += Complex(0.0, -1e-8);
        const Complex fn = d_plus(model, x, kappa, next, inner_tol);
        const double rn = std::abs(fn);
        if (rn >= res) ++stalled;
        zeta = next;
        f = fn;
        res = rn;
        ++iters;
    }
    if (res > tol) {
        std::ostringstream os;
        os << "solve_pole: no convergence in " << max_iters
           << " iterations at x = " << x << ", kappa = " << kappa;
        throw ConvergenceError(os.str(), zeta, res);
    }
    if (zeta.imag() > 1e-10) {
        std::ostringstream os;
        os << "solve_pole: converged root has Im zeta = " << zeta.imag()
           << " > 0, which the continued resolvent excludes";
        throw ConvergenceError(os.str(), zeta, res);
    }
    if (std::abs(zeta - Complex(x, 0.0)) > trust_radius) {
        std::ostringstream os;
        os << "solve_pole: root " << zeta.real() << (zeta.imag() < 0 ? "-" : "+")
           << std::abs(zeta.imag()) << "i strayed off the local branch at x = "
           << x;
        throw ConvergenceError(os.str(), zeta, res);
    }
    p.zeta = zeta;
    p.residual = res;
    p.newton_iters = iters;
    p.amplitude_A = residue_amplitude_A(model, x, kappa, p, deriv_tol);
    return p;
}

Complex dzeta_dk2(const TwoBandModel& model, double x, double kappa,
                  const PolePoint& pole, double tol) {
    const double y = model.u_inv(x);
    const double rho = rho_of(model, x);
    const LevelShift g = g_continued(model, y, continued_below(pole.zeta), tol);
    const Complex dg =
        dg_continued_dzeta(model, y, continued_below(pole.zeta), tol);
    const Complex denom = 1.0 + kappa * kappa * rho * dg;
    if (std::abs(denom) < 1e-10)
        throw DomainError("dzeta_dk2: degenerate derivative denominator");
    return -rho * g.g_value / denom;
}

Complex residue_amplitude_A(const TwoBandModel& model, double x, double kappa,
                            const PolePoint& pole, double tol) {
    if (kappa == 0.0) return Complex(1.0, 0.0);
    const double y = model.u_inv(x);
    const double rho = rho_of(model, x);
    const Complex dg =
        dg_continued_dzeta(model, y, continued_below(pole.zeta), tol);
    const Complex denom = 1.0 + kappa * kappa * rho * dg;
    if (std::abs(denom) < 1e-10)
        throw DomainError("residue_amplitude_A: degenerate denominator");
    return 1.0 / denom;
}

ResonanceCurve trace_resonance_curve(const TwoBandModel& model, double kappa,
                                     int n_points, double tol) {
    if (n_points < 2)
        throw DomainError("trace_resonance_curve: n_points must be >= 2");
    ResonanceCurve curve;
    curve.kappa = kappa;
    curve.grid_count = n_points;
    curve.edge_clip = model.edge_clip_rel * model.i1.width();
    const std::vector<double> grid = model.upper_band_grid(n_points);
    curve.points.reserve(grid.size());

    std::optional<Complex> seed;
    std::vector<double> failed;
    double prev_x = 0.0;
    for (double x : grid) {
        try {
            std::optional<Complex> guess;
            if (seed) guess = *seed + (x - prev_x);  // shift along the curve
            PolePoint p = solve_pole(model, x, kappa, guess, tol);
            seed = p.zeta;
            prev_x = x;
            curve.points.push_back(std::move(p));
        } catch (const Error&) {
            failed.push_back(x);
        }
    }
    if (!failed.empty()) {
        std::ostringstream os;
        os << "trace_resonance_curve: " << failed.size()
           << " grid points failed; first failures at x =";
        for (size_t i = 0; i < failed.size() && i < 5; ++i) os << " " << failed[i];
        throw ConvergenceError(os.str(),
                               curve.points.empty()
                                   ? Complex(0.0, 0.0)
                                   : curve.points.back().zeta,
                               0.0);
    }
    return curve;
}

}  // namespace interband
