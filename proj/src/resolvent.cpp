#include "interband/resolvent.hpp"

#include <cmath>

#include "interband/quad.hpp"

namespace interband {

namespace {

// Below this |Im zeta| the plain Cauchy integral is ill-conditioned near the
// cut; values are produced by a first-order step off the axis instead.
constexpr double kNearAxisEta = 1e-6;

bool on_cut(double y, double nu, Complex zeta) {
    return zeta.imag() == 0.0 && zeta.real() <= y + nu;
}

// v's declared holomorphy sector: Re w > nu with arg(w) in [-theta0, 0] for
// the lower wedge, [0, theta0] for the upper one.
void require_sector(const TwoBandModel& model, double y, Complex zeta,
                    bool lower) {
    const Complex w = zeta - y;
    const double ang = std::atan2(w.imag(), w.real());
    const double th = model.sector_theta0 + 1e-12;
    const bool ok = w.real() > model.nu &&
                    (lower ? (ang >= -th && ang <= 1e-12)
                           : (ang <= th && ang >= -1e-12));
    if (!ok)
        throw SectorError("level shift: zeta - y = (" + std::to_string(w.real()) +
                          ", " + std::to_string(w.imag()) +
                          ") outside the declared holomorphy sector");
}

// Boundary value I(y, xi) +- i pi v(y, xi - y) on the axis.
Complex axis_value(const TwoBandModel& model, double y, double xi, int sign,
                   double tol) {
    const Complex I = i_pv(model, y, xi, tol);
    const Complex v = model.v(y, xi - y);
    return I + Complex(0.0, sign * M_PI) * v;
}

// d/dzeta of the continued level shift evaluated on the axis. Integration by
// parts moves the double pole onto dv/dz:
//   G'(zeta) = v(y, nu)/(nu - (zeta - y)) + int_nu^inf v'(y, z)/(y+z-zeta) dz,
// whose boundary value is the principal-value form with the +-i pi v' jump.
Complex axis_deriv(const TwoBandModel& model, double y, double xi, int sign,
                   double tol) {
    const double s = xi - y;
    auto dv_slice = [&model, y](double z) { return model.dv(y, z); };
    const Complex Ipv =
        quad::principal_value(dv_slice, y, xi, model.nu, tol).value;
    const Complex vp = model.dv(y, s);
    const Complex boundary = model.v(y, model.nu) / Complex(model.nu - s, 0.0);
    return boundary + Ipv + Complex(0.0, sign * M_PI) * vp;
}

Complex plain_integral(const TwoBandModel& model, double y, Complex zeta,
                       double tol) {
    auto f = [&model, y, zeta](double z) {
        return model.v(y, z) / (y + z - zeta);
    };
    return quad::integrate_semi_infinite(f, model.nu, tol).value;
}

Complex plain_integral_deriv(const TwoBandModel& model, double y, Complex zeta,
                             double tol) {
    auto f = [&model, y, zeta](double z) {
        const Complex d = y + z - zeta;
        return model.v(y, z) / (d * d);
    };
    return quad::integrate_semi_infinite(f, model.nu, tol).value;
}

}  // namespace

Complex g_plain(const TwoBandModel& model, double y, Complex zeta, double tol) {
    if (zeta.imag() == 0.0)
        throw DomainError("g_plain: Im zeta must be nonzero");
    return plain_integral(model, y, zeta, tol);
}

Complex i_pv(const TwoBandModel& model, double y, double xi, double tol) {
    if (!(xi > y + model.nu))
        throw DomainError("i_pv: requires xi > y + nu");
    auto slice = [&model, y](double z) { return model.v(y, z); };
    return quad::principal_value(slice, y, xi, model.nu, tol).value;
}

LevelShift g_continued(const TwoBandModel& model, double y, ComplexEnergy zeta,
                       double tol) {
    const Complex z = zeta.value;
    const double eta = z.imag();
    const double xi = z.real();
    if (on_cut(y, model.nu, z))
        throw DomainError("g_continued: zeta on the cut (-inf, y+nu]");

    LevelShift out;
    const int axis_sign = (zeta.sheet == Sheet::ContinuedAbove) ? -1
                          : (zeta.sheet == Sheet::Physical && eta < 0.0) ? -1
                                                                         : +1;
    // Exact axis query.
    if (eta == 0.0) {
        const Complex I = i_pv(model, y, xi, tol);
        const Complex v = model.v(y, xi - y);
        out.i_value = I;
        out.jump = Complex(0.0, axis_sign * M_PI) * v;
        out.g_value = I + out.jump;
        return out;
    }
    // Near-axis: first-order step from the axis boundary value of the sheet
    // that is holomorphic across it at this point. The strip |Im zeta| <= eta0
    // lies inside the formfactor's holomorphy neighborhood of the real axis,
    // so no sector test applies here.
    if (std::abs(eta) <= kNearAxisEta && xi - y - model.nu > 1e-9) {
        const Complex val = axis_value(model, y, xi, axis_sign, tol);
        const Complex der = axis_deriv(model, y, xi, axis_sign, tol);
        out.g_value = val + Complex(0.0, eta) * der;
        out.jump = Complex(0.0, axis_sign * M_PI) * model.v(y, xi - y);
        return out;
    }

    const bool add_below = (zeta.sheet == Sheet::ContinuedBelow && eta < 0.0);
    const bool sub_above = (zeta.sheet == Sheet::ContinuedAbove && eta > 0.0);
    if (add_below) require_sector(model, y, z, /*lower=*/true);
    if (sub_above) require_sector(model, y, z, /*lower=*/false);
    out.g_value = plain_integral(model, y, z, tol);
    if (add_below) {
        out.jump = Complex(0.0, 2.0 * M_PI) * model.v(y, z - y);
        out.g_value += out.jump;
    } else if (sub_above) {
        out.jump = Complex(0.0, -2.0 * M_PI) * model.v(y, z - y);
        out.g_value += out.jump;
    }
    return out;
}

Complex dg_continued_dzeta(const TwoBandModel& model, double y,
                           ComplexEnergy zeta, double tol) {
    const Complex z = zeta.value;
    const double eta = z.imag();
    const double xi = z.real();
    if (on_cut(y, model.nu, z))
        throw DomainError("dg_continued_dzeta: zeta on the cut (-inf, y+nu]");
    const int axis_sign = (zeta.sheet == Sheet::ContinuedAbove) ? -1
                          : (zeta.sheet == Sheet::Physical && eta < 0.0) ? -1
                                                                         : +1;
    if (std::abs(eta) <= kNearAxisEta && xi - y - model.nu > 1e-9)
        return axis_deriv(model, y, xi, axis_sign, tol);

    const bool add_below = (zeta.sheet == Sheet::ContinuedBelow && eta < 0.0);
    const bool sub_above = (zeta.sheet == Sheet::ContinuedAbove && eta > 0.0);
    if (add_below) require_sector(model, y, z, /*lower=*/true);
    if (sub_above) require_sector(model, y, z, /*lower=*/false);
    Complex der = plain_integral_deriv(model, y, z, tol);
    if (add_below) der += Complex(0.0, 2.0 * M_PI) * model.dv(y, z - y);
    if (sub_above) der += Complex(0.0, -2.0 * M_PI) * model.dv(y, z - y);
    return der;
}

Complex d_plus(const TwoBandModel& model, double x, double kappa, Complex zeta,
               double tol) {
    const double y = model.u_inv(x);
    const double rho = rho_of(model, x);
    const LevelShift g = g_continued(model, y, continued_below(zeta), tol);
    return x - zeta - kappa * kappa * rho * g.g_value;
}

Complex d_minus(const TwoBandModel& model, double x, double kappa, Complex zeta,
                double tol) {
    const double y = model.u_inv(x);
    const double rho = rho_of(model, x);
    const LevelShift g = g_continued(model, y, continued_above(zeta), tol);
    return x - zeta - kappa * kappa * rho * g.g_value;
}

Complex d_plus_dzeta(const TwoBandModel& model, double x, double kappa,
                     Complex zeta, double tol) {
    const double y = model.u_inv(x);
    const double rho = rho_of(model, x);
    const Complex dg = dg_continued_dzeta(model, y, continued_below(zeta), tol);
    return -1.0 - kappa * kappa * rho * dg;
}

Complex reduced_resolvent_r(const TwoBandModel& model, double x, double kappa,
                            Complex zeta, double tol) {
    if (zeta.imag() == 0.0)
        throw DomainError("reduced_resolvent_r: Im zeta must be nonzero");
    const double y = model.u_inv(x);
    const double rho = rho_of(model, x);
    const LevelShift g = g_continued(model, y, physical(zeta), tol);
    const Complex d = x - zeta - kappa * kappa * rho * g.g_value;
    if (std::abs(d) < 1e-14)
        throw DomainError("reduced_resolvent_r: evaluation too close to a pole");
    return 1.0 / d;
}

ResolventAction apply_resolvent(const TwoBandModel& model, double kappa,
                                Complex zeta,
                                const std::function<Complex(double)>& f1,
                                const std::function<Complex(double, double)>& g1,
                                double x, double y, double z, double tol) {
    if (zeta.imag() == 0.0)
        throw DomainError("apply_resolvent: Im zeta must be nonzero");
    auto lambda_of = [&model](double yy, double zz) {
        return std::sqrt(std::max(0.0, model.v_real(yy, zz)));
    };
    // J(y) = int_K lambda(y, z) g1(y, z) / (y + z - zeta) dz
    auto coupling_integral = [&](double yy) -> Complex {
        auto f = [&](double zz) {
            return lambda_of(yy, zz) * g1(yy, zz) / (yy + zz - zeta);
        };
        return quad::integrate_semi_infinite(f, model.nu, tol).value;
    };

    ResolventAction out;
    {
        const Complex r = reduced_resolvent_r(model, x, kappa, zeta, tol);
        const Complex corr =
            (kappa == 0.0) ? Complex(0.0, 0.0)
                           : kappa * rho_of(model, x) *
                                 coupling_integral(model.u_inv(x));
        out.f_value = r * (f1(x) - corr);
    }
    {
        const double ux = model.u(y);
        const Complex r = reduced_resolvent_r(model, ux, kappa, zeta, tol);
        Complex inner = f1(ux);
        if (kappa != 0.0)
            inner -= kappa * rho_of(model, ux) * coupling_integral(y);
        out.g_value =
            (g1(y, z) - kappa * lambda_of(y, z) * r * inner) / (y + z - zeta);
    }
    return out;
}

}  // namespace interband
