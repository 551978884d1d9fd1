#include "interband/decay.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "interband/quad.hpp"

namespace interband {

namespace {

constexpr int kFitN = 32;  // Chebyshev degree per table domain

double clenshaw(const std::vector<double>& c, double tau) {
    double b1 = 0.0, b2 = 0.0;
    for (int k = int(c.size()) - 1; k >= 1; --k) {
        const double b0 = 2.0 * tau * b1 - b2 + c[size_t(k)];
        b2 = b1;
        b1 = b0;
    }
    return tau * b1 - b2 + c[0];
}

// int_{-1}^{1} T_k and int_{-1}^{1} tau T_k
double int_T(int k) { return (k % 2 == 0) ? 2.0 / (1.0 - double(k) * double(k)) : 0.0; }
double int_tau_T(int k) { return 0.5 * (int_T(k + 1) + int_T(std::abs(k - 1))); }

std::vector<double> cheb_fit(const std::function<double(double)>& f, double a,
                             double b) {
    std::array<double, kFitN + 1> fj;
    const double m = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    for (int j = 0; j <= kFitN; ++j)
        fj[size_t(j)] = f(m + h * std::cos(M_PI * double(j) / double(kFitN)));
    std::vector<double> c(kFitN + 1);
    for (int k = 0; k <= kFitN; ++k) {
        double acc = 0.5 * (fj[0] + (k % 2 == 0 ? fj[kFitN] : -fj[kFitN]));
        for (int j = 1; j < kFitN; ++j)
            acc += fj[size_t(j)] * std::cos(M_PI * double(j) * double(k) / double(kFitN));
        c[size_t(k)] = acc * (2.0 / double(kFitN));
    }
    c[0] *= 0.5;
    c[kFitN] *= 0.5;
    return c;
}

}  // namespace

double spectral_density_W(const TwoBandModel& model, double x, double kappa,
                          double xi, double tol) {
    if (kappa == 0.0)
        throw DomainError("spectral_density_W: the kappa = 0 density is a point "
                          "mass; the evolution is exactly e^{-i x t}");
    if (!model.i1.interior(x))
        throw DomainError("spectral_density_W: x must be interior to the upper band");
    const double xi0 = model.threshold_xi0(x);
    if (xi <= xi0) return 0.0;  // extended by zero below the threshold
    const double y = model.u_inv(x);
    const double rho = rho_of(model, x);
    const double k2r = kappa * kappa * rho;
    const double I = i_pv(model, y, xi, tol).real();
    const double v = model.v_real(y, xi - y);
    const double d1 = x - xi - k2r * I;
    return k2r * v / (d1 * d1 + M_PI * M_PI * k2r * k2r * v * v);
}

double SpectralDensityTable::Domain::eval(double u) const {
    const double tau =
        std::clamp((2.0 * u - (a + b)) / (b - a), -1.0, 1.0);
    return clenshaw(coeffs, tau);
}

void SpectralDensityTable::fit_domain(const TwoBandModel& model, double x,
                                      double kappa, double a, double b,
                                      bool graded, double tol, int depth) {
    const double wtol = 1e-11;
    auto f = [&](double u) {
        const double xi = graded ? xi0_ + u * u : u;
        return spectral_density_W(model, x, kappa, xi, wtol);
    };
    std::vector<double> c = cheb_fit(f, a, b);
    double scale = 0.0, tail = 0.0;
    for (size_t k = 0; k < c.size(); ++k) scale = std::max(scale, std::abs(c[k]));
    for (size_t k = c.size() - 4; k < c.size(); ++k)
        tail = std::max(tail, std::abs(c[k]));
    if (tail <= std::max({1e-14, tol * scale, tol * 1e-3}) || depth >= 24) {
        if (depth >= 24 && tail > 1e3 * std::max(1e-14, tol * scale))
            throw AccuracyError("spectral density table: domain refinement "
                                "stalled", Complex(tail, 0.0), tail);
        domains_.push_back(Domain{a, b, graded, std::move(c)});
        return;
    }
    const double m = 0.5 * (a + b);
    fit_domain(model, x, kappa, a, m, graded, tol, depth + 1);
    fit_domain(model, x, kappa, m, b, graded, tol, depth + 1);
}

SpectralDensityTable::SpectralDensityTable(const TwoBandModel& model, double x,
                                           double kappa, double tol) {
    if (kappa == 0.0)
        throw DomainError("SpectralDensityTable: no density at kappa = 0");
    if (!model.i1.interior(x))
        throw DomainError("SpectralDensityTable: x must be interior");
    const double y = model.u_inv(x);
    const double rho = rho_of(model, x);
    const double k2r = kappa * kappa * rho;
    xi0_ = model.threshold_xi0(x);

    // Slice constants for the truncation bound: C = int v, C2 = sup v,
    // C3 = sup |dv/dz| along this x-slice.
    const double c_int = std::abs(
        quad::integrate_semi_infinite([&](double z) { return model.v(y, z); },
                                      model.nu, 1e-10)
            .value);
    double c2 = 0.0, c3 = 0.0;
    for (double z = model.nu; z < model.nu + 80.0; z += 0.05) {
        c2 = std::max(c2, std::abs(model.v(y, z)));
        c3 = std::max(c3, std::abs(model.dv(y, z)));
    }
    const double c4 = std::sqrt(16.0 * c_int * c3 + M_PI * M_PI * c2 * c2);
    const double shift = k2r * c4;

    // Truncate where either the global envelope or the formfactor tail
    // certifies the remaining mass below the build tolerance.
    const double budget = std::max(tol, 1e-13);
    double xi_max = std::max(xi0_ + 3.0, x + shift + 2.0);
    while (true) {
        const double gap = xi_max - x - shift;
        const double env = k2r * c2 / gap;
        const double vtail = std::abs(
            quad::integrate_semi_infinite(
                [&](double z) { return model.v(y, z); }, xi_max - y, 1e-10)
                .value);
        const double vrem = k2r * vtail / (gap * gap);
        if (std::min(env, vrem) < budget) break;
        xi_max *= 1.3;
        if (xi_max > 1e9)
            throw AccuracyError("SpectralDensityTable: cannot certify tail "
                                "truncation", Complex(xi_max, 0.0), env);
    }
    xi_max_ = xi_max;

    // Domain boundaries: graded threshold panel to xi0 + 1, then the
    // resonance peak region, then the smooth tail.
    const double threshold_end = std::min(xi0_ + 1.0, xi_max_);
    const double width_est = kappa * kappa * M_PI * rho * model.v_real(y, x - y);
    const double hw = std::max(10.0 * width_est, 1e-8);
    std::vector<double> bounds{threshold_end};
    if (x - hw > threshold_end + 0.05 && x + hw < xi_max_ - 0.05) {
        bounds.push_back(x - hw);
        bounds.push_back(x + hw);
    }
    bounds.push_back(xi_max_);

    fit_domain(model, x, kappa, 0.0, std::sqrt(threshold_end - xi0_),
               /*graded=*/true, tol, 0);
    for (size_t i = 0; i + 1 < bounds.size(); ++i)
        fit_domain(model, x, kappa, bounds[i], bounds[i + 1],
                   /*graded=*/false, tol, 0);

    // Total mass on [xi0, xi_max] from the Chebyshev coefficients
    // (int 2 s F(s) ds on graded domains).
    double norm = 0.0;
    for (const Domain& d : domains_) {
        const double m = 0.5 * (d.a + d.b);
        const double h = 0.5 * (d.b - d.a);
        double acc = 0.0;
        if (d.graded) {
            for (size_t k = 0; k < d.coeffs.size(); ++k)
                acc += d.coeffs[k] * (m * int_T(int(k)) + h * int_tau_T(int(k)));
            acc *= 2.0 * h;
        } else {
            for (size_t k = 0; k < d.coeffs.size(); ++k)
                acc += d.coeffs[k] * int_T(int(k));
            acc *= h;
        }
        norm += acc;
    }
    norm_ = norm;
}

double SpectralDensityTable::eval(double xi) const {
    if (xi <= xi0_ || xi >= xi_max_) return 0.0;
    for (const Domain& d : domains_) {
        const double lo = d.graded ? xi0_ + d.a * d.a : d.a;
        const double hi = d.graded ? xi0_ + d.b * d.b : d.b;
        if (xi <= hi && xi >= lo)
            return d.eval(d.graded ? std::sqrt(xi - xi0_) : xi);
    }
    return 0.0;
}

Complex SpectralDensityTable::fourier(double t, double tol) const {
    const double tol_each = tol / double(domains_.size() + 1);
    Complex graded_acc(0.0, 0.0);
    Complex smooth_acc(0.0, 0.0);
    for (const Domain& d : domains_) {
        if (d.graded) {
            auto f = [&](double s) {
                return Complex(2.0 * s * d.eval(s), 0.0) *
                       std::exp(Complex(0.0, -s * s * t));
            };
            graded_acc += quad::integrate_adaptive(f, d.a, d.b, tol_each).value;
        } else {
            auto g = [&](double xi) { return Complex(d.eval(xi), 0.0); };
            smooth_acc += quad::filon_fourier(g, d.a, d.b, t, tol_each).value;
        }
    }
    return std::exp(Complex(0.0, -xi0_ * t)) * graded_acc + smooth_acc;
}

Complex decay_amplitude_direct(const SpectralDensityTable& table, double t,
                               double tol) {
    return table.fourier(t, tol);
}

Complex decay_amplitude_direct(const TwoBandModel& model, double x,
                               double kappa, double t, double tol) {
    if (kappa == 0.0) return std::exp(Complex(0.0, -x * t));
    const double table_tol = std::clamp(tol * 0.1, 1e-12, 1e-9);
    SpectralDensityTable table(model, x, kappa, table_tol);
    return table.fourier(t, tol);
}

Complex decay_amplitude_contour(const TwoBandModel& model, double x,
                                double kappa, double t, const PolePoint& pole,
                                double tol, double theta) {
    if (t < 0.0)
        throw DomainError("decay_amplitude_contour: requires t >= 0");
    if (kappa == 0.0) return std::exp(Complex(0.0, -x * t));
    if (theta <= 0.0) theta = std::min(model.sector_theta0, M_PI / 16.0);
    if (theta > model.sector_theta0 + 1e-15)
        throw DomainError("decay_amplitude_contour: rotation angle exceeds the "
                          "declared sector");
    const double xi0 = model.threshold_xi0(x);
    const double y = model.u_inv(x);
    const double rho = rho_of(model, x);
    const double k2r = kappa * kappa * rho;
    const Complex zeta = pole.zeta;
    const double arg_pole = std::atan2(zeta.imag(), zeta.real() - xi0);
    if (arg_pole < -theta)
        throw DomainError("decay_amplitude_contour: pole lies below the rotated "
                          "ray; the rotation angle does not enclose it");

    const Complex ray = std::exp(Complex(0.0, -theta));
    const double tol_g = std::min(tol, 1e-10);
    auto delta = [&](double s) -> Complex {
        const Complex zs = xi0 + s * ray;
        const Complex g =
            g_continued(model, y, continued_above(zs), tol_g).g_value;
        const Complex vc = model.v(y, zs - y);
        const Complex dm = x - zs - k2r * g;
        const Complex dp = dm - Complex(0.0, 2.0 * M_PI) * k2r * vc;
        return 1.0 / dp - 1.0 / dm;
    };
    const Complex prefactor = ray / Complex(0.0, 2.0 * M_PI);

    Complex background;
    if (t >= 1.0) {
        // sigma = s t keeps the integrand scale t-independent
        const double sig_max = 45.0 / std::sin(theta);
        auto f = [&](double sig) {
            return delta(sig / t) * std::exp(Complex(0.0, -sig) * ray);
        };
        background = prefactor * std::exp(Complex(0.0, -xi0 * t)) / t *
                     quad::integrate_adaptive(f, 0.0, sig_max, tol).value;
    } else {
        double s_max = 20.0;
        while (std::abs(model.v(y, model.nu + s_max * ray)) * k2r > tol * 1e-2 &&
               s_max < 1e5)
            s_max *= 2.0;
        auto f = [&](double s) {
            return delta(s) * std::exp(Complex(0.0, -s * t) * ray);
        };
        background = prefactor * std::exp(Complex(0.0, -xi0 * t)) *
                     quad::integrate_adaptive(f, 0.0, s_max, tol).value;
    }
    return pole.amplitude_A * std::exp(Complex(0.0, -1.0) * zeta * t) +
           background;
}

ExpWindow exp_window(const TwoBandModel& model, double x, double kappa,
                     const PolePoint& pole, double c6) {
    (void)model;
    (void)x;
    if (!(c6 > 0.0)) throw DomainError("exp_window: c6 must be positive");
    const double zeta2 = pole.zeta2();
    if (!(zeta2 > 0.0))
        throw DomainError("exp_window: pole must lie strictly below the axis");
    const double c = c6 * kappa * kappa * zeta2;  // = c6 kappa^4 eta2
    const double einv = std::exp(-1.0);
    if (c > einv * (1.0 + 1e-12))
        throw DomainError("exp_window: C6 kappa^4 eta2 >= 1/e, no window exists");
    if (std::abs(c - einv) <= 1e-12 * einv)
        return ExpWindow{1.0 / zeta2, 1.0 / zeta2};  // tangency of w e^{-w}

    // bisection-safeguarded Newton for w e^{-w} = c on each branch
    auto solve = [c](double lo, double hi) {
        auto f = [c](double w) { return w * std::exp(-w) - c; };
        double w = 0.5 * (lo + hi);
        for (int i = 0; i < 200; ++i) {
            const double fw = f(w);
            if ((fw > 0) == (f(lo) > 0)) lo = w;
            else hi = w;
            const double fp = (1.0 - w) * std::exp(-w);
            double next = (fp != 0.0) ? w - fw / fp : 0.5 * (lo + hi);
            if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
            if (std::abs(next - w) <= 1e-15 * std::max(1.0, std::abs(w))) {
                w = next;
                break;
            }
            w = next;
        }
        return w;
    };
    const double w1 = solve(0.0, 1.0);
    double whi = -std::log(c) + 1.0;
    while (whi * std::exp(-whi) > c) whi *= 1.5;
    const double w2 = solve(1.0, whi);
    return ExpWindow{w1 / zeta2, w2 / zeta2};
}

TailConstants tail_constants(const TwoBandModel& model, double x, double kappa,
                             double tol) {
    if (!model.i1.interior(x))
        throw DomainError("tail_constants: x must be interior to the upper band");
    const double y = model.u_inv(x);
    const double rho = rho_of(model, x);
    TailConstants out;
    out.p = model.threshold_p;
    out.a_threshold = model.threshold_amplitude;
    out.xi0 = model.threshold_xi0(x);

    // cross-check the declared threshold behaviour by a linear fit of
    // v(y, nu+s)/s^p on s in [1e-4, 1e-2], extrapolated to s = 0
    {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const int m = 9;
        for (int i = 0; i < m; ++i) {
            const double s = 1e-4 * std::pow(100.0, double(i) / double(m - 1));
            const double ratio =
                model.v_real(y, model.nu + s) / std::pow(s, out.p);
            sx += s;
            sy += ratio;
            sxx += s * s;
            sxy += s * ratio;
        }
        const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
        const double icept = (sy - slope * sx) / m;
        if (std::abs(icept - out.a_threshold) >
            1e-3 * std::max(1.0, std::abs(out.a_threshold)))
            throw ModelError("tail_constants: declared threshold behaviour "
                             "(p, A) disagrees with the formfactor");
    }

    out.threshold_integral =
        quad::integrate_semi_infinite(
            [&](double z) { return model.v(y, z) / (z - model.nu); }, model.nu,
            tol)
            .value.real();
    const double gap = x - model.nu - y;
    out.d_nu_x = gap - kappa * kappa * rho * out.threshold_integral;
    out.kappa_crit = std::sqrt(gap / (rho * out.threshold_integral));
    if (std::abs(out.d_nu_x) < 1e-10)
        throw DomainError("tail_constants: coupling at the critical value "
                          "kappa_crit, the tail formula degenerates");
    out.w_nu_x = kappa * kappa * rho * out.a_threshold / (out.d_nu_x * out.d_nu_x);
    return out;
}

Complex tail_asymptote(const TwoBandModel& model, double x, double kappa,
                       const TailConstants& tail, double t) {
    (void)model;
    (void)x;
    (void)kappa;
    if (!(t > 0.0)) throw DomainError("tail_asymptote: requires t > 0");
    const double p1 = tail.p + 1.0;
    const Complex phase = std::exp(Complex(0.0, -0.5 * M_PI * p1));
    return tail.w_nu_x * std::exp(Complex(0.0, -tail.xi0 * t)) * phase *
           std::tgamma(p1) * std::pow(t, -p1);
}

DecayRecord make_decay_record(const TwoBandModel& model, double x, double kappa,
                              double c6, double t_min, double t_max,
                              int per_decade, double tol) {
    if (per_decade < 1)
        throw DomainError("make_decay_record: per_decade must be >= 1");
    DecayRecord rec;
    rec.x = x;
    rec.kappa = kappa;
    rec.pole = solve_pole(model, x, kappa);
    rec.tail = tail_constants(model, x, kappa);
    if (kappa != 0.0) rec.window = exp_window(model, x, kappa, rec.pole, c6);

    // t_min = 0 with an explicit t_max prepends a t = 0 row to the sweep
    bool with_zero_row = (t_min == 0.0 && t_max > 0.0);
    if (!(t_min > 0.0) || !(t_max > 0.0)) {
        if (!with_zero_row && kappa == 0.0)
            throw DomainError("make_decay_record: explicit t range required for "
                              "kappa = 0");
        if (with_zero_row)
            t_min = (kappa == 0.0) ? t_max * 1e-3
                                   : std::min(0.25 * rec.window.t1, t_max);
        else {
            t_min = 0.25 * rec.window.t1;
            t_max = 10.0 * rec.window.t2;
        }
    }
    if (!(t_min < t_max))
        throw DomainError("make_decay_record: requires t_min < t_max");

    const int n = std::max(
        2, int(std::lround(std::log10(t_max / t_min) * per_decade)) + 1);
    if (with_zero_row) rec.times.push_back(0.0);
    for (int i = 0; i < n; ++i)
        rec.times.push_back(t_min *
                            std::pow(t_max / t_min, double(i) / double(n - 1)));

    rec.u_direct.reserve(rec.times.size());
    rec.u_contour.reserve(rec.times.size());
    rec.u_exp.reserve(rec.times.size());
    rec.u_tail.reserve(rec.times.size());
    if (kappa == 0.0) {
        for (double t : rec.times) {
            const Complex u = std::exp(Complex(0.0, -x * t));
            rec.u_direct.push_back(u);
            rec.u_contour.push_back(u);
            rec.u_exp.push_back(u);
            rec.u_tail.push_back(Complex(0.0, 0.0));
        }
        return rec;
    }

    const double table_tol = std::clamp(tol * 0.1, 1e-12, 1e-9);
    SpectralDensityTable table(model, x, kappa, table_tol);
    for (double t : rec.times) {
        rec.u_direct.push_back(table.fourier(t, tol));
        rec.u_contour.push_back(
            decay_amplitude_contour(model, x, kappa, t, rec.pole));
        rec.u_exp.push_back(rec.pole.amplitude_A *
                            std::exp(Complex(0.0, -1.0) * rec.pole.zeta * t));
        rec.u_tail.push_back(
            t > 0.0 ? tail_asymptote(model, x, kappa, rec.tail, t)
                    : Complex(0.0, 0.0));
    }
    return rec;
}

SpectralDensity make_spectral_density(const TwoBandModel& model, double x,
                                      double kappa, int n_points, double tol) {
    SpectralDensity out;
    out.x = x;
    out.kappa = kappa;
    out.p_threshold = model.threshold_p;
    const double table_tol = std::clamp(tol, 1e-12, 1e-9);
    SpectralDensityTable table(model, x, kappa, table_tol);
    out.xi0 = table.xi0();
    out.norm = table.norm();

    std::vector<double> grid;
    const double xi_max = table.xi_max();
    if (n_points > 1) {
        for (int i = 0; i < n_points; ++i)
            grid.push_back(out.xi0 +
                           (xi_max - out.xi0) * double(i) / double(n_points - 1));
    } else {
        // composite: graded threshold, refined peak, uniform elsewhere
        const double y = model.u_inv(x);
        const double rho = rho_of(model, x);
        const double hw = std::max(
            10.0 * kappa * kappa * M_PI * rho * model.v_real(y, x - y), 1e-6);
        const double te = std::min(out.xi0 + 1.0, xi_max);
        for (int i = 0; i <= 200; ++i) {
            const double s = double(i) / 200.0;
            grid.push_back(out.xi0 + s * s * (te - out.xi0));
        }
        const double plo = std::max(x - hw, te + 1e-9);
        const double phi = std::min(x + hw, xi_max - 1e-9);
        if (plo < phi) {
            for (int i = 1; i <= 400; ++i)
                grid.push_back(te + (plo - te) * double(i) / 400.0);
            for (int i = 1; i <= 800; ++i)
                grid.push_back(plo + (phi - plo) * double(i) / 800.0);
            for (int i = 1; i <= 600; ++i)
                grid.push_back(phi + (xi_max - phi) * double(i) / 600.0);
        } else {
            for (int i = 1; i <= 1800; ++i)
                grid.push_back(te + (xi_max - te) * double(i) / 1800.0);
        }
    }
    out.samples.reserve(grid.size());
    for (double xi : grid)
        out.samples.emplace_back(xi, xi <= out.xi0
                                         ? 0.0
                                         : spectral_density_W(model, x, kappa, xi));
    return out;
}

}  // namespace interband
