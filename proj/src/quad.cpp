#include "interband/quad.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <vector>

namespace interband {
namespace quad {

namespace {

// Gauss-Kronrod 15(7) abscissae and weights (QUADPACK dqk15).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Segment {
    double a, b;
    Complex value;
    double err;
    bool splittable;
};

struct SegmentCompare {
    bool operator()(const Segment& l, const Segment& r) const {
        return l.err < r.err;
    }
};

// One GK15 application on [a, b]; err is |K15 - G7|.
Segment gk15(const Integrand& f, double a, double b, long& evals) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    Complex resk = kWgk[7] * f(c);
    Complex resg = kWg[3] * f(c);
    ++evals;
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kXgk[j];
        const Complex f1 = f(c - dx);
        const Complex f2 = f(c + dx);
        evals += 2;
        resk += kWgk[j] * (f1 + f2);
        if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
    }
    Segment s;
    s.a = a;
    s.b = b;
    s.value = resk * h;
    s.err = std::abs((resk - resg) * h);
    s.splittable = (b - a) > 1e-15 * (std::abs(a) + std::abs(b) + 1.0);
    if (!std::isfinite(s.value.real()) || !std::isfinite(s.value.imag()))
        throw DomainError("integrate_adaptive: integrand not finite in [" +
                          std::to_string(a) + ", " + std::to_string(b) + "]");
    return s;
}

QuadResult adaptive_core(const Integrand& f, double a, double b, double tol) {
    long evals = 0;
    std::priority_queue<Segment, std::vector<Segment>, SegmentCompare> heap;
    Segment first = gk15(f, a, b, evals);
    Complex total = first.value;
    double toterr = first.err;
    heap.push(first);
    int splits = 0;
    while (toterr > std::max(tol, tol * std::abs(total))) {
        if (splits >= kMaxSubdivisions || heap.empty())
            throw AccuracyError("integrate_adaptive: no convergence after " +
                                    std::to_string(splits) + " subdivisions",
                                total, toterr);
        Segment worst = heap.top();
        heap.pop();
        if (!worst.splittable) continue;  // at the width floor, keep its error
        const double m = 0.5 * (worst.a + worst.b);
        Segment l = gk15(f, worst.a, m, evals);
        Segment r = gk15(f, m, worst.b, evals);
        total += l.value + r.value - worst.value;
        toterr += l.err + r.err - worst.err;
        heap.push(l);
        heap.push(r);
        ++splits;
    }
    return QuadResult{total, toterr, evals};
}

}  // namespace

QuadResult integrate_adaptive(const Integrand& f, double a, double b, double tol) {
    if (!(a < b)) throw DomainError("integrate_adaptive: requires a < b");
    if (!(tol > 0)) throw DomainError("integrate_adaptive: requires tol > 0");
    return adaptive_core(f, a, b, tol);
}

QuadResult integrate_semi_infinite(const Integrand& f, double a, double tol) {
    if (!(tol > 0)) throw DomainError("integrate_semi_infinite: requires tol > 0");
    // z = a + s/(1-s), dz = ds/(1-s)^2, s in [0, 1)
    auto g = [&f, a](double s) -> Complex {
        const double om = 1.0 - s;
        return f(a + s / om) / (om * om);
    };
    return adaptive_core(g, 0.0, 1.0, tol);
}

PvSplit make_pv_split(double y, double xi, double nu, double k_override) {
    const double pole = xi - y;
    if (!(pole > nu))
        throw DomainError("principal_value: pole xi-y must be above nu");
    double k = (k_override > 0.0) ? k_override : 0.5 * std::min(pole - nu, 1.0);
    if (!(k > 0.0 && k < pole - nu))
        throw DomainError("principal_value: window k outside (0, xi-y-nu)");
    return PvSplit{k, nu, pole};
}

QuadResult principal_value(const Integrand& v_slice, double y, double xi,
                           double nu, double tol, double k_override) {
    const PvSplit split = make_pv_split(y, xi, nu, k_override);
    const double s = split.pole;
    const double k = split.k;
    auto plain = [&v_slice, s](double z) { return v_slice(z) / (z - s); };
    const Complex vs = v_slice(s);
    auto middle = [&v_slice, vs, s](double z) {
        return (v_slice(z) - vs) / (z - s);
    };

    QuadResult out;
    out.evaluations = 1;  // the v(s) sample
    const QuadResult left = integrate_adaptive(plain, nu, s - k, tol);
    // The pole sits at an interval endpoint here, which Gauss-Kronrod nodes
    // never touch; the difference quotient has a removable singularity there.
    const QuadResult mid_l = integrate_adaptive(middle, s - k, s, tol);
    const QuadResult mid_r = integrate_adaptive(middle, s, s + k, tol);
    const QuadResult right = integrate_semi_infinite(plain, s + k, tol);
    out.value = left.value + mid_l.value + mid_r.value + right.value;
    out.abs_error_estimate = left.abs_error_estimate + mid_l.abs_error_estimate +
                             mid_r.abs_error_estimate + right.abs_error_estimate;
    out.evaluations +=
        left.evaluations + mid_l.evaluations + mid_r.evaluations + right.evaluations;
    return out;
}

// ---------------------------------------------------------------------------
// Filon-type oscillatory quadrature.
//
// Each panel interpolates g at 17 Chebyshev-Lobatto nodes and integrates the
// interpolant against e^{-i omega tau} with exact moments
//   m_k(omega) = int_{-1}^{1} T_k(tau) e^{-i omega tau} d tau,
// evaluated from the power series in omega (panel widths keep |omega| <= pi,
// where the series terminates well before kMomentTerms). The embedded 9-node
// subset supplies the error estimate.
// ---------------------------------------------------------------------------

namespace {

constexpr int kPanelN = 16;       // interpolation degree per panel
constexpr int kMomentTerms = 48;  // series terms; ample for |omega| <= 4

// a(k, m) = int_{-1}^{1} T_k(tau) tau^m d tau for k <= kPanelN, m <= kMomentTerms.
// Built with  tau*T_k = (T_{k+1} + T_{k-1})/2  downwards in m.
const std::vector<std::array<double, kMomentTerms + 1>>& cheb_power_table() {
    static const auto table = [] {
        const int kmax = kPanelN + kMomentTerms + 1;
        std::vector<std::array<double, kMomentTerms + 1>> a(
            kmax + 1, std::array<double, kMomentTerms + 1>{});
        for (int k = 0; k <= kmax; ++k)
            a[k][0] = (k % 2 == 0) ? 2.0 / (1.0 - double(k) * double(k)) : 0.0;
        for (int m = 1; m <= kMomentTerms; ++m) {
            for (int k = 0; k + m <= kmax; ++k) {
                const double below = (k == 0) ? a[1][m - 1] : a[k - 1][m - 1];
                a[k][m] = 0.5 * (a[k + 1][m - 1] + below);
            }
        }
        a.resize(kPanelN + 1);
        return a;
    }();
    return table;
}

// Moments m_k(omega) for k = 0..kPanelN.
void cheb_moments(double omega, std::array<Complex, kPanelN + 1>& m) {
    const auto& a = cheb_power_table();
    std::array<Complex, kMomentTerms + 1> c;  // (-i omega)^m / m!
    Complex term(1.0, 0.0);
    const Complex step(0.0, -omega);
    for (int mm = 0; mm <= kMomentTerms; ++mm) {
        c[mm] = term;
        term *= step / double(mm + 1);
    }
    for (int k = 0; k <= kPanelN; ++k) {
        Complex acc(0.0, 0.0);
        for (int mm = (k % 2); mm <= kMomentTerms; mm += 2) acc += c[mm] * a[k][mm];
        m[k] = acc;
    }
}

// Chebyshev coefficients from Lobatto samples f_j = f(cos(j pi / N)); the
// interpolant is sum_k c_k T_k.
template <int N>
std::array<Complex, N + 1> cheb_coeffs(const std::array<Complex, N + 1>& fj) {
    std::array<Complex, N + 1> c{};
    for (int k = 0; k <= N; ++k) {
        Complex acc = 0.5 * (fj[0] + (k % 2 == 0 ? fj[N] : -fj[N]));
        for (int j = 1; j < N; ++j)
            acc += fj[j] * std::cos(M_PI * double(j) * double(k) / double(N));
        c[k] = acc * (2.0 / double(N));
    }
    c[0] *= 0.5;
    c[N] *= 0.5;
    return c;
}

struct FilonPanel {
    double a, b;
    Complex value;
    double err;
    bool splittable;
};

struct FilonCompare {
    bool operator()(const FilonPanel& l, const FilonPanel& r) const {
        return l.err < r.err;
    }
};

FilonPanel filon_panel(const Integrand& g, double a, double b, double t,
                       long& evals) {
    const double xc = 0.5 * (a + b);
    const double h2 = 0.5 * (b - a);
    const double omega = t * h2;
    std::array<Complex, kPanelN + 1> f16;
    for (int j = 0; j <= kPanelN; ++j) {
        const double tau = std::cos(M_PI * double(j) / double(kPanelN));
        f16[j] = g(xc + h2 * tau);
    }
    evals += kPanelN + 1;
    const auto c16 = cheb_coeffs<kPanelN>(f16);
    std::array<Complex, kPanelN / 2 + 1> f8;
    for (int j = 0; j <= kPanelN / 2; ++j) f8[j] = f16[2 * j];
    const auto c8 = cheb_coeffs<kPanelN / 2>(f8);

    std::array<Complex, kPanelN + 1> m;
    cheb_moments(omega, m);
    Complex hi(0.0, 0.0), lo(0.0, 0.0);
    for (int k = 0; k <= kPanelN; ++k) hi += c16[k] * m[k];
    for (int k = 0; k <= kPanelN / 2; ++k) lo += c8[k] * m[k];
    const Complex phase = std::exp(Complex(0.0, -t * xc));
    FilonPanel p;
    p.a = a;
    p.b = b;
    p.value = h2 * phase * hi;
    p.err = std::abs(h2 * (hi - lo));
    p.splittable = (b - a) > 1e-15 * (std::abs(a) + std::abs(b) + 1.0);
    if (!std::isfinite(p.value.real()) || !std::isfinite(p.value.imag()))
        throw DomainError("filon_fourier: integrand not finite");
    return p;
}

}  // namespace

QuadResult filon_fourier(const Integrand& g, double a, double b, double t,
                         double tol) {
    if (!(a < b)) throw DomainError("filon_fourier: requires a < b");
    if (!(tol > 0)) throw DomainError("filon_fourier: requires tol > 0");
    if (std::abs(t) * (b - a) < 1.0) {
        auto f = [&g, t](double xi) {
            return g(xi) * std::exp(Complex(0.0, -xi * t));
        };
        return adaptive_core(f, a, b, tol);
    }

    const int n_init = std::max<int>(
        1, int(std::ceil(std::abs(t) * (b - a) / (2.0 * M_PI))));
    long evals = 0;
    std::priority_queue<FilonPanel, std::vector<FilonPanel>, FilonCompare> heap;
    Complex total(0.0, 0.0);
    double toterr = 0.0;
    const double h = (b - a) / double(n_init);
    for (int i = 0; i < n_init; ++i) {
        const double pa = a + h * double(i);
        const double pb = (i + 1 == n_init) ? b : pa + h;
        FilonPanel p = filon_panel(g, pa, pb, t, evals);
        total += p.value;
        toterr += p.err;
        heap.push(p);
    }
    int splits = 0;
    while (toterr > std::max(tol, tol * std::abs(total))) {
        if (splits >= kMaxSubdivisions || heap.empty())
            throw AccuracyError("filon_fourier: no convergence after " +
                                    std::to_string(splits) + " extra panels",
                                total, toterr);
        FilonPanel worst = heap.top();
        heap.pop();
        if (!worst.splittable) continue;
        const double m = 0.5 * (worst.a + worst.b);
        FilonPanel l = filon_panel(g, worst.a, m, t, evals);
        FilonPanel r = filon_panel(g, m, worst.b, t, evals);
        total += l.value + r.value - worst.value;
        toterr += l.err + r.err - worst.err;
        heap.push(l);
        heap.push(r);
        ++splits;
    }
    return QuadResult{total, toterr, evals};
}

}  // namespace quad
}  // namespace interband
