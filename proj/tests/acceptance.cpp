// Acceptance suite: every criterion is pinned here at its stated tolerance
// and prints exactly one [PASS]/[FAIL] line. Exit code = number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "interband/decay.hpp"
#include "interband/model.hpp"
#include "interband/resonance.hpp"
#include "test_helpers.hpp"

using namespace interband;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int idx, const std::string& name, bool ok, const std::string& note,
            double seconds) {
    std::printf("[%s] criterion %2d: %-28s %s (%.1fs)\n", ok ? "PASS" : "FAIL",
                idx, name.c_str(), note.c_str(), seconds);
    std::fflush(stdout);
    if (!ok) ++failures;
}

void run(int idx, const std::string& name,
         const std::function<bool(std::string&)>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    std::string note;
    bool ok = false;
    try {
        ok = body(note);
    } catch (const std::exception& e) {
        note = std::string("exception: ") + e.what();
    }
    const double dt =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    report(idx, name, ok, note, dt);
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

// ---- criterion bodies -----------------------------------------------------

bool pv_oracle(std::string& note) {
    const TwoBandModel m = testutil::default_model();
    std::mt19937 rng(20240817u);
    std::uniform_real_distribution<double> uy(0.05, 0.95), us(0.3, 6.0);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const double y = uy(rng);
        const double xi = y + us(rng);
        const double got = i_pv(m, y, xi, 1e-12).real();
        const double brute = testutil::pv_bruteforce(
            [&](double z) { return m.v_real(y, z); }, m.nu, xi - y);
        worst = std::max(worst, std::abs(got - brute));
    }
    note = "max |pv - brute| = " + fmt(worst);
    return worst < 1e-8;
}

bool boundary_values(std::string& note) {
    const TwoBandModel m = testutil::default_model();
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
        const double y = 0.05 + 0.9 * double(i) / 9.0;
        const double xi = y + 0.5 + 4.5 * double(i) / 9.0;
        const Complex lim = g_plain(m, y, Complex(xi, 1e-6), 1e-9);
        const Complex bdry = i_pv(m, y, xi, 1e-12) +
                             Complex(0.0, M_PI) * m.v(y, xi - y);
        worst = std::max(worst, std::abs(lim - bdry));
    }
    note = "max |G(xi+i1e-6) - (I+i pi v)| = " + fmt(worst);
    return worst < 1e-5;
}

bool continuation_smoothness(std::string& note) {
    const TwoBandModel m = testutil::default_model();
    const double y = 0.5;
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
        const double xi = y + m.nu + 0.4 + 4.0 * double(i) / 9.0;
        auto jump = [&](double eta) {
            return g_continued(m, y, continued_below(Complex(xi, eta)), 1e-10)
                       .g_value -
                   g_continued(m, y, continued_below(Complex(xi, -eta)), 1e-10)
                       .g_value;
        };
        const Complex extrap = 2.0 * jump(5e-5) - jump(1e-4);
        worst = std::max(worst, std::abs(extrap));
    }
    note = "max extrapolated jump = " + fmt(worst);
    return worst < 1e-6;
}

bool uniform_bound(std::string& note) {
    const TwoBandModel m = testutil::default_model();
    const AssumptionReport rep = validate_assumptions(m, 64);
    const double y = 0.5;
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        const double xi = -2.0 + 14.0 * double(i) / 49.0;
        for (int j = 0; j < 50; ++j) {
            const double eta =
                1e-6 * std::pow(10.0, 7.0 * double(j) / 49.0);
            const double g = std::abs(g_plain(m, y, Complex(xi, eta), 1e-9));
            worst = std::max(worst, g);
        }
    }
    note = "sup |G| = " + fmt(worst) + " vs bound " + fmt(rep.c4);
    return worst <= rep.c4;
}

bool pole_physics(std::string& note) {
    const TwoBandModel m = testutil::default_model();
    const std::vector<double> kappas{0.05, 0.1, 0.2};
    std::vector<double> errs;
    for (double kappa : kappas) {
        const ResonanceCurve curve = trace_resonance_curve(m, kappa, 101);
        double err = 0.0;
        for (const PolePoint& p : curve.points) {
            if (!(p.residual < 1e-12)) {
                note = "residual " + fmt(p.residual) + " at x=" + fmt(p.x);
                return false;
            }
            if (!(p.zeta.imag() <= 1e-12)) {
                note = "Im zeta = " + fmt(p.zeta.imag()) + " > 1e-12";
                return false;
            }
            if (!(p.zeta.imag() < 0.0)) {
                note = "no strict width at interior x=" + fmt(p.x);
                return false;
            }
            const Complex gr = golden_rule_pole(m, p.x, 1e-12);
            err = std::max(err,
                           std::abs(p.zeta - (p.x + kappa * kappa * gr)));
        }
        errs.push_back(err);
    }
    const double r1 = errs[2] / errs[1];  // 0.2 vs 0.1
    const double r2 = errs[1] / errs[0];  // 0.1 vs 0.05
    note = "kappa^4 ratios " + fmt(r1) + ", " + fmt(r2) + " (ideal 16)";
    return r1 >= 12.0 && r1 <= 20.0 && r2 >= 12.0 && r2 <= 20.0;
}

bool fermi_golden_rule(std::string& note) {
    const TwoBandModel m = testutil::default_model();
    double worst = 0.0;
    for (double x : {2.1, 2.3, 2.5, 2.7, 2.9}) {
        const PolePoint pole = solve_pole(m, x, 0.0);
        const Complex got = dzeta_dk2(m, x, 0.0, pole, 1e-12);
        const double y = m.u_inv(x);
        const double I_brute = testutil::pv_bruteforce(
            [&](double z) { return m.v_real(y, z); }, m.nu, x - y);
        const Complex want =
            -rho_of(m, x) *
            (I_brute + Complex(0.0, M_PI) * m.v_real(y, x - y));
        worst = std::max(worst, std::abs(got - want));
    }
    note = "max |dzeta/dk2 + rho(I+i pi v)| = " + fmt(worst);
    return worst < 1e-8;
}

bool normalization(std::string& note) {
    const TwoBandModel m = testutil::default_model();
    double worst_norm = 0.0, worst_u0 = 0.0;
    for (double kappa : {0.1, 0.2}) {
        for (double x : {2.1, 2.3, 2.5, 2.7, 2.9}) {
            SpectralDensityTable table(m, x, kappa, 1e-9);
            worst_norm = std::max(worst_norm, std::abs(table.norm() - 1.0));
            const Complex u0 = table.fourier(0.0, 1e-9);
            worst_u0 = std::max(worst_u0, std::abs(u0 - 1.0));
        }
    }
    note = "max |int W - 1| = " + fmt(worst_norm) + ", max |U(0)-1| = " +
           fmt(worst_u0);
    return worst_norm < 1e-6 && worst_u0 < 1e-6;
}

bool cross_method(std::string& note) {
    const TwoBandModel m = testutil::default_model();
    const double x = 2.5, kappa = 0.2;
    const PolePoint pole = solve_pole(m, x, kappa);
    SpectralDensityTable table(m, x, kappa, 1e-10);
    const double tmax = 5.0 / pole.zeta2();
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const double t = tmax * double(i) / 19.0;
        const Complex a = table.fourier(t, 1e-9);
        const Complex b = decay_amplitude_contour(m, x, kappa, t, pole, 1e-10);
        worst = std::max(worst, std::abs(a - b));
    }
    note = "max |direct - contour| = " + fmt(worst) + " on [0, " + fmt(tmax) +
           "]";
    return worst < 1e-6;
}

bool exponential_regime(std::string& note) {
    const TwoBandModel m = testutil::default_model();
    const double x = 2.5, kappa = 0.2, c6 = 1.0;
    const PolePoint pole = solve_pole(m, x, kappa);
    const ExpWindow w = exp_window(m, x, kappa, pole, c6);
    const double lo = 2.0 * w.t1, hi = 0.5 * w.t2;
    SpectralDensityTable table(m, x, kappa, 1e-10);
    const int n = 25;
    std::vector<double> ts(n), logu(n), excess(n);
    for (int i = 0; i < n; ++i) {
        const double t = lo * std::pow(hi / lo, double(i) / double(n - 1));
        const Complex u = table.fourier(t, 1e-9);
        const Complex ex = pole.amplitude_A *
                           std::exp(Complex(0.0, -1.0) * pole.zeta * t);
        ts[size_t(i)] = t;
        logu[size_t(i)] = std::log(std::abs(u));
        excess[size_t(i)] = std::abs(u - ex) * t / (kappa * kappa);
    }
    const auto [icept, slope] = testutil::linear_fit(ts, logu);
    (void)icept;
    const double rel = std::abs(slope - (-pole.zeta2())) / pole.zeta2();
    double e_mid = 0.0, e_last = 0.0, e_all = 0.0;
    for (int i = 0; i < n; ++i) {
        e_all = std::max(e_all, excess[size_t(i)]);
        if (i >= n / 3 && i < 2 * n / 3) e_mid = std::max(e_mid, excess[size_t(i)]);
        if (i >= 2 * n / 3) e_last = std::max(e_last, excess[size_t(i)]);
    }
    note = "slope rel err " + fmt(rel) + ", sup error*t/k^2 = " + fmt(e_all);
    return rel < 0.05 && e_all < 50.0 && e_last <= e_mid * 1.05 + 1e-12;
}

bool power_law_tail(std::string& note) {
    const TwoBandModel m = testutil::default_model();
    const double x = 2.5, kappa = 0.2;
    const PolePoint pole = solve_pole(m, x, kappa);
    const TailConstants tail = tail_constants(m, x, kappa);
    const double aw = std::abs(tail.w_nu_x);
    // largest computed t where the exponential term is provably negligible
    double tstar = 200.0;
    for (double t = 200.0; t <= 40000.0; t *= 1.1) {
        if (std::exp(-pole.zeta2() * t) < 1e-12 * aw / (t * t)) {
            tstar = t;
            break;
        }
    }
    const Complex u = decay_amplitude_contour(m, x, kappa, tstar, pole, 1e-12);
    const double ratio = std::abs(u) * tstar * tstar / aw;
    const Complex rotated =
        u * std::exp(Complex(0.0, (m.nu + m.u_inv(x)) * tstar));
    const double dphase =
        std::abs(std::remainder(std::arg(rotated) - (-M_PI), 2.0 * M_PI));
    note = "t* = " + fmt(tstar) + ", |U| t^2/|w| = " + fmt(ratio) +
           ", phase err = " + fmt(dphase);
    return ratio >= 0.98 && ratio <= 1.02 && dphase < 0.05;
}

bool tail_constant_values(std::string& note) {
    const TwoBandModel m = testutil::default_model();
    const TailConstants tail = tail_constants(m, 2.5, 0.2, 1e-12);
    const double kc2 = tail.kappa_crit * tail.kappa_crit;
    note = "d = " + fmt(tail.d_nu_x) + ", kappa_crit^2 = " + fmt(kc2);
    return std::abs(tail.d_nu_x - 1.96) < 1e-9 && std::abs(kc2 - 2.0) < 1e-9;
}

bool determinism_and_schema(std::string& note) {
    const fs::path dir = fs::current_path() / "acceptance_tmp";
    fs::create_directories(dir);
    auto shell = [&](const std::string& args, const std::string& tag) {
        const std::string cmd = std::string(INTERBAND_CLI_PATH) + " " + args +
                                " > " + (dir / (tag + ".out")).string() +
                                " 2>/dev/null";
        return WEXITSTATUS(std::system(cmd.c_str()));
    };
    auto slurp = [](const fs::path& p) {
        std::ifstream f(p, std::ios::binary);
        std::ostringstream ss;
        ss << f.rdbuf();
        return ss.str();
    };
    const std::string res_args = "resonance --kappa 0.1 --x-grid 21 --out ";
    if (shell(res_args + (dir / "r1.csv").string(), "r1") != 0) {
        note = "resonance run failed";
        return false;
    }
    shell(res_args + (dir / "r2.csv").string(), "r2");
    if (slurp(dir / "r1.csv") != slurp(dir / "r2.csv") ||
        slurp(dir / "r1.csv").empty()) {
        note = "resonance output not byte-identical";
        return false;
    }
    const std::string dec_args =
        "decay --x 2.5 --kappa 0.2 --t-min 0.5 --t-max 5 --t-per-decade 2 "
        "--out ";
    shell(dec_args + (dir / "d1.csv").string(), "d1");
    shell(dec_args + (dir / "d2.csv").string(), "d2");
    if (slurp(dir / "d1.csv") != slurp(dir / "d2.csv")) {
        note = "decay output not byte-identical";
        return false;
    }
    shell("density --x 2.5 --kappa 0.2 --x-grid 301 --out " +
              (dir / "w.csv").string(),
          "w");
    shell("tail --x 2.5 --kappa 0.2 --out " + (dir / "t.csv").string(), "t");
    auto first_line = [&](const fs::path& p) {
        return slurp(p).substr(0, slurp(p).find('\n'));
    };
    const bool headers_ok =
        first_line(dir / "r1.csv") ==
            "x,re_zeta,im_zeta,re_A,im_A,residual,iters" &&
        first_line(dir / "d1.csv") ==
            "t,re_u,im_u,abs_u,abs_exp,abs_tail,re_u_contour,im_u_contour" &&
        first_line(dir / "w.csv") == "xi,W" &&
        first_line(dir / "t.csv") ==
            "p,a_nu_x,d_nu_x,kappa_crit,kappa_crit_sq,re_w,im_w,t1,t2,xi0";
    if (!headers_ok) {
        note = "schema mismatch";
        return false;
    }
    note = "byte-identical reruns, headers exact";
    return true;
}

}  // namespace

int main() {
    run(1, "pv-oracle", pv_oracle);
    run(2, "boundary-values", boundary_values);
    run(3, "continuation-smoothness", continuation_smoothness);
    run(4, "uniform-bound", uniform_bound);
    run(5, "pole-physics", pole_physics);
    run(6, "fermi-golden-rule", fermi_golden_rule);
    run(7, "normalization", normalization);
    run(8, "cross-method-amplitude", cross_method);
    run(9, "exponential-regime", exponential_regime);
    run(10, "power-law-tail", power_law_tail);
    run(11, "tail-constants", tail_constant_values);
    run(12, "determinism-schema", determinism_and_schema);
    std::printf("%d/12 criteria passed\n", 12 - failures);
    return failures;
}
