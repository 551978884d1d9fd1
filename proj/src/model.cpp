#include "interband/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "interband/quad.hpp"

namespace interband {

std::vector<double> TwoBandModel::upper_band_grid(int n) const {
    const double clip = edge_clip_rel * i1.width();
    const double a = i1.lo + clip;
    const double b = i1.hi - clip;
    std::vector<double> g(n);
    if (n == 1) {
        g[0] = 0.5 * (a + b);
        return g;
    }
    for (int i = 0; i < n; ++i)
        g[i] = a + (b - a) * double(i) / double(n - 1);
    return g;
}

bool AssumptionReport::all_pass() const {
    for (const auto& c : checks)
        if (c.status == CheckStatus::Fail) return false;
    return true;
}

const AssumptionCheck* AssumptionReport::find(const std::string& id) const {
    for (const auto& c : checks)
        if (c.id == id) return &c;
    return nullptr;
}

TwoBandModel build_cosine_crystal(Interval i0, Interval i1, double g0,
                                  double eps) {
    if (!(i0.lo < i0.hi) || !(i1.lo < i1.hi))
        throw ModelError("cosine crystal: bands must have positive width");
    if (!(i0.hi < i1.lo))
        throw ModelError("cosine crystal: bands must be disjoint and ordered");
    if (!(g0 > 0)) throw ModelError("cosine crystal: g0 must be positive");
    if (eps < 0) throw ModelError("cosine crystal: eps must be nonnegative");

    const double w0w = i0.width();
    const double w1w = i1.width();

    TwoBandModel m;
    m.i0 = i0;
    m.i1 = i1;
    m.nu = 0.0;
    m.params = {{"g0", g0}, {"eps", eps}};

    // Dispersions E0(th) = i0.lo + w0*(1-cos th)/2 (increasing) and
    // E1(th) = i1.hi - w1*(1-cos th)/2 (decreasing) on [0, pi] give the
    // affine band map u = E1 o E0^{-1}.
    m.band_map = [i0, i1, w0w, w1w](double y) {
        return i1.hi - w1w * (y - i0.lo) / w0w;
    };
    m.band_map_deriv = [w0w, w1w](double) { return -w1w / w0w; };
    m.band_map_inverse = [i0, i1, w0w, w1w](double x) {
        return i0.lo + w0w * (i1.hi - x) / w1w;
    };

    // w_j = |E_j'(E_j^{-1})|^{-1}; the common sqrt(s(1-s)) factor is singular
    // at the edges but integrable.
    m.weight0 = [i0, w0w](double y) {
        const double s = (y - i0.lo) / w0w;
        return 1.0 / (w0w * std::sqrt(s * (1.0 - s)));
    };
    m.weight1 = [i1, w1w](double x) {
        const double s = (i1.hi - x) / w1w;
        return 1.0 / (w1w * std::sqrt(s * (1.0 - s)));
    };
    // The substitution cancels exactly for dispersions in this class.
    m.rho_closed_form = [](double) { return 1.0; };

    const double g0sq = g0 * g0;
    m.formfactor_v = [g0sq, eps](double y, Complex z) {
        return g0sq * z * std::exp(-z * (1.0 + eps * y));
    };
    m.formfactor_dv = [g0sq, eps](double y, Complex z) {
        const double a = 1.0 + eps * y;
        return g0sq * std::exp(-z * a) * (1.0 - z * a);
    };
    m.threshold_p = 1.0;
    m.threshold_amplitude = g0sq;
    m.sector_theta0 = M_PI / 8.0;
    return m;
}

double rho_of(const TwoBandModel& model, double x) {
    if (model.rho_closed_form) return model.rho_closed_form(x);
    if (!model.i1.interior(x))
        throw DomainError("rho_of: x must be interior to the upper band when "
                          "no closed form is registered");
    const double y = model.u_inv(x);
    const double w0 = model.weight0(y);
    const double w1 = model.weight1(x);
    const double up = std::abs(model.u_prime(y));
    if (!std::isfinite(w0) || !std::isfinite(w1) || w1 == 0.0 || up == 0.0)
        throw DomainError("rho_of: singular weights at x = " + std::to_string(x));
    return w0 / (up * w1);
}

namespace {

void push_check(AssumptionReport& rep, const std::string& id, bool pass,
                const std::string& detail) {
    rep.checks.push_back(
        {id, pass ? CheckStatus::Pass : CheckStatus::Fail, detail});
}

void push_attested(AssumptionReport& rep, const std::string& id,
                   const std::string& detail) {
    rep.checks.push_back({id, CheckStatus::NotChecked, detail});
}

std::string num(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

}  // namespace

AssumptionReport validate_assumptions(const TwoBandModel& model,
                                      int grid_density) {
    if (grid_density < 16)
        throw DomainError("validate_assumptions: grid_density must be >= 16");
    AssumptionReport rep;
    rep.grid_density = grid_density;
    const int n = grid_density;

    const double clip0 = model.edge_clip_rel * model.i0.width();
    std::vector<double> ygrid(n);
    for (int i = 0; i < n; ++i)
        ygrid[i] = model.i0.lo + clip0 +
                   (model.i0.width() - 2 * clip0) * double(i) / double(n - 1);
    // rho-free checks run on the closed band including the endpoints
    const std::vector<double> xgrid = model.upper_band_grid(n);
    std::vector<double> xgrid_closed(n);
    for (int i = 0; i < n; ++i)
        xgrid_closed[i] =
            model.i1.lo + model.i1.width() * double(i) / double(n - 1);

    // z samples: the threshold itself, a linear range, then a geometric tail.
    std::vector<double> zgrid;
    for (int i = 0; i <= n; ++i)
        zgrid.push_back(model.nu + 2.0 * double(i) / double(n));
    for (double z = model.nu + 2.5; z < model.nu + 60.0; z *= 1.2)
        zgrid.push_back(z);

    // (a1) u is a monotone bijection i0 -> i1.
    {
        bool mono = true, onto = true, roundtrip = true;
        double prev = model.u(ygrid.front());
        const double sgn = model.u_prime(ygrid.front()) > 0 ? 1.0 : -1.0;
        for (int i = 1; i < n; ++i) {
            const double cur = model.u(ygrid[i]);
            if (sgn * (cur - prev) <= 0) mono = false;
            prev = cur;
        }
        for (double y : ygrid)
            if (!model.i1.contains(model.u(y))) onto = false;
        for (double x : xgrid_closed)
            if (std::abs(model.u(model.u_inv(x)) - x) >
                1e-10 * std::max(1.0, std::abs(x)))
                roundtrip = false;
        push_check(rep, "a1", mono && onto && roundtrip,
                   mono ? (onto ? (roundtrip ? "monotone bijection on grid"
                                             : "u(u^{-1}(x)) != x")
                                : "u leaves the upper band")
                        : "u not monotone on grid");
    }

    // (a2) integrability of v in z, bounded weight ratio.
    {
        bool finite = true;
        double cmax = 0.0;
        for (double y : ygrid) {
            try {
                const auto q = quad::integrate_semi_infinite(
                    [&](double z) { return model.v(y, z); }, model.nu, 1e-9);
                const double cv = std::abs(q.value);
                if (!std::isfinite(cv)) finite = false;
                cmax = std::max(cmax, cv);
            } catch (const Error&) {
                finite = false;
            }
        }
        rep.c = cmax;
        double c1 = 0.0;
        bool c1_finite = true;
        for (double x : xgrid) {
            try {
                c1 = std::max(c1, rho_of(model, x));
            } catch (const Error&) {
                c1_finite = false;
            }
        }
        rep.c1 = c1;
        push_check(rep, "a2", finite && c1_finite,
                   "C = " + num(rep.c) + ", C1 = " + num(rep.c1));
    }

    push_attested(rep, "a3",
                  "holomorphy attested by the declared sector, not proven");
    push_attested(rep, "a4", "joint continuity assumed for registered models");

    // (a5) x > u^{-1}(x) + nu; also d and d1.
    {
        double d = std::numeric_limits<double>::infinity();
        double d1 = -std::numeric_limits<double>::infinity();
        for (double x : xgrid_closed) {
            const double gap = x - model.nu - model.u_inv(x);
            d = std::min(d, gap);
            d1 = std::max(d1, gap);
        }
        rep.d = d;
        rep.d1 = d1;
        push_check(rep, "a5", d > 0, "d = " + num(d) + ", d1 = " + num(d1));
    }

    // (a6) v and dv/dz bounded; also C5 for (a9) by central differences of dv.
    {
        double c2 = 0.0, c3 = 0.0, c5 = 0.0;
        bool finite = true;
        const double h = 1e-4;
        for (double y : ygrid) {
            for (double z : zgrid) {
                const double vv = std::abs(model.v(y, z));
                const double dv = std::abs(model.dv(y, z));
                const double d2 =
                    std::abs(model.dv(y, z + h) - model.dv(y, z - h)) / (2 * h);
                if (!std::isfinite(vv) || !std::isfinite(dv)) finite = false;
                c2 = std::max(c2, vv);
                c3 = std::max(c3, dv);
                c5 = std::max(c5, d2);
            }
        }
        rep.c2 = c2;
        rep.c3 = c3;
        rep.c5 = c5;
        rep.c4 = std::sqrt(16.0 * rep.c * rep.c3 + M_PI * M_PI * rep.c2 * rep.c2);
        push_check(rep, "a6", finite,
                   "C2 = " + num(c2) + ", C3 = " + num(c3) +
                       ", C4 = " + num(rep.c4));
        push_check(rep, "a9", finite && std::isfinite(c5), "C5 = " + num(c5));
    }

    // (a7) v vanishes at the photon threshold.
    {
        bool ok = true;
        for (double y : ygrid)
            if (std::abs(model.v(y, model.nu)) > 1e-12 * std::max(1.0, rep.c2))
                ok = false;
        push_check(rep, "a7", ok, ok ? "v(y, nu) = 0" : "v(y, nu) != 0 on grid");
    }

    // (a8) rho * v positive on (nu, nu + nu1) with nu1 > d1.
    {
        bool ok = rep.d1 > 0;
        const double nu1 = 1.125 * std::max(rep.d1, 0.0) + 1e-6;
        for (double x : xgrid) {
            const double y = model.u_inv(x);
            const double rho = rho_of(model, x);
            for (int i = 1; i <= n; ++i) {
                const double xi = model.nu + nu1 * double(i) / double(n + 1);
                if (!(rho * model.v(y, xi).real() > 0)) ok = false;
            }
        }
        push_check(rep, "a8", ok, "checked nu1 = " + num(1.125 * rep.d1));
    }

    push_attested(rep, "a10",
                  "sector theta0 = " + num(model.sector_theta0) +
                      " declared in (0, pi/4): " +
                      (model.sector_theta0 > 0 &&
                               model.sector_theta0 < M_PI / 4
                           ? "yes"
                           : "NO"));

    // (a11) v > 0 strictly above the threshold.
    {
        bool ok = true;
        for (double y : ygrid)
            for (double z : zgrid)
                if (z > model.nu && !(model.v(y, z).real() > 0)) ok = false;
        push_check(rep, "a11", ok,
                   ok ? "v > 0 above threshold" : "v <= 0 somewhere");
    }

    // (a12) decay of |v| along the real axis and the sector rays: |v| must
    // fall at least like 1/r between successive radii.
    {
        bool ok = true;
        const double th = model.sector_theta0;
        for (double y : {ygrid.front(), ygrid[n / 2], ygrid.back()}) {
            for (double ang : {0.0, -0.5 * th, -th}) {
                double prev = std::numeric_limits<double>::infinity();
                for (double r : {10.0, 20.0, 40.0, 80.0}) {
                    const Complex z = model.nu + r * std::exp(Complex(0.0, ang));
                    const double av = std::abs(model.v(y, z));
                    if (!(av * r <= prev * (r / 2.0) + 1e-300)) ok = false;
                    prev = av;
                }
            }
        }
        push_check(rep, "a12", ok,
                   ok ? "|v| decays along sector rays" : "no decay along rays");
    }

    // (a13) threshold behaviour v(y, nu+s) ~ A s^p with the declared p, A.
    {
        bool ok = std::abs(model.threshold_amplitude) > 0;
        for (double y : {ygrid.front(), ygrid[n / 2], ygrid.back()}) {
            // linear fit of ratio(s) = v/s^p against s, extrapolated to s = 0
            double sx = 0, sy = 0, sxx = 0, sxy = 0;
            const int m = 9;
            for (int i = 0; i < m; ++i) {
                const double s = 1e-4 * std::pow(100.0, double(i) / double(m - 1));
                const double ratio =
                    model.v(y, model.nu + s).real() / std::pow(s, model.threshold_p);
                sx += s;
                sy += ratio;
                sxx += s * s;
                sxy += s * ratio;
            }
            const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
            const double icept = (sy - slope * sx) / m;
            if (std::abs(icept - model.threshold_amplitude) >
                1e-3 * std::max(1.0, std::abs(model.threshold_amplitude)))
                ok = false;
        }
        push_check(rep, "a13", ok,
                   "declared p = " + num(model.threshold_p) +
                       ", A = " + num(model.threshold_amplitude));
    }

    return rep;
}

ModelConfig parse_model_config_text(const std::string& text) {
    ModelConfig cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ModelError("config line " + std::to_string(lineno) +
                             ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string valstr = trim(line.substr(eq + 1));
        double val;
        try {
            size_t pos = 0;
            val = std::stod(valstr, &pos);
            if (pos != valstr.size()) throw std::invalid_argument(valstr);
        } catch (const std::exception&) {
            throw ModelError("config line " + std::to_string(lineno) +
                             ": bad numeric value '" + valstr + "'");
        }
        if (key == "i0.lo") cfg.i0.lo = val;
        else if (key == "i0.hi") cfg.i0.hi = val;
        else if (key == "i1.lo") cfg.i1.lo = val;
        else if (key == "i1.hi") cfg.i1.hi = val;
        else if (key == "nu") cfg.nu = val;
        else if (key == "g0") cfg.g0 = val;
        else if (key == "eps") cfg.eps = val;
        else if (key == "theta0") cfg.theta0 = val;
        else
            throw ModelError("config line " + std::to_string(lineno) +
                             ": unknown key '" + key + "'");
    }
    return cfg;
}

ModelConfig load_model_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ModelError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_model_config_text(ss.str());
}

TwoBandModel build_from_config(const ModelConfig& cfg) {
    TwoBandModel m = build_cosine_crystal(cfg.i0, cfg.i1, cfg.g0, cfg.eps);
    m.nu = cfg.nu;
    if (!(cfg.theta0 > 0 && cfg.theta0 < M_PI / 4))
        throw ModelError("config: theta0 must lie in (0, pi/4)");
    m.sector_theta0 = cfg.theta0;
    return m;
}

}  // namespace interband
