#pragma once

#include <complex>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "interband/errors.hpp"

namespace interband {

using Complex = std::complex<double>;

/// A closed real energy interval [lo, hi] with lo < hi.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double width() const { return hi - lo; }
    bool contains(double x) const { return x >= lo && x <= hi; }
    bool interior(double x) const { return x > lo && x < hi; }
};

/// Immutable description of the two-band system: the lower band i0, the upper
/// band i1, the photon threshold nu, the band map u: i0 -> i1, the spectral
/// weights, the weight ratio rho on i1, and the coupling density
/// v(y, z) = |lambda(y, z)|^2 omega(z) together with its z-derivative, both
/// evaluable at complex z inside the declared sector. All members are set at
/// construction and never mutated; evaluations are pure, so a single model may
/// be shared freely across threads.
struct TwoBandModel {
    Interval i0;
    Interval i1;
    double nu = 0.0;

    std::function<double(double)> band_map;          // u(y), y in i0
    std::function<double(double)> band_map_deriv;    // u'(y)
    std::function<double(double)> band_map_inverse;  // u^{-1}(x), x in i1

    std::function<double(double)> weight0;  // w0 on i0 (interior)
    std::function<double(double)> weight1;  // w1 on i1 (interior)

    // Closed-form weight ratio, when one is registered (cosine crystal: 1).
    std::function<double(double)> rho_closed_form;

    std::function<Complex(double, Complex)> formfactor_v;   // v(y, z)
    std::function<Complex(double, Complex)> formfactor_dv;  // dv/dz(y, z)

    // Threshold behaviour v(y, nu + s) ~ threshold_amplitude * s^threshold_p.
    double threshold_p = 1.0;
    double threshold_amplitude = 1.0;

    double sector_theta0 = M_PI / 8.0;  // continuation sector half-angle

    std::map<std::string, double> params;  // named parameters of the family

    // Relative edge clip applied when building grids over i1.
    double edge_clip_rel = 1e-9;

    double u(double y) const { return band_map(y); }
    double u_prime(double y) const { return band_map_deriv(y); }
    double u_inv(double x) const { return band_map_inverse(x); }
    Complex v(double y, Complex z) const { return formfactor_v(y, z); }
    double v_real(double y, double z) const { return formfactor_v(y, z).real(); }
    Complex dv(double y, Complex z) const { return formfactor_dv(y, z); }

    /// Lowest reachable total energy when decaying from band point x.
    double threshold_xi0(double x) const { return nu + u_inv(x); }

    /// Uniform grid over the interior of i1, clipped away from the edges.
    std::vector<double> upper_band_grid(int n) const;
};

/// Status of a single numerically checkable assumption.
enum class CheckStatus { Pass, Fail, NotChecked };

struct AssumptionCheck {
    std::string id;        // "a1" .. "a13"
    CheckStatus status = CheckStatus::NotChecked;
    std::string detail;
};

/// Validation output: per-assumption verdicts plus the estimated constants
/// entering the closed bounds.
struct AssumptionReport {
    std::vector<AssumptionCheck> checks;
    double c = 0.0;    // sup_y int v(y, z) dz
    double c1 = 0.0;   // sup of the weight-ratio bound
    double c2 = 0.0;   // sup v
    double c3 = 0.0;   // sup |dv/dz|
    double c4 = 0.0;   // sqrt(16*c*c3 + pi^2*c2^2)
    double c5 = 0.0;   // sup |d2v/dz2|
    double d = 0.0;    // min_x (x - nu - u^{-1}(x))
    double d1 = 0.0;   // sup_x (x - u^{-1}(x) - nu)
    int grid_density = 0;

    bool all_pass() const;
    const AssumptionCheck* find(const std::string& id) const;
};

/// Builds the cosine-crystal model: cosine dispersions on both bands, the
/// affine band map they induce, rho = 1 in closed form, nu = 0 and coupling
/// density v(y, z) = g0^2 z e^{-z(1 + eps y)}.
TwoBandModel build_cosine_crystal(Interval i0, Interval i1, double g0,
                                  double eps);

/// Weight ratio rho(x) = w0(u^{-1}(x)) / (|u'(u^{-1}(x))| w1(x)). Prefers a
/// registered closed form; otherwise evaluates the quotient, which requires x
/// strictly inside i1 (the weights may blow up at the edges).
double rho_of(const TwoBandModel& model, double x);

/// Runs every numerically checkable assumption on tensor grids of the given
/// density and estimates the constants. Failures are reported, never thrown.
AssumptionReport validate_assumptions(const TwoBandModel& model,
                                      int grid_density);

/// Key/value model configuration ("key = value", '#' comments). Recognized
/// keys: i0.lo i0.hi i1.lo i1.hi nu g0 eps theta0. Unknown keys are errors.
struct ModelConfig {
    Interval i0{0.0, 1.0};
    Interval i1{2.0, 3.0};
    double nu = 0.0;
    double g0 = 1.0;
    double eps = 0.0;
    double theta0 = M_PI / 8.0;
};

ModelConfig parse_model_config_text(const std::string& text);
ModelConfig load_model_config(const std::string& path);
TwoBandModel build_from_config(const ModelConfig& cfg);

}  // namespace interband
