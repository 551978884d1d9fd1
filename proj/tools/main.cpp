// Batch front-end: model validation, resonance-curve tracing, spectral
// density, decay amplitudes and tail constants, emitted as CSV or JSON.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "interband/decay.hpp"
#include "interband/model.hpp"
#include "interband/resonance.hpp"

using json = nlohmann::ordered_json;
using namespace interband;

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17e", v);
    return buf;
}

struct Options {
    std::string config_path;
    double kappa = 0.2;
    double x = 2.5;
    int x_grid = 0;
    double t_min = 0.0;
    double t_max = 0.0;
    int t_per_decade = 40;
    double tol = 0.0;  // 0 = per-command default
    double c6 = 1.0;
    int grid_density = 64;
    std::string out_path;
    std::string format = "csv";
};

TwoBandModel make_model(const Options& opt) {
    if (opt.config_path.empty()) return build_from_config(ModelConfig{});
    return build_from_config(load_model_config(opt.config_path));
}

// A plain table: column names plus rows of preformatted cells.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    std::string to_csv() const {
        std::ostringstream os;
        for (size_t i = 0; i < columns.size(); ++i)
            os << columns[i] << (i + 1 < columns.size() ? "," : "\n");
        for (const auto& row : rows)
            for (size_t i = 0; i < row.size(); ++i)
                os << row[i] << (i + 1 < row.size() ? "," : "\n");
        return os.str();
    }
    json to_json() const {
        json arr = json::array();
        for (const auto& row : rows) {
            json obj;
            for (size_t i = 0; i < row.size(); ++i) obj[columns[i]] = row[i];
            arr.push_back(obj);
        }
        return arr;
    }
};

void write_output(const Options& opt, const std::string& text) {
    if (opt.out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(opt.out_path, std::ios::binary);
    if (!f) throw ModelError("cannot open output file: " + opt.out_path);
    f << text;
}

void write_meta(const Options& opt, const std::string& subcommand) {
    if (opt.out_path.empty()) return;
    json meta;
    meta["subcommand"] = subcommand;
    meta["config"] = opt.config_path;
    meta["kappa"] = opt.kappa;
    meta["x"] = opt.x;
    meta["x_grid"] = opt.x_grid;
    meta["t_min"] = opt.t_min;
    meta["t_max"] = opt.t_max;
    meta["t_per_decade"] = opt.t_per_decade;
    meta["tol"] = opt.tol;
    meta["c6"] = opt.c6;
    meta["grid_density"] = opt.grid_density;
    meta["format"] = opt.format;
    std::ofstream f(opt.out_path + ".meta.json", std::ios::binary);
    if (f) f << meta.dump(2) << "\n";
}

void emit_table(const Options& opt, const std::string& subcommand,
                const Table& table) {
    if (opt.format == "json")
        write_output(opt, table.to_json().dump(2) + "\n");
    else
        write_output(opt, table.to_csv());
    write_meta(opt, subcommand);
}

int cmd_validate(const Options& opt) {
    const TwoBandModel model = make_model(opt);
    const AssumptionReport rep = validate_assumptions(model, opt.grid_density);
    json out;
    json checks = json::array();
    for (const auto& c : rep.checks) {
        json jc;
        jc["id"] = c.id;
        jc["status"] = c.status == CheckStatus::Pass       ? "pass"
                       : c.status == CheckStatus::Fail     ? "fail"
                                                           : "not-checked";
        jc["detail"] = c.detail;
        checks.push_back(jc);
    }
    out["assumptions"] = checks;
    out["constants"] = {{"C", rep.c},   {"C1", rep.c1}, {"C2", rep.c2},
                        {"C3", rep.c3}, {"C4", rep.c4}, {"C5", rep.c5}};
    out["d"] = rep.d;
    out["d1"] = rep.d1;
    out["grid_density"] = rep.grid_density;
    out["all_pass"] = rep.all_pass();
    write_output(opt, out.dump(2) + "\n");
    write_meta(opt, "validate");
    return rep.all_pass() ? 0 : 1;
}

int cmd_resonance(const Options& opt) {
    const TwoBandModel model = make_model(opt);
    const double tol = opt.tol > 0 ? opt.tol : 1e-12;
    const int n = opt.x_grid > 0 ? opt.x_grid : 101;
    const ResonanceCurve curve = trace_resonance_curve(model, opt.kappa, n, tol);
    Table t;
    t.columns = {"x", "re_zeta", "im_zeta", "re_A", "im_A", "residual", "iters"};
    for (const PolePoint& p : curve.points)
        t.rows.push_back({fmt(p.x), fmt(p.zeta.real()), fmt(p.zeta.imag()),
                          fmt(p.amplitude_A.real()), fmt(p.amplitude_A.imag()),
                          fmt(p.residual), std::to_string(p.newton_iters)});
    emit_table(opt, "resonance", t);
    return 0;
}

int cmd_density(const Options& opt) {
    const TwoBandModel model = make_model(opt);
    const double tol = opt.tol > 0 ? opt.tol : 1e-9;
    const SpectralDensity dens =
        make_spectral_density(model, opt.x, opt.kappa, opt.x_grid, tol);
    Table t;
    t.columns = {"xi", "W"};
    for (const auto& [xi, w] : dens.samples) t.rows.push_back({fmt(xi), fmt(w)});
    emit_table(opt, "density", t);
    return 0;
}

int cmd_decay(const Options& opt) {
    const TwoBandModel model = make_model(opt);
    const double tol = opt.tol > 0 ? opt.tol : 1e-8;
    const DecayRecord rec =
        make_decay_record(model, opt.x, opt.kappa, opt.c6, opt.t_min, opt.t_max,
                          opt.t_per_decade, tol);
    Table t;
    t.columns = {"t",       "re_u",    "im_u",         "abs_u",
                 "abs_exp", "abs_tail", "re_u_contour", "im_u_contour"};
    for (size_t i = 0; i < rec.times.size(); ++i)
        t.rows.push_back({fmt(rec.times[i]), fmt(rec.u_direct[i].real()),
                          fmt(rec.u_direct[i].imag()),
                          fmt(std::abs(rec.u_direct[i])),
                          fmt(std::abs(rec.u_exp[i])),
                          fmt(std::abs(rec.u_tail[i])),
                          fmt(rec.u_contour[i].real()),
                          fmt(rec.u_contour[i].imag())});
    emit_table(opt, "decay", t);
    return 0;
}

int cmd_tail(const Options& opt) {
    const TwoBandModel model = make_model(opt);
    const double tol = opt.tol > 0 ? opt.tol : 1e-10;
    const TailConstants tail = tail_constants(model, opt.x, opt.kappa, tol);
    PolePoint pole;
    ExpWindow window{0.0, 0.0};
    if (opt.kappa != 0.0) {
        pole = solve_pole(model, opt.x, opt.kappa);
        window = exp_window(model, opt.x, opt.kappa, pole, opt.c6);
    }
    Table t;
    t.columns = {"p",  "a_nu_x", "d_nu_x", "kappa_crit", "kappa_crit_sq",
                 "re_w", "im_w", "t1",     "t2",         "xi0"};
    t.rows.push_back({fmt(tail.p), fmt(tail.a_threshold), fmt(tail.d_nu_x),
                      fmt(tail.kappa_crit),
                      fmt(tail.kappa_crit * tail.kappa_crit),
                      fmt(tail.w_nu_x.real()), fmt(tail.w_nu_x.imag()),
                      fmt(window.t1), fmt(window.t2), fmt(tail.xi0)});
    emit_table(opt, "tail", t);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-band interband decay engine"};
    app.require_subcommand(1);
    Options opt;

    auto add_common = [&opt](CLI::App* sub) {
        sub->add_option("--config", opt.config_path, "model config file");
        sub->add_option("--kappa", opt.kappa, "coupling constant");
        sub->add_option("--x", opt.x, "upper-band energy");
        sub->add_option("--x-grid", opt.x_grid, "grid point count");
        sub->add_option("--t-min", opt.t_min, "first time");
        sub->add_option("--t-max", opt.t_max, "last time");
        sub->add_option("--t-per-decade", opt.t_per_decade,
                        "time points per decade");
        sub->add_option("--tol", opt.tol, "tolerance (0 = command default)");
        sub->add_option("--c6", opt.c6, "error constant of the window equation");
        sub->add_option("--grid-density", opt.grid_density,
                        "validation grid density");
        sub->add_option("--out", opt.out_path, "output path (default stdout)");
        sub->add_option("--format", opt.format, "csv|json")
            ->check(CLI::IsMember({"csv", "json"}));
    };
    CLI::App* validate = app.add_subcommand("validate", "check assumptions");
    CLI::App* resonance = app.add_subcommand("resonance", "trace the pole curve");
    CLI::App* density = app.add_subcommand("density", "spectral density");
    CLI::App* decay = app.add_subcommand("decay", "decay amplitude sweep");
    CLI::App* tail = app.add_subcommand("tail", "tail constants and window");
    for (CLI::App* sub : {validate, resonance, density, decay, tail})
        add_common(sub);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    }

    try {
        if (validate->parsed()) return cmd_validate(opt);
        if (resonance->parsed()) return cmd_resonance(opt);
        if (density->parsed()) return cmd_density(opt);
        if (decay->parsed()) return cmd_decay(opt);
        if (tail->parsed()) return cmd_tail(opt);
    } catch (const ModelError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
