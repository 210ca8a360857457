#include "sqfcs/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "sqfcs/parallel.hpp"
#include "sqfcs/version.hpp"

namespace sqfcs::sweep {

using ordered_json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// names

const char* axis_name(AxisParam p) {
    switch (p) {
        case AxisParam::x_left: return "x_left";
        case AxisParam::x_right: return "x_right";
        case AxisParam::lambda: return "lambda";
        case AxisParam::omega: return "omega";
        case AxisParam::phi_relative: return "phi_relative";
        case AxisParam::A0: return "A0";
    }
    return "?";
}

AxisParam axis_from_name(const std::string& name) {
    for (AxisParam p : {AxisParam::x_left, AxisParam::x_right, AxisParam::lambda,
                        AxisParam::omega, AxisParam::phi_relative, AxisParam::A0})
        if (name == axis_name(p)) return p;
    throw ConfigError("unknown sweep axis '" + name + "'");
}

const char* quantity_name(Quantity q) {
    switch (q) {
        case Quantity::dynamic: return "dynamic";
        case Quantity::scaled: return "scaled";
        case Quantity::geometric: return "geometric";
        case Quantity::geometric_fp: return "geometric_fp";
        case Quantity::closed_forms: return "closed_forms";
        case Quantity::cgf: return "cgf";
        case Quantity::tur: return "tur";
        case Quantity::gc: return "gc";
        case Quantity::curvature: return "curvature";
        case Quantity::oracle: return "oracle";
        case Quantity::exchange: return "exchange";
    }
    return "?";
}

Quantity quantity_from_name(const std::string& name) {
    for (Quantity q : {Quantity::dynamic, Quantity::scaled, Quantity::geometric,
                       Quantity::geometric_fp, Quantity::closed_forms, Quantity::cgf,
                       Quantity::tur, Quantity::gc, Quantity::curvature, Quantity::oracle,
                       Quantity::exchange})
        if (name == quantity_name(q)) return q;
    throw ConfigError("unknown output quantity '" + name + "'");
}

// ---------------------------------------------------------------------------
// config validation

void SweepConfig::validate() const {
    if (axes.size() > 2) throw ValidationError("at most two sweep axes are supported");
    for (const auto& ax : axes) {
        if (ax.count < 2) throw ValidationError("sweep axis count must be >= 2");
        if (!(ax.max > ax.min)) throw ValidationError("sweep axis needs max > min");
    }
    if (axes.size() == 2 && axes[0].param == axes[1].param)
        throw ValidationError("sweep axes must be distinct");
    if (outputs.empty()) throw ValidationError("no output quantities requested");
    std::set<Quantity> seen(outputs.begin(), outputs.end());
    if (seen.size() != outputs.size()) throw ValidationError("duplicate output quantity");
    if (threads < 1) throw ValidationError("threads must be >= 1");
    if (gc.count < 3) throw ValidationError("gc.count must be >= 3");
    if (oracle.periods < 5) throw ValidationError("oracle.periods must be >= 5");
    if (!(oracle.lambda_step > 0.0 && oracle.lambda_step <= 0.1))
        throw ValidationError("oracle.lambda_step out of (0, 0.1]");
    numerics.validate();
}

// ---------------------------------------------------------------------------
// config file parsing

namespace {

struct RawConfig {
    struct Entry {
        std::string value;
        int line;
        bool used = false;
    };
    std::map<std::string, Entry> entries;

    bool has(const std::string& key) const { return entries.count(key) != 0; }

    std::optional<std::string> get(const std::string& key) {
        auto it = entries.find(key);
        if (it == entries.end()) return std::nullopt;
        it->second.used = true;
        return it->second.value;
    }

    double get_double(const std::string& key, double fallback) {
        auto v = get(key);
        if (!v) return fallback;
        try {
            std::size_t pos = 0;
            const double d = std::stod(*v, &pos);
            if (pos != v->size()) throw std::invalid_argument("trailing characters");
            return d;
        } catch (const std::exception&) {
            throw ConfigError("key '" + key + "': expected a number, got '" + *v + "'",
                              entries.at(key).line);
        }
    }

    std::optional<double> get_opt_double(const std::string& key) {
        if (!has(key)) return std::nullopt;
        return get_double(key, 0.0);
    }

    int get_int(const std::string& key, int fallback) {
        const double d = get_double(key, fallback);
        if (d != std::floor(d))
            throw ConfigError("key '" + key + "': expected an integer", entries.at(key).line);
        return static_cast<int>(d);
    }

    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) {
        auto v = get(key);
        if (!v) return fallback;
        try {
            return std::stoull(*v);
        } catch (const std::exception&) {
            throw ConfigError("key '" + key + "': expected an unsigned integer",
                              entries.at(key).line);
        }
    }

    void check_all_used() const {
        for (const auto& [key, e] : entries)
            if (!e.used) throw ConfigError("unknown key '" + key + "'", e.line);
    }
};

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

RawConfig parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    RawConfig raw;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expected 'key = value'", line_no);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("expected 'key = value'", line_no);
        if (raw.entries.count(key))
            throw ConfigError("duplicate key '" + key + "'", line_no);
        raw.entries[key] = RawConfig::Entry{value, line_no};
    }
    return raw;
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok = trim(tok);
        if (!tok.empty()) out.push_back(tok);
    }
    return out;
}

std::optional<AxisSpec> parse_axis(RawConfig& raw, const std::string& base) {
    if (!raw.has(base + ".param")) return std::nullopt;
    AxisSpec ax{axis_from_name(*raw.get(base + ".param")), 0.0, 0.0, 0};
    ax.min = raw.get_double(base + ".min", 0.0);
    ax.max = raw.get_double(base + ".max", 0.0);
    ax.count = raw.get_int(base + ".count", 0);
    return ax;
}

void apply_numerics_keys(RawConfig& raw, Numerics& num) {
    num.quad.panels = raw.get_int("numerics.quad_panels", num.quad.panels);
    num.quad.nodes_per_panel = raw.get_int("numerics.quad_nodes", num.quad.nodes_per_panel);
    num.quad.tol = raw.get_double("numerics.quad_tol", num.quad.tol);
    num.quad.max_doublings = raw.get_int("numerics.quad_max_doublings", num.quad.max_doublings);
    const double base_step = raw.get_double("numerics.deriv_base_step", num.deriv1.base_step);
    const int levels = raw.get_int("numerics.deriv_levels", num.deriv1.levels);
    const double dtol = raw.get_double("numerics.deriv_tol", num.deriv1.tol);
    num.deriv1.base_step = num.deriv2.base_step = base_step;
    num.deriv1.levels = num.deriv2.levels = levels;
    num.deriv1.tol = num.deriv2.tol = dtol;
    num.surface.radial = raw.get_int("numerics.surface_radial", num.surface.radial);
    num.surface.angular = raw.get_int("numerics.surface_angular", num.surface.angular);
    num.surface.tol = raw.get_double("numerics.surface_tol", num.surface.tol);
    num.surface.max_doublings =
        raw.get_int("numerics.surface_max_doublings", num.surface.max_doublings);
    num.time_step_rel = raw.get_double("numerics.time_step_rel", num.time_step_rel);
    num.temp_step = raw.get_double("numerics.temp_step_K", num.temp_step);
    num.crosscheck_tol = raw.get_double("numerics.crosscheck_tol", num.crosscheck_tol);
}

ModelParams model_from_keys(RawConfig& raw) {
    const bool has_theta = raw.has("model.theta0_K");
    const bool has_omega = raw.has("model.omega0_THz");
    if (has_theta == has_omega)
        throw ConfigError("exactly one of model.theta0_K / model.omega0_THz is required");

    BathSpec left{raw.get_double("model.left.gamma_THz", 0.0),
                  raw.get_double("model.left.x", 0.0),
                  raw.get_double("model.left.T0_K", 0.0)};
    BathSpec right{raw.get_double("model.right.gamma_THz", 0.0),
                   raw.get_double("model.right.x", 0.0),
                   raw.get_double("model.right.T0_K", 0.0)};

    DriveProtocol drive;
    const double A0 = raw.get_double("drive.A0_K", 0.0);
    const double Omega = raw.get_double("drive.Omega_THz", 0.0);
    if (raw.has("drive.phi_rad")) {
        if (raw.has("drive.phi_left_rad") || raw.has("drive.phi_right_rad"))
            throw ConfigError("give either drive.phi_rad or the per-side phases, not both");
        drive = DriveProtocol::cosine_sine(A0, Omega, raw.get_double("drive.phi_rad", 0.0));
    } else {
        drive = DriveProtocol{A0, Omega, raw.get_double("drive.phi_left_rad", 0.0),
                              raw.get_double("drive.phi_right_rad", 0.0)};
    }

    if (has_theta)
        return ModelParams(raw.get_double("model.theta0_K", 0.0), left, right, drive);
    return ModelParams::from_site_frequency(raw.get_double("model.omega0_THz", 0.0), left,
                                            right, drive);
}

}  // namespace

SweepConfig load_config(const std::string& path) {
    RawConfig raw = parse_file(path);
    try {
        std::optional<SweepConfig> cfg;
        if (auto preset_name = raw.get("preset")) {
            for (const auto& [key, entry] : raw.entries)
                if (key.rfind("model.", 0) == 0 || key.rfind("drive.", 0) == 0)
                    throw ConfigError("'" + key + "' cannot override a preset model",
                                      entry.line);
            auto jobs = preset(*preset_name);
            cfg.emplace(jobs.front());
        } else {
            cfg.emplace(SweepConfig(model_from_keys(raw)));
        }

        cfg->base_lambda = raw.get_double("point.lambda", cfg->base_lambda);

        if (auto ax = parse_axis(raw, "sweep.axis1")) {
            cfg->axes.clear();
            cfg->axes.push_back(*ax);
            if (auto ax2 = parse_axis(raw, "sweep.axis2")) cfg->axes.push_back(*ax2);
        } else if (raw.has("sweep.axis2.param")) {
            throw ConfigError("sweep.axis2 given without sweep.axis1");
        }

        if (auto out = raw.get("outputs")) {
            cfg->outputs.clear();
            for (const auto& name : split_list(*out))
                cfg->outputs.push_back(quantity_from_name(name));
        }

        apply_numerics_keys(raw, cfg->numerics);
        cfg->gc.lambda_min = raw.get_opt_double("gc.lambda_min");
        cfg->gc.lambda_max = raw.get_opt_double("gc.lambda_max");
        cfg->gc.count = raw.get_int("gc.count", cfg->gc.count);
        cfg->oracle.periods = raw.get_int("oracle.periods", cfg->oracle.periods);
        cfg->oracle.steps_per_period =
            raw.get_int("oracle.steps_per_period", cfg->oracle.steps_per_period);
        cfg->oracle.trajectories = raw.get_int("oracle.trajectories", cfg->oracle.trajectories);
        cfg->oracle.lambda_step = raw.get_double("oracle.lambda_step", cfg->oracle.lambda_step);
        if (auto dir = raw.get("output.dir")) cfg->out_dir = *dir;
        if (auto prefix = raw.get("output.prefix")) cfg->prefix = *prefix;
        cfg->seed = raw.get_u64("seed", cfg->seed);
        cfg->threads = raw.get_int("threads", cfg->threads);

        raw.check_all_used();
        cfg->validate();
        return *cfg;
    } catch (const ConfigError&) {
        throw;
    } catch (const ValidationError& e) {
        throw ConfigError(e.what());
    }
}

// ---------------------------------------------------------------------------
// presets

namespace {

ModelParams preset_model(double T_left, double T_right, double x_left, double x_right) {
    const double omega0 = 7.4 * kPi;  // THz, angular
    return ModelParams::from_site_frequency(
        omega0, BathSpec{1000.0, x_left, T_left}, BathSpec{1000.0, x_right, T_right},
        DriveProtocol::cosine_sine(100.0, 100.0, kPi / 4.0));
}

}  // namespace

std::vector<SweepConfig> preset(const std::string& name) {
    std::vector<SweepConfig> jobs;
    if (name == "fig1cd") {
        SweepConfig cfg(preset_model(300.0, 250.0, 0.0, 0.0));
        cfg.axes.push_back(AxisSpec{AxisParam::lambda, -3.0, 3.0, 121});
        cfg.outputs = {Quantity::cgf};
        cfg.curve_sets = {{0.0, 0.0}, {0.7, 0.0}, {0.0, 0.7}, {kPi, kPi}};
        cfg.prefix = "fig1cd";
        jobs.push_back(cfg);
    } else if (name == "fig2") {
        SweepConfig cfg(preset_model(300.0, 300.0, 0.7, 0.0));
        cfg.axes.push_back(AxisSpec{AxisParam::x_right, 0.0, 3.0, 61});
        cfg.outputs = {Quantity::dynamic, Quantity::scaled, Quantity::geometric,
                       Quantity::exchange};
        cfg.prefix = "fig2";
        jobs.push_back(cfg);
    } else if (name == "fig3") {
        SweepConfig ab(preset_model(300.0, 250.0, 0.7, 0.0));
        ab.axes.push_back(AxisSpec{AxisParam::x_right, 0.0, 3.0, 61});
        ab.outputs = {Quantity::geometric, Quantity::exchange};
        ab.prefix = "fig3ab";
        jobs.push_back(ab);

        SweepConfig cd(preset_model(300.0, 300.0, 0.0, 0.0));
        cd.axes.push_back(AxisSpec{AxisParam::x_left, 0.0, 3.0, 31});
        cd.axes.push_back(AxisSpec{AxisParam::x_right, 0.0, 3.0, 31});
        cd.outputs = {Quantity::geometric};
        cd.prefix = "fig3cd";
        jobs.push_back(cd);
    } else if (name == "fig4") {
        SweepConfig cfg(preset_model(300.0, 300.0, 0.0, 0.7));
        cfg.axes.push_back(AxisSpec{AxisParam::x_left, 0.0, 2.0, 41});
        cfg.outputs = {Quantity::tur};
        cfg.prefix = "fig4";
        jobs.push_back(cfg);
    } else {
        throw ConfigError("unknown preset '" + name + "' (use fig1cd, fig2, fig3 or fig4)");
    }
    return jobs;
}

// ---------------------------------------------------------------------------
// run

namespace {

std::string fmt_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_g(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

ModelParams with_axes(const SweepConfig& cfg, const std::vector<double>& values,
                      double& lambda_out) {
    BathSpec l = cfg.model.left;
    BathSpec r = cfg.model.right;
    DriveProtocol d = cfg.model.drive;
    lambda_out = cfg.base_lambda;
    for (std::size_t k = 0; k < cfg.axes.size(); ++k) {
        const double v = values[k];
        switch (cfg.axes[k].param) {
            case AxisParam::x_left: l.squeeze_x = v; break;
            case AxisParam::x_right: r.squeeze_x = v; break;
            case AxisParam::lambda: lambda_out = v; break;
            case AxisParam::omega: d.Omega = v; break;
            case AxisParam::phi_relative: d.phi_left = d.phi_right + v; break;
            case AxisParam::A0: d.A0 = v; break;
        }
    }
    return ModelParams(cfg.model.theta0, l, r, d);
}

ModelParams swap_squeezing(const ModelParams& p) {
    BathSpec l = p.left;
    BathSpec r = p.right;
    std::swap(l.squeeze_x, r.squeeze_x);
    return ModelParams(p.theta0, l, r, p.drive);
}

struct Cell {
    std::optional<double> value;
};

struct Row {
    std::vector<Cell> cells;
    std::vector<std::string> flags;
    std::vector<std::string> crosscheck_failures;
};

std::vector<std::string> schema_for(const SweepConfig& cfg) {
    std::vector<std::string> cols;
    for (Quantity q : cfg.outputs) {
        switch (q) {
            case Quantity::dynamic:
                cols.insert(cols.end(), {"jd1", "jd2"});
                break;
            case Quantity::scaled:
                cols.insert(cols.end(), {"cd1", "cd2"});
                break;
            case Quantity::geometric:
                cols.insert(cols.end(), {"jg1_line", "jg1_surface", "jg2_line", "jg2_surface"});
                break;
            case Quantity::geometric_fp:
                cols.insert(cols.end(), {"jg1_fp", "jg2_fp"});
                break;
            case Quantity::closed_forms:
                cols.insert(cols.end(),
                            {"jg1_closed", "jg1_closed_resid", "jg2_closed", "jg2_closed_resid"});
                break;
            case Quantity::cgf: {
                auto sets = cfg.curve_sets;
                if (sets.empty())
                    sets = {{cfg.model.left.squeeze_x, cfg.model.right.squeeze_x}};
                for (const auto& [xl, xr] : sets) {
                    cols.push_back("sd_xl" + fmt_g(xl) + "_xr" + fmt_g(xr));
                    cols.push_back("sg_xl" + fmt_g(xl) + "_xr" + fmt_g(xr));
                }
                break;
            }
            case Quantity::tur:
                cols.insert(cols.end(), {"affinity", "fano", "g_omega", "sigma_min",
                                         "standard_lhs", "modified_lhs"});
                break;
            case Quantity::gc:
                cols.push_back("gc_residual");
                break;
            case Quantity::curvature:
                cols.insert(cols.end(), {"F_spectral", "F_fd", "F_closed"});
                break;
            case Quantity::oracle:
                cols.insert(cols.end(), {"jft1", "jft2"});
                if (cfg.oracle.trajectories > 0)
                    cols.insert(cols.end(),
                                {"mc_mean_rate", "mc_mean_se", "mc_var_rate", "mc_var_se"});
                break;
            case Quantity::exchange:
                cols.insert(cols.end(), {"jd1_swap", "jd2_swap", "jg1_swap", "jg2_swap"});
                break;
        }
    }
    return cols;
}

struct ReferencePair {
    std::optional<double> j1;
    std::optional<double> j2;
};

Row compute_row(const SweepConfig& cfg, const ReferencePair& refs,
                const std::vector<double>& axis_values, int index) {
    double lambda = cfg.base_lambda;
    const ModelParams params = with_axes(cfg, axis_values, lambda);
    const Numerics& num = cfg.numerics;

    Row row;
    auto push = [&](std::optional<double> v) { row.cells.push_back(Cell{v}); };
    auto flag = [&](const std::string& f) {
        if (std::find(row.flags.begin(), row.flags.end(), f) == row.flags.end())
            row.flags.push_back(f);
    };

    const double flux_scale = 1e-12 * (params.left.gamma + params.right.gamma);

    for (Quantity q : cfg.outputs) {
        switch (q) {
            case Quantity::dynamic: {
                push(dynamic_cumulant(params, 1, num));
                push(dynamic_cumulant(params, 2, num));
                break;
            }
            case Quantity::scaled: {
                for (int n : {1, 2}) {
                    const auto& ref = n == 1 ? refs.j1 : refs.j2;
                    if (!ref) {
                        push(std::nullopt);
                        flag("ref_zero_n" + std::to_string(n));
                    } else {
                        push(dynamic_cumulant(params, n, num) / *ref);
                    }
                }
                break;
            }
            case Quantity::geometric: {
                std::array<std::optional<double>, 2> line{};
                std::array<double, 2> surf{};
                for (int n : {1, 2}) {
                    surf[n - 1] = geometric_cumulant(params, n, GeometricRoute::surface, num);
                    try {
                        line[n - 1] = geometric_cumulant(params, n, GeometricRoute::line, num);
                    } catch (const DerivativeError&) {
                        // strong squeezing can push the line-route signal below
                        // its finite-difference noise; withhold rather than guess
                        flag("jg" + std::to_string(n) + "_line_unresolved");
                    }
                    push(line[n - 1]);
                    push(surf[n - 1]);
                }
                // Relative to the overall geometric scale at this point, so a
                // cumulant passing through zero (e.g. the noise on the
                // squeezing diagonal) is not flagged over rounding crumbs.
                const double point_scale =
                    std::max(std::abs(surf[0]) + std::abs(surf[1]), flux_scale);
                for (int n : {1, 2}) {
                    if (!line[n - 1]) continue;
                    const double scale = std::max(std::abs(surf[n - 1]), point_scale);
                    if (std::abs(*line[n - 1] - surf[n - 1]) > num.crosscheck_tol * scale) {
                        row.crosscheck_failures.push_back(
                            "point " + std::to_string(index) + ": jg" + std::to_string(n) +
                            " line/surface disagree: " + fmt_g17(*line[n - 1]) + " vs " +
                            fmt_g17(surf[n - 1]));
                    }
                }
                break;
            }
            case Quantity::geometric_fp: {
                push(geometric_cumulant(params, 1, GeometricRoute::surface_fd, num));
                push(geometric_cumulant(params, 2, GeometricRoute::surface_fd, num));
                break;
            }
            case Quantity::closed_forms: {
                const ClosedFormResult f1 = geometric_flux_closed(params, num);
                const ClosedFormResult f2 = geometric_noise_closed(params, num);
                push(f1.value);
                push(f1.residual);
                push(f2.value);
                push(f2.residual);
                break;
            }
            case Quantity::cgf: {
                auto sets = cfg.curve_sets;
                if (sets.empty())
                    sets = {{params.left.squeeze_x, params.right.squeeze_x}};
                for (const auto& [xl, xr] : sets) {
                    BathSpec l = params.left;
                    BathSpec r = params.right;
                    l.squeeze_x = xl;
                    r.squeeze_x = xr;
                    const ModelParams q_params(params.theta0, l, r, params.drive);
                    push(dynamic_cgf(q_params, lambda, num));
                    push(geometric_cgf_line(q_params, lambda, num));
                }
                break;
            }
            case Quantity::tur: {
                const TurReport rep = tur_report(params, num);
                push(rep.affinity);
                push(rep.fano);
                push(rep.flags.g_undefined ? std::nullopt : std::optional<double>(rep.g_omega));
                push(rep.sigma_min);
                push(rep.standard_lhs);
                push(rep.flags.g_undefined ? std::nullopt
                                           : std::optional<double>(rep.modified_lhs));
                if (rep.flags.affinity_zero) flag("affinity_zero");
                if (rep.flags.g_undefined) flag("g_undefined");
                break;
            }
            case Quantity::gc: {
                const double A = affinity(params, num);
                const double lo = cfg.gc.lambda_min.value_or(-A - 1.0);
                const double hi = cfg.gc.lambda_max.value_or(1.0);
                std::vector<double> grid(static_cast<std::size_t>(cfg.gc.count));
                for (int i = 0; i < cfg.gc.count; ++i)
                    grid[static_cast<std::size_t>(i)] =
                        lo + (hi - lo) * i / (cfg.gc.count - 1);
                push(gc_symmetry_residual(params, grid, num));
                break;
            }
            case Quantity::curvature: {
                const double Tl = params.left.T0;
                const double Tr = params.right.T0;
                push(curvature(params, lambda, Tl, Tr));
                push(curvature_fd(params, lambda, Tl, Tr, num));
                const ClosedFormCurvature closed{&params};
                push(closed(lambda, Tl, Tr));
                break;
            }
            case Quantity::oracle: {
                push(oracle::finite_time_cumulant(params, 1, cfg.oracle.lambda_step,
                                                  cfg.oracle.periods,
                                                  cfg.oracle.steps_per_period));
                push(oracle::finite_time_cumulant(params, 2, cfg.oracle.lambda_step,
                                                  cfg.oracle.periods,
                                                  cfg.oracle.steps_per_period));
                if (cfg.oracle.trajectories > 0) {
                    const auto batch = oracle::sample_trajectories(
                        params, cfg.oracle.trajectories, cfg.oracle.periods,
                        cfg.seed + static_cast<std::uint64_t>(index), 0.2, cfg.threads);
                    push(batch.mean_rate());
                    push(batch.mean_rate_stderr());
                    push(batch.variance_rate());
                    push(batch.variance_rate_stderr());
                }
                break;
            }
            case Quantity::exchange: {
                const ModelParams swapped = swap_squeezing(params);
                push(dynamic_cumulant(swapped, 1, num));
                push(dynamic_cumulant(swapped, 2, num));
                push(geometric_cumulant(swapped, 1, GeometricRoute::surface, num));
                push(geometric_cumulant(swapped, 2, GeometricRoute::surface, num));
                break;
            }
        }
    }
    return row;
}

ordered_json model_json(const ModelParams& m) {
    return ordered_json{
        {"theta0_K", m.theta0},
        {"left", {{"gamma_THz", m.left.gamma}, {"x", m.left.squeeze_x}, {"T0_K", m.left.T0}}},
        {"right",
         {{"gamma_THz", m.right.gamma}, {"x", m.right.squeeze_x}, {"T0_K", m.right.T0}}},
        {"drive",
         {{"A0_K", m.drive.A0},
          {"Omega_THz", m.drive.Omega},
          {"phi_left_rad", m.drive.phi_left},
          {"phi_right_rad", m.drive.phi_right}}}};
}

ordered_json numerics_json(const Numerics& n) {
    return ordered_json{{"quad_nodes", n.quad.nodes_per_panel},
                        {"quad_panels", n.quad.panels},
                        {"quad_tol", n.quad.tol},
                        {"quad_max_doublings", n.quad.max_doublings},
                        {"deriv_base_step", n.deriv1.base_step},
                        {"deriv_levels", n.deriv1.levels},
                        {"deriv_tol", n.deriv1.tol},
                        {"surface_radial", n.surface.radial},
                        {"surface_angular", n.surface.angular},
                        {"surface_tol", n.surface.tol},
                        {"surface_max_doublings", n.surface.max_doublings},
                        {"time_step_rel", n.time_step_rel},
                        {"temp_step_K", n.temp_step},
                        {"crosscheck_tol", n.crosscheck_tol}};
}

}  // namespace

RunResult run(const SweepConfig& cfg) {
    cfg.validate();
    namespace fs = std::filesystem;
    fs::create_directories(cfg.out_dir);

    // Grid in row-major order over the axes (a single point when none).
    std::vector<std::vector<double>> grid;
    if (cfg.axes.empty()) {
        grid.push_back({});
    } else if (cfg.axes.size() == 1) {
        for (int i = 0; i < cfg.axes[0].count; ++i) grid.push_back({cfg.axes[0].value(i)});
    } else {
        for (int i = 0; i < cfg.axes[0].count; ++i)
            for (int j = 0; j < cfg.axes[1].count; ++j)
                grid.push_back({cfg.axes[0].value(i), cfg.axes[1].value(j)});
    }

    ReferencePair refs;
    const bool wants_scaled =
        std::find(cfg.outputs.begin(), cfg.outputs.end(), Quantity::scaled) != cfg.outputs.end();
    if (wants_scaled) {
        const double floor = 1e-10 * (cfg.model.left.gamma + cfg.model.right.gamma);
        for (int n : {1, 2}) {
            const double ref = reference_cumulant(cfg.model, n, cfg.numerics);
            auto& slot = n == 1 ? refs.j1 : refs.j2;
            if (std::abs(ref) > floor) slot = ref;
        }
    }

    const std::vector<std::string> columns = schema_for(cfg);
    std::vector<Row> rows(grid.size());
    parallel_for(static_cast<int>(grid.size()), cfg.threads, [&](int i) {
        rows[static_cast<std::size_t>(i)] =
            compute_row(cfg, refs, grid[static_cast<std::size_t>(i)], i);
    });

    // CSV
    const std::string csv_name = cfg.prefix + ".csv";
    const fs::path csv_path = fs::path(cfg.out_dir) / csv_name;
    std::ofstream csv(csv_path);
    if (!csv) throw Error("cannot write " + csv_path.string());
    for (const auto& ax : cfg.axes) csv << axis_name(ax.param) << ",";
    for (const auto& c : columns) csv << c << ",";
    csv << "flags\n";
    for (std::size_t i = 0; i < grid.size(); ++i) {
        for (double v : grid[i]) csv << fmt_g17(v) << ",";
        for (const auto& cell : rows[i].cells)
            csv << (cell.value ? fmt_g17(*cell.value) : "") << ",";
        std::string flags;
        for (const auto& f : rows[i].flags) flags += (flags.empty() ? "" : ";") + f;
        csv << flags << "\n";
    }
    csv.close();

    // manifest
    RunResult result;
    ordered_json manifest;
    manifest["tool"] = "sqfcs";
    manifest["version"] = kVersion;
    manifest["prefix"] = cfg.prefix;
    manifest["seed"] = cfg.seed;
    manifest["model"] = model_json(cfg.model);
    manifest["point"] = {{"lambda", cfg.base_lambda}};
    manifest["axes"] = ordered_json::array();
    for (const auto& ax : cfg.axes)
        manifest["axes"].push_back({{"param", axis_name(ax.param)},
                                    {"min", ax.min},
                                    {"max", ax.max},
                                    {"count", ax.count}});
    manifest["outputs"] = ordered_json::array();
    for (Quantity q : cfg.outputs) manifest["outputs"].push_back(quantity_name(q));
    manifest["curve_sets"] = cfg.curve_sets;
    manifest["numerics"] = numerics_json(cfg.numerics);
    manifest["oracle"] = {{"periods", cfg.oracle.periods},
                          {"steps_per_period", cfg.oracle.steps_per_period},
                          {"trajectories", cfg.oracle.trajectories},
                          {"lambda_step", cfg.oracle.lambda_step}};
    manifest["gc"] = {{"lambda_min", cfg.gc.lambda_min ? ordered_json(*cfg.gc.lambda_min)
                                                       : ordered_json(nullptr)},
                      {"lambda_max", cfg.gc.lambda_max ? ordered_json(*cfg.gc.lambda_max)
                                                       : ordered_json(nullptr)},
                      {"count", cfg.gc.count}};
    if (refs.j1 || refs.j2)
        manifest["reference_cumulants"] = {
            {"j1", refs.j1 ? ordered_json(*refs.j1) : ordered_json(nullptr)},
            {"j2", refs.j2 ? ordered_json(*refs.j2) : ordered_json(nullptr)}};
    manifest["files"] =
        ordered_json::array({{{"name", csv_name},
                              {"rows", grid.size()},
                              {"columns", columns}}});
    ordered_json row_flags = ordered_json::array();
    for (std::size_t i = 0; i < rows.size(); ++i)
        if (!rows[i].flags.empty())
            row_flags.push_back({{"index", i}, {"flags", rows[i].flags}});
    manifest["row_flags"] = row_flags;

    for (auto& r : rows)
        for (auto& f : r.crosscheck_failures) result.crosscheck_failures.push_back(f);
    manifest["crosschecks"] = {{"tol", cfg.numerics.crosscheck_tol},
                               {"failures", result.crosscheck_failures}};

    const std::string manifest_name = cfg.prefix + "_manifest.json";
    const fs::path manifest_path = fs::path(cfg.out_dir) / manifest_name;
    std::ofstream mf(manifest_path);
    if (!mf) throw Error("cannot write " + manifest_path.string());
    mf << manifest.dump(2) << "\n";
    mf.close();

    result.files = {csv_path.string(), manifest_path.string()};
    result.exit_code = result.crosscheck_failures.empty() ? 0 : 3;
    return result;
}

}  // namespace sqfcs::sweep
