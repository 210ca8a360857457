// sweep.hpp — batch front end: configuration, figure presets, parameter
// sweeps, CSV and manifest emission

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sqfcs/oracle.hpp"
#include "sqfcs/thermo.hpp"

namespace sqfcs::sweep {

enum class AxisParam { x_left, x_right, lambda, omega, phi_relative, A0 };

const char* axis_name(AxisParam p);
AxisParam axis_from_name(const std::string& name);

struct AxisSpec {
    AxisParam param;
    double min;
    double max;
    int count;

    double value(int i) const { return min + (max - min) * i / (count - 1); }
};

// Column groups a run can emit.
enum class Quantity {
    dynamic,       // jd1, jd2
    scaled,        // cd1, cd2 (withheld when the reference vanishes)
    geometric,     // jg1/jg2 via line and surface routes, cross-checked
    geometric_fp,  // jg1/jg2 via the finite-difference curvature route
    closed_forms,  // compact closed forms with residuals vs the surface route
    cgf,           // S_d(lambda), S_g(lambda) per curve set
    tur,           // affinity, fano, g, sigma_min, both TUR left-hand sides
    gc,            // Gallavotti-Cohen symmetry residual
    curvature,     // curvature at the orbit center, three evaluators
    oracle,        // finite-time propagator cumulants (+ sampler when enabled)
    exchange       // jd/jg with the two squeezing parameters swapped
};

const char* quantity_name(Quantity q);
Quantity quantity_from_name(const std::string& name);

struct OracleSettings {
    int periods = 30;
    int steps_per_period = 256;
    int trajectories = 0;  // 0 disables the stochastic sampler columns
    double lambda_step = 2e-2;
};

struct GcSettings {
    // Defaults to [-affinity - 1, 1] when min/max are unset.
    std::optional<double> lambda_min;
    std::optional<double> lambda_max;
    int count = 41;
};

struct SweepConfig {
    ModelParams model;
    double base_lambda = 0.3;  // lambda used by cgf/curvature unless swept
    std::vector<AxisSpec> axes;
    std::vector<Quantity> outputs;
    std::vector<std::pair<double, double>> curve_sets;  // (x_l, x_r) per cgf column pair
    Numerics numerics;
    OracleSettings oracle;
    GcSettings gc;
    std::string out_dir = ".";
    std::string prefix = "run";
    std::uint64_t seed = 0;
    int threads = 1;

    explicit SweepConfig(ModelParams m) : model(std::move(m)) {}

    void validate() const;
};

// Flat key = value document; '#' starts a comment.  Unknown or duplicate keys
// and invariant violations raise ConfigError with the offending line.
SweepConfig load_config(const std::string& path);

// Frozen figure presets (fig1cd, fig2, fig3, fig4); fig3 expands to two jobs.
std::vector<SweepConfig> preset(const std::string& name);

struct RunResult {
    std::vector<std::string> files;  // paths written (CSV + manifest)
    std::vector<std::string> crosscheck_failures;
    int exit_code = 0;  // 0 ok, 3 cross-check failure
};

// Executes the sweep: one CSV (axes first, quantity columns, flags last;
// floats at 17 significant digits) plus a JSON manifest carrying everything
// needed to regenerate the numbers.  Deterministic bytes for a fixed config
// and seed, independent of the thread count.
RunResult run(const SweepConfig& cfg);

}  // namespace sqfcs::sweep
