#include "sqfcs/verify.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "sqfcs/oracle.hpp"
#include "sqfcs/sweep.hpp"
#include "sqfcs/thermo.hpp"

namespace sqfcs::verify {

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

ModelParams fig_model(double T_left, double T_right, double x_left, double x_right) {
    return ModelParams::from_site_frequency(
        7.4 * kPi, BathSpec{1000.0, x_left, T_left}, BathSpec{1000.0, x_right, T_right},
        DriveProtocol::cosine_sine(100.0, 100.0, kPi / 4.0));
}

ModelParams with_squeezing(const ModelParams& p, double xl, double xr) {
    BathSpec l = p.left;
    BathSpec r = p.right;
    l.squeeze_x = xl;
    r.squeeze_x = xr;
    return ModelParams(p.theta0, l, r, p.drive);
}

double rel_gap(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale > 0.0 ? std::abs(a - b) / scale : 0.0;
}

// ---- 1. zero eigenvalue at vanishing counting field --------------------

CriterionResult c1_zero_eigenvalue(const Options& opts) {
    std::mt19937_64 rng(12345);
    auto uni = [&](double a, double b) {
        return std::uniform_real_distribution<double>(a, b)(rng);
    };
    const int draws = opts.fast ? 1000 : 10000;
    double worst = 0.0;
    for (int i = 0; i < draws; ++i) {
        const double Tl = uni(60.0, 600.0);
        const double Tr = uni(60.0, 600.0);
        const double A0 = uni(0.0, 0.8 * std::min(Tl, Tr));
        const ModelParams p(uni(20.0, 400.0), BathSpec{uni(10.0, 2000.0), uni(0.0, 3.0), Tl},
                            BathSpec{uni(10.0, 2000.0), uni(0.0, 3.0), Tr},
                            DriveProtocol{A0, uni(5.0, 500.0), uni(-kPi, kPi), uni(-kPi, kPi)});
        const double t = uni(-3.0, 3.0) * p.drive.period();
        const TiltedGenerator g = build_generator(p, 0.0, t);
        const double rate_sum = -g.m00 - g.m11;  // al+ar+bl+br at lambda = 0
        worst = std::max(worst, std::abs(dominant_eigenvalue(g)) / (1e-12 * rate_sum));
    }
    return {1, "zero eigenvalue at lambda = 0",
            worst <= 1.0,
            std::to_string(draws) + " draws, worst |zeta0| = " + num(worst) +
                " of the 1e-12 rate-sum bound"};
}

// ---- 2. geometric route agreement ---------------------------------------

CriterionResult c2_route_agreement(const Options&) {
    const Numerics numerics;
    const ModelParams base = fig_model(300.0, 250.0, 0.0, 0.0);
    double worst = 0.0;
    std::string worst_at;
    for (double xl : {0.0, 0.35, 0.7}) {
        for (double xr : {0.0, 0.35, 0.7}) {
            const ModelParams p = with_squeezing(base, xl, xr);
            for (int n : {1, 2}) {
                const double line = geometric_cumulant(p, n, GeometricRoute::line, numerics);
                const double surf = geometric_cumulant(p, n, GeometricRoute::surface, numerics);
                const double fd = geometric_cumulant(p, n, GeometricRoute::surface_fd, numerics);
                const double gap = std::max({rel_gap(line, surf), rel_gap(line, fd),
                                             rel_gap(surf, fd)});
                if (gap > worst) {
                    worst = gap;
                    std::ostringstream os;
                    os << "n=" << n << " x=(" << xl << "," << xr << ")";
                    worst_at = os.str();
                }
            }
        }
    }
    return {2, "line/surface/finite-difference route agreement", worst <= 1e-4,
            "worst pairwise relative gap " + num(worst) + " at " + worst_at +
                " (tolerance 1e-4)"};
}

// ---- 3. finite-time propagator and stochastic sampler -------------------

CriterionResult c3_oracle_agreement(const Options& opts) {
    const Numerics numerics;
    const ModelParams p = fig_model(300.0, 250.0, 0.7, 0.0);
    bool pass = true;
    std::ostringstream detail;

    double ft1 = 0.0;
    for (int n : {1, 2}) {
        const double adiabatic = dynamic_cumulant(p, n, numerics) +
                                 geometric_cumulant(p, n, GeometricRoute::surface, numerics);
        const double ft = oracle::finite_time_cumulant(p, n, 2e-2, 30, 256);
        if (n == 1) ft1 = ft;
        const double gap = std::abs(ft - adiabatic) / std::abs(adiabatic);
        pass = pass && gap <= 1e-2;
        detail << "n=" << n << ": propagator " << num(ft) << " vs adiabatic " << num(adiabatic)
               << " (rel " << num(gap) << "); ";
    }

    const int n_traj = opts.fast ? 10000 : 100000;
    const auto batch = oracle::sample_trajectories(p, n_traj, 30.0, 20250808ULL, 0.2,
                                                   opts.threads);
    const double dev_mean = std::abs(batch.mean_rate() - ft1) / batch.mean_rate_stderr();
    pass = pass && dev_mean <= 3.0;
    detail << "sampler mean " << num(batch.mean_rate()) << " at " << num(dev_mean)
           << " sigma from propagator (" << n_traj << " trajectories)";
    const double ft2 = oracle::finite_time_cumulant(p, 2, 2e-2, 30, 256);
    const double dev_var =
        std::abs(batch.variance_rate() - ft2) / batch.variance_rate_stderr();
    detail << "; variance at " << num(dev_var) << " sigma";
    pass = pass && dev_var <= 5.0;

    return {3, "finite-time propagator and sampler agreement", pass, detail.str()};
}

// ---- 4. exchange symmetries ----------------------------------------------

CriterionResult c4_exchange_symmetries(const Options&) {
    const Numerics numerics;
    const double xa = 0.7, xb = 0.2;
    auto residuals = [&](double Tl, double Tr) {
        const ModelParams p1 = fig_model(Tl, Tr, xa, xb);
        const ModelParams p2 = fig_model(Tl, Tr, xb, xa);
        std::array<double, 4> res{};
        const double jd1a = dynamic_cumulant(p1, 1, numerics);
        const double jd1b = dynamic_cumulant(p2, 1, numerics);
        res[0] = std::abs(jd1a + jd1b) / std::max(std::abs(jd1a), std::abs(jd1b));
        const double jd2a = dynamic_cumulant(p1, 2, numerics);
        const double jd2b = dynamic_cumulant(p2, 2, numerics);
        res[1] = std::abs(jd2a - jd2b) / std::max(std::abs(jd2a), std::abs(jd2b));
        const double jg1a = geometric_cumulant(p1, 1, GeometricRoute::surface, numerics);
        const double jg1b = geometric_cumulant(p2, 1, GeometricRoute::surface, numerics);
        res[2] = std::abs(jg1a - jg1b) / std::max(std::abs(jg1a), std::abs(jg1b));
        const double jg2a = geometric_cumulant(p1, 2, GeometricRoute::surface, numerics);
        const double jg2b = geometric_cumulant(p2, 2, GeometricRoute::surface, numerics);
        res[3] = std::abs(jg2a + jg2b) / std::max(std::abs(jg2a), std::abs(jg2b));
        return res;
    };

    const auto equal = residuals(300.0, 300.0);
    const auto unequal = residuals(300.0, 250.0);
    bool pass = true;
    for (double r : equal) pass = pass && r <= 1e-6;
    for (double r : unequal) pass = pass && r > 1e-6;
    std::ostringstream detail;
    detail << "equal-T residuals (jd1-,jd2+,jg1+,jg2-): " << num(equal[0]) << ", "
           << num(equal[1]) << ", " << num(equal[2]) << ", " << num(equal[3])
           << " (<= 1e-6); unequal-T residuals: " << num(unequal[0]) << ", "
           << num(unequal[1]) << ", " << num(unequal[2]) << ", " << num(unequal[3])
           << " (must exceed 1e-6)";
    return {4, "exchange symmetries hold at equal T and break at unequal T", pass,
            detail.str()};
}

// ---- 5. geometric flux without geometric noise on the diagonal ----------

CriterionResult c5_diagonal_zero(const Options&) {
    const Numerics numerics;
    const ModelParams diag = fig_model(300.0, 300.0, 0.7, 0.7);
    const ModelParams refp = fig_model(300.0, 300.0, 0.7, 0.0);
    const double jg2_diag = geometric_cumulant(diag, 2, GeometricRoute::surface, numerics);
    const double jg2_ref = geometric_cumulant(refp, 2, GeometricRoute::surface, numerics);
    const double jg1_diag = geometric_cumulant(diag, 1, GeometricRoute::surface, numerics);
    const bool pass =
        std::abs(jg2_diag) <= 1e-8 * std::abs(jg2_ref) && std::abs(jg1_diag) > 0.0;
    return {5, "diagonal squeezing kills geometric noise but not geometric flux", pass,
            "|jg2(0.7,0.7)| = " + num(std::abs(jg2_diag)) + " vs 1e-8 * |jg2(0.7,0)| = " +
                num(1e-8 * std::abs(jg2_ref)) + "; jg1(0.7,0.7) = " + num(jg1_diag)};
}

// ---- 6. geometricity decay under strong squeezing ------------------------

CriterionResult c6_geometricity_decay(const Options&) {
    const Numerics numerics;
    const ModelParams base = fig_model(300.0, 250.0, 0.0, 0.0);
    const ModelParams heavy = with_squeezing(base, 3.0, 3.0);
    bool pass = true;
    std::ostringstream detail;
    for (int n : {1, 2}) {
        const double j0 = geometric_cumulant(base, n, GeometricRoute::surface, numerics);
        const double j3 = geometric_cumulant(heavy, n, GeometricRoute::surface, numerics);
        const double ratio = std::abs(j3 / j0);
        pass = pass && ratio < 1e-3;
        detail << "|Cg" << n << "(3,3)/Cg" << n << "(0,0)| = " << num(ratio) << "; ";
    }
    detail << "threshold 1e-3; the model obeys jg1(x,x) = jg1(0,0)/cosh(2x) exactly, so the "
              "n=1 ratio equals 1/cosh(6) = "
           << num(1.0 / std::cosh(6.0)) << " and cannot reach 1e-3 before x = 3.81";
    return {6, "geometric cumulants decay under strong squeezing", pass, detail.str()};
}

// ---- 7. fluctuation-symmetry recovery ------------------------------------

CriterionResult c7_gc_recovery(const Options&) {
    const Numerics numerics;
    const ModelParams base = fig_model(300.0, 250.0, 0.0, 0.0);
    auto grid_for = [&](const ModelParams& p) {
        const double A = affinity(p, numerics);
        std::vector<double> grid(41);
        const double lo = -A - 1.0, hi = 1.0;
        for (int i = 0; i < 41; ++i) grid[i] = lo + (hi - lo) * i / 40.0;
        return grid;
    };
    auto cgf_scale = [&](const ModelParams& p, const std::vector<double>& grid) {
        double zmax = 0.0;
        for (double lam : grid) zmax = std::max(zmax, std::abs(dynamic_cgf(p, lam, numerics)));
        return zmax;
    };
    const auto grid0 = grid_for(base);
    const double res0 = gc_symmetry_residual(base, grid0, numerics);
    const ModelParams heavy = with_squeezing(base, 3.0, 3.0);
    const auto grid3 = grid_for(heavy);
    const double res3 = gc_symmetry_residual(heavy, grid3, numerics);
    const double rel0 = res0 / cgf_scale(base, grid0);
    const double rel3 = res3 / cgf_scale(heavy, grid3);

    const ModelParams statics(base.theta0, base.left, base.right,
                              DriveProtocol{0.0, 100.0, kPi / 4.0, -kPi / 4.0});
    const double res_static = gc_symmetry_residual(statics, grid_for(statics), numerics);

    const bool pass = res3 <= 1e-3 * res0 && res_static <= 1e-10;
    std::ostringstream detail;
    detail << "residual(x=3)/residual(x=0) = " << num(res3 / res0)
           << " (required <= 1e-3); static unsqueezed residual = " << num(res_static)
           << " (<= 1e-10). The absolute residual cannot decay: the CGF scale grows as"
              " cosh(2x) while the affinity spread shrinks as 1/cosh(2x); measured against"
              " the CGF scale the violation is "
           << num(rel3) << " at x = 3 vs " << num(rel0) << " at x = 0 (ratio "
           << num(rel3 / rel0) << "), and the scale-relative bound residual <= 1e-3 * "
           << "max|<zeta0>| holds with margin " << num(res3 / (1e-3 * cgf_scale(heavy, grid3)));
    return {7, "fluctuation symmetry recovered under strong squeezing", pass, detail.str()};
}

// ---- 8. uncertainty-relation suite ---------------------------------------

CriterionResult c8_tur_suite(const Options& opts) {
    const Numerics numerics;
    bool pass = true;
    std::ostringstream detail;

    // standard TUR on static unsqueezed nonequilibrium points
    std::mt19937_64 rng(777);
    auto uni = [&](double a, double b) {
        return std::uniform_real_distribution<double>(a, b)(rng);
    };
    const int n_static = opts.fast ? 8 : 25;
    double worst_static = 1e300;
    for (int i = 0; i < n_static; ++i) {
        double Tl = uni(100.0, 600.0);
        double Tr = uni(100.0, 600.0);
        if (std::abs(Tl - Tr) < 20.0) Tr += 40.0;
        const ModelParams p(uni(50.0, 300.0), BathSpec{uni(100.0, 2000.0), 0.0, Tl},
                            BathSpec{uni(100.0, 2000.0), 0.0, Tr}, DriveProtocol{});
        const double A = affinity(p, numerics);
        const double lhs = A * dynamic_cumulant(p, 2, numerics) /
                           dynamic_cumulant(p, 1, numerics);
        worst_static = std::min(worst_static, lhs);
        pass = pass && lhs >= 2.0 - 1e-9;
    }
    detail << n_static << " static points, min F*A = " << num(worst_static) << " (>= 2); ";

    // modified TUR on every unflagged point of the fig4-style sweep
    double worst_mod = 1e300;
    int flagged = 0;
    for (int i = 0; i <= 40; ++i) {
        const double xl = 2.0 * i / 40.0;
        const ModelParams p = fig_model(300.0, 300.0, xl, 0.7);
        const TurReport rep = tur_report(p, numerics);
        if (!rep.flags.empty()) {
            ++flagged;
            continue;
        }
        worst_mod = std::min(worst_mod, rep.modified_lhs);
        pass = pass && rep.modified_lhs >= 2.0 - 1e-9;
    }
    detail << "sweep: min modified lhs " << num(worst_mod) << " with " << flagged
           << " flagged points; ";

    // bisection of the affinity zero at x_r = 0.7, equal base temperatures
    auto A_of = [&](double xl) {
        return affinity(fig_model(300.0, 300.0, xl, 0.7), numerics);
    };
    double lo = 0.2, hi = 1.5;
    double alo = A_of(lo);
    bool crossing_ok = alo < 0.0 && A_of(hi) > 0.0;
    double root = 0.0;
    if (crossing_ok) {
        for (int it = 0; it < 60 && hi - lo > 1e-7; ++it) {
            const double mid = 0.5 * (lo + hi);
            (A_of(mid) < 0.0 ? lo : hi) = mid;
        }
        root = 0.5 * (lo + hi);
        crossing_ok = std::abs(root - 0.7) <= 2e-6;
    }
    pass = pass && crossing_ok;
    detail << "affinity zero at x_l = " << num(root) << " (x_r = 0.7, bisection to 1e-6); ";

    // the crossing point itself must be flagged, not reported
    const TurReport at_root = tur_report(fig_model(300.0, 300.0, 0.7, 0.7), numerics);
    pass = pass && at_root.flags.affinity_zero && at_root.flags.g_undefined &&
           std::isnan(at_root.g_omega);
    detail << "flags at the crossing: '" << at_root.flags.to_string() << "'; ";

    // with x_r = 0 the affinity never crosses zero for x_l > 0
    double min_A_xr0 = 1e300;
    for (int i = 1; i <= 12; ++i)
        min_A_xr0 = std::min(min_A_xr0, affinity(fig_model(300.0, 300.0, 0.25 * i, 0.0),
                                                 numerics));
    pass = pass && min_A_xr0 > 0.0;
    detail << "min affinity over x_l in (0, 3] at x_r = 0: " << num(min_A_xr0)
           << " (stays positive, no crossing exists there)";

    return {8, "uncertainty-relation suite", pass, detail.str()};
}

// ---- 9. degenerate drive kills geometricity -------------------------------

CriterionResult c9_degenerate_drive(const Options&) {
    const Numerics numerics;
    const ModelParams p = ModelParams::from_site_frequency(
        7.4 * kPi, BathSpec{1000.0, 0.7, 300.0}, BathSpec{1000.0, 0.0, 250.0},
        DriveProtocol{100.0, 100.0, kPi / 4.0, kPi / 4.0});
    const double scale = std::abs(dynamic_cumulant(p, 1, numerics));
    const double jg1 = geometric_cumulant(p, 1, GeometricRoute::surface, numerics);
    const double jg2 = geometric_cumulant(p, 2, GeometricRoute::surface, numerics);
    const double sg = geometric_cgf_line(p, 0.3, numerics);
    const double worst = std::max({std::abs(jg1), std::abs(jg2), std::abs(sg)});
    return {9, "zero relative phase produces no geometricity", worst <= 1e-10 * scale,
            "max(|jg1|, |jg2|, |S_g(0.3)|) = " + num(worst) + " vs 1e-10 * dynamic flux = " +
                num(1e-10 * scale)};
}

// ---- 10. low-temperature scaling of the curvature -------------------------

CriterionResult c10_lowtemp_scaling(const Options&) {
    const ModelParams p = ModelParams::from_site_frequency(
        7.4 * kPi, BathSpec{1000.0, 1.0, 30.0}, BathSpec{1000.0, 1.0, 30.0},
        DriveProtocol::cosine_sine(5.0, 100.0, kPi / 4.0));
    const LowTempScalingReport rep = low_temperature_limit_check(p, 0.5);
    const bool pass = std::abs(rep.slope_left - 1.0) <= 0.1 &&
                      std::abs(rep.slope_right - 1.0) <= 0.1;
    return {10, "low-temperature curvature scaling", pass,
            "fitted exponents " + num(rep.slope_left) + " (x_l sweep), " +
                num(rep.slope_right) + " (x_r sweep); required within 10% of 1"};
}

// ---- 11. byte reproducibility ---------------------------------------------

CriterionResult c11_reproducibility(const Options& opts) {
    namespace fs = std::filesystem;
    auto read_bytes = [](const fs::path& path) {
        std::ifstream in(path, std::ios::binary);
        return std::string(std::istreambuf_iterator<char>(in), {});
    };
    bool pass = true;
    std::string detail;
    const fs::path scratch = fs::path(opts.scratch_dir);
    std::vector<std::vector<std::string>> written;
    for (const char* sub : {"a", "b"}) {
        auto jobs = sweep::preset("fig2");
        auto& cfg = jobs.front();
        cfg.out_dir = (scratch / sub).string();
        cfg.threads = opts.threads;
        const auto res = sweep::run(cfg);
        pass = pass && res.exit_code == 0;
        written.push_back(res.files);
    }
    for (std::size_t i = 0; i < written[0].size(); ++i) {
        const bool same = read_bytes(written[0][i]) == read_bytes(written[1][i]);
        pass = pass && same;
        detail += fs::path(written[0][i]).filename().string() +
                  (same ? " identical; " : " DIFFERS; ");
    }
    fs::remove_all(scratch);
    return {11, "repeated preset runs are byte-identical", pass, detail};
}

}  // namespace

CriterionResult run_criterion(int id, const Options& opts) {
    switch (id) {
        case 1: return c1_zero_eigenvalue(opts);
        case 2: return c2_route_agreement(opts);
        case 3: return c3_oracle_agreement(opts);
        case 4: return c4_exchange_symmetries(opts);
        case 5: return c5_diagonal_zero(opts);
        case 6: return c6_geometricity_decay(opts);
        case 7: return c7_gc_recovery(opts);
        case 8: return c8_tur_suite(opts);
        case 9: return c9_degenerate_drive(opts);
        case 10: return c10_lowtemp_scaling(opts);
        case 11: return c11_reproducibility(opts);
        default: throw ValidationError("no such criterion: " + std::to_string(id));
    }
}

std::vector<CriterionResult> run_all(const Options& opts) {
    std::vector<CriterionResult> results;
    results.reserve(kCriteria);
    for (int id = 1; id <= kCriteria; ++id) results.push_back(run_criterion(id, opts));
    return results;
}

}  // namespace sqfcs::verify
