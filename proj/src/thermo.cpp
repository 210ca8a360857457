#include "sqfcs/thermo.hpp"

#include <cmath>
#include <limits>

namespace sqfcs {

namespace {

// 2 alpha/gamma = c + 1 and 2 beta/gamma = c - 1 with c = cosh(2x)(2n + 1).
double c_factor(const BathSpec& b, double theta0, double T) {
    return std::cosh(2.0 * b.squeeze_x) * (2.0 * bose_occupation(theta0, T) + 1.0);
}

double flux_floor(const ModelParams& p) {
    return 1e-12 * (p.left.gamma + p.right.gamma);
}

}  // namespace

double affinity(const ModelParams& p, const Numerics& num) {
    auto up = [&](double t) {
        const double cl = c_factor(p.left, p.theta0, temperature(p, Side::left, t));
        const double cr = c_factor(p.right, p.theta0, temperature(p, Side::right, t));
        return (cl - 1.0) * (cr + 1.0);
    };
    auto down = [&](double t) {
        const double cl = c_factor(p.left, p.theta0, temperature(p, Side::left, t));
        const double cr = c_factor(p.right, p.theta0, temperature(p, Side::right, t));
        return (cl + 1.0) * (cr - 1.0);
    };
    double I_up, I_down;
    if (p.drive.driven()) {
        const double tp = p.drive.period();
        I_up = integrate(up, 0.0, tp, num.quad);
        I_down = integrate(down, 0.0, tp, num.quad);
    } else {
        I_up = up(0.0);
        I_down = down(0.0);
    }
    if (!(I_up > 0.0) || !(I_down > 0.0))
        throw std::domain_error("affinity: a period integral is nonpositive");
    return std::log(I_up / I_down);
}

double gc_symmetry_residual(const ModelParams& p, const std::vector<double>& lambdas,
                            const Numerics& num) {
    const double A = affinity(p, num);
    double worst = 0.0;
    for (double lam : lambdas) {
        const double fwd = dynamic_cgf(p, lam, num);
        const double mir = dynamic_cgf(p, -lam - A, num);
        worst = std::max(worst, std::abs(fwd - mir));
    }
    return worst;
}

double tur_correction(const ModelParams& p, const Numerics& num) {
    const double A = affinity(p, num);
    const double jd1 = dynamic_cumulant(p, 1, num);
    if (std::abs(A) < kAffinityZeroTol || std::abs(jd1) < flux_floor(p))
        throw UndefinedCorrectionError("g(Omega) undefined: dynamic flux vanishes with A = 0");
    const double jg1 = geometric_cumulant(p, 1, GeometricRoute::surface, num);
    const double ratio = 1.0 + jg1 / jd1;
    return 1.0 / (ratio * ratio);
}

double min_entropy(const ModelParams& p, const Numerics& num) {
    const double jd1 = dynamic_cumulant(p, 1, num);
    const double jd2 = dynamic_cumulant(p, 2, num);
    double jg2 = 0.0;
    if (p.drive.driven()) jg2 = geometric_cumulant(p, 2, GeometricRoute::surface, num);
    const double noise = jd2 + jg2;
    if (!(noise > 0.0)) throw std::domain_error("min_entropy: total noise must be > 0");
    return 2.0 * jd1 * jd1 / noise;
}

std::string TurFlags::to_string() const {
    std::string s;
    if (affinity_zero) s += "affinity_zero";
    if (g_undefined) s += (s.empty() ? "" : ";") + std::string("g_undefined");
    return s;
}

TurReport tur_report(const ModelParams& p, const Numerics& num) {
    TurReport r{};
    r.jd1 = dynamic_cumulant(p, 1, num);
    r.jd2 = dynamic_cumulant(p, 2, num);
    if (p.drive.driven()) {
        r.jg1 = geometric_cumulant(p, 1, GeometricRoute::surface, num);
        r.jg2 = geometric_cumulant(p, 2, GeometricRoute::surface, num);
    } else {
        r.jg1 = 0.0;
        r.jg2 = 0.0;
    }
    r.affinity = affinity(p, num);

    r.flags.affinity_zero = std::abs(r.affinity) < kAffinityZeroTol;
    r.flags.g_undefined = r.flags.affinity_zero || std::abs(r.jd1) < flux_floor(p);

    const double j1 = r.jd1 + r.jg1;
    const double j2 = r.jd2 + r.jg2;
    r.fano = j2 / j1;
    r.standard_lhs = r.fano * r.affinity;
    r.sigma_min = j2 > 0.0 ? 2.0 * r.jd1 * r.jd1 / j2
                           : std::numeric_limits<double>::quiet_NaN();

    if (r.flags.g_undefined) {
        r.g_omega = std::numeric_limits<double>::quiet_NaN();
        r.modified_lhs = std::numeric_limits<double>::quiet_NaN();
    } else {
        const double ratio = 1.0 + r.jg1 / r.jd1;
        r.g_omega = 1.0 / (ratio * ratio);
        r.modified_lhs = j2 * r.sigma_min / (j1 * j1 * r.g_omega);
    }
    return r;
}

double modified_tur_lhs(const ModelParams& p, double sigma, const Numerics& num) {
    const TurReport r = tur_report(p, num);
    if (r.flags.g_undefined)
        throw UndefinedCorrectionError("modified TUR undefined in the flagged region");
    const double j1 = r.jd1 + r.jg1;
    const double j2 = r.jd2 + r.jg2;
    return j2 * sigma / (j1 * j1 * r.g_omega);
}

}  // namespace sqfcs
