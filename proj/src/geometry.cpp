#include "sqfcs/geometry.hpp"

#include <cmath>
#include <vector>

namespace sqfcs {

int LoopSurface::orientation() const {
    const double s = std::sin(delta_phi);
    if (s > 0.0) return 1;
    if (s < 0.0) return -1;
    return 0;
}

double LoopSurface::signed_area() const {
    return kPi * radius * radius * std::sin(delta_phi);
}

LoopSurface LoopSurface::of(const ModelParams& p) {
    return LoopSurface{p.left.T0, p.right.T0, p.drive.A0, p.drive.relative_phase()};
}

// ---------------------------------------------------------------------------
// line route

double geometric_cgf_line(const ModelParams& p, double lambda, const Numerics& num) {
    if (!(p.drive.Omega > 0.0))
        throw ValidationError("geometric CGF needs a periodic drive (Omega > 0)");
    // At lambda = 0 the left vector is (1,1) and the right vector keeps unit
    // component sum, so <L|dR/dt> is the derivative of a constant.
    if (lambda == 0.0) return 0.0;
    const double tp = p.drive.period();
    const double h = tp * num.time_step_rel;
    // One Richardson level on the time derivative: the fourth-order estimate
    // tolerates a base step large enough to keep eigenvector rounding noise
    // out of the second counting-field derivative downstream.
    auto connection = [&](double t) {
        const EigenSystem c = eigensystem(build_generator(p, lambda, t));
        auto slope = [&](double hh) {
            const EigenSystem fwd = eigensystem(build_generator(p, lambda, t + hh));
            const EigenSystem bwd = eigensystem(build_generator(p, lambda, t - hh));
            return (c.left[0] * (fwd.right[0] - bwd.right[0]) +
                    c.left[1] * (fwd.right[1] - bwd.right[1])) /
                   (2.0 * hh);
        };
        return (4.0 * slope(0.5 * h) - slope(h)) / 3.0;
    };
    // Strong squeezing can push the true per-period integral below the
    // rounding noise of the finite-difference connection; the absolute floor
    // (counts per period) lets the refinement stop at that noise level.
    QuadratureSpec quad = num.quad;
    quad.abs_tol = std::max(quad.abs_tol, 1e-12);
    return -integrate(connection, 0.0, tp, quad) / tp;
}

// ---------------------------------------------------------------------------
// curvature

double curvature(const ModelParams& p, double lambda, double T_left, double T_right) {
    if (!(T_left > 0.0) || !(T_right > 0.0))
        throw std::domain_error("curvature: temperatures must be > 0");
    const RatePair l = rates_at_temperature(p.left, p.theta0, T_left);
    const RatePair r = rates_at_temperature(p.right, p.theta0, T_right);
    const double gsum = p.left.gamma + p.right.gamma;
    const double pp = l.beta * std::exp(lambda) + r.beta;
    const double mm = l.alpha * std::exp(-lambda) + r.alpha;
    const double D = 0.25 * gsum * gsum + pp * mm;
    const double wl =
        p.left.gamma * std::cosh(2.0 * p.left.squeeze_x) * bose_occupation_dT(p.theta0, T_left);
    const double wr =
        p.right.gamma * std::cosh(2.0 * p.right.squeeze_x) * bose_occupation_dT(p.theta0, T_right);
    return -gsum * wl * wr * std::sinh(lambda) / (4.0 * D * std::sqrt(D));
}

namespace {

// Product-rule form of d_l <L|d_r R> - d_r <L|d_l R>: the <L|d_l d_r R> terms
// cancel, leaving <d_l L|d_r R> - <d_r L|d_l R>.  Each first derivative is a
// single central difference, which keeps the rounding amplification to one
// factor of 1/h.
double curvature_fd_pass(const ModelParams& p, double lambda, double Tl, double Tr, double h) {
    const EigenSystem lp = eigensystem(build_generator_at(p, lambda, Tl + h, Tr));
    const EigenSystem lm = eigensystem(build_generator_at(p, lambda, Tl - h, Tr));
    const EigenSystem rp = eigensystem(build_generator_at(p, lambda, Tl, Tr + h));
    const EigenSystem rm = eigensystem(build_generator_at(p, lambda, Tl, Tr - h));
    double f = 0.0;
    for (int i = 0; i < 2; ++i) {
        const double dLl = (lp.left[i] - lm.left[i]) / (2.0 * h);
        const double dRl = (lp.right[i] - lm.right[i]) / (2.0 * h);
        const double dLr = (rp.left[i] - rm.left[i]) / (2.0 * h);
        const double dRr = (rp.right[i] - rm.right[i]) / (2.0 * h);
        f += dLl * dRr - dLr * dRl;
    }
    return f;
}

}  // namespace

double curvature_fd(const ModelParams& p, double lambda, double T_left, double T_right,
                    const Numerics& num) {
    if (!(T_left > 0.0) || !(T_right > 0.0))
        throw std::domain_error("curvature_fd: temperatures must be > 0");
    const double h = num.temp_step;
    const double coarse = curvature_fd_pass(p, lambda, T_left, T_right, h);
    const double fine = curvature_fd_pass(p, lambda, T_left, T_right, 0.5 * h);
    return (4.0 * fine - coarse) / 3.0;
}

// ---------------------------------------------------------------------------
// surface route

namespace {

// Oriented integral of f over the orbit interior, parametrized by
// (rho, u) -> center + rho*A0*(cos(u+phi_l), cos(u+phi_r)); the Jacobian is
// rho*A0^2*sin(delta_phi), which carries the orientation and vanishes for a
// degenerate orbit.
template <class F>
double surface_integral(const ModelParams& p, F&& f, const SurfaceSpec& spec) {
    spec.validate();
    const LoopSurface loop = LoopSurface::of(p);
    const double jac = loop.radius * loop.radius * std::sin(loop.delta_phi);
    if (jac == 0.0 || loop.radius == 0.0) return 0.0;

    auto pass = [&](int n_rad, int n_ang, double& mass) {
        const GaussLegendreRule& rule = gauss_legendre(n_rad);
        const double du = 2.0 * kPi / n_ang;
        double total = 0.0;
        mass = 0.0;
        for (int i = 0; i < n_rad; ++i) {
            const double rho = 0.5 * (rule.nodes[i] + 1.0);
            const double wr = 0.5 * rule.weights[i];
            for (int k = 0; k < n_ang; ++k) {
                const double u = du * k;
                const double Tl =
                    loop.center_Tl + loop.radius * rho * std::cos(u + p.drive.phi_left);
                const double Tr =
                    loop.center_Tr + loop.radius * rho * std::cos(u + p.drive.phi_right);
                const double v = f(Tl, Tr) * rho;
                total += wr * du * v;
                mass += std::abs(wr * du * v);
            }
        }
        return total * jac;
    };

    double mass = 0.0;
    int n_rad = spec.radial;
    int n_ang = spec.angular;
    double prev = pass(n_rad, n_ang, mass);
    for (int round = 0; round < spec.max_doublings; ++round) {
        n_rad *= 2;
        n_ang *= 2;
        double cur = pass(n_rad, n_ang, mass);
        const double scale = std::max(std::abs(cur), 1e-3 * mass * std::abs(jac));
        if (std::abs(cur - prev) <= spec.tol * scale + 1e-300) return cur;
        prev = cur;
    }
    throw QuadratureError("surface quadrature did not converge within the doubling budget");
}

}  // namespace

double geometric_cgf_surface(const ModelParams& p, double lambda, const Numerics& num) {
    if (!(p.drive.Omega > 0.0))
        throw ValidationError("geometric CGF needs a periodic drive (Omega > 0)");
    const double tp = p.drive.period();
    const double I = surface_integral(
        p, [&](double Tl, double Tr) { return curvature(p, lambda, Tl, Tr); }, num.surface);
    return -I / tp;
}

double geometric_cumulant(const ModelParams& p, int n, GeometricRoute route,
                          const Numerics& num) {
    if (n != 1 && n != 2) throw ValidationError("geometric_cumulant: n must be 1 or 2");
    if (!(p.drive.Omega > 0.0))
        throw ValidationError("geometric cumulant needs a periodic drive (Omega > 0)");
    const DerivativeScheme& scheme = num.deriv(n);

    if (route == GeometricRoute::line) {
        // The line CGF is accurate to an absolute noise floor, not to a
        // relative one, so the extrapolation guard gets a matching slack.
        DerivativeScheme line_scheme = scheme;
        line_scheme.tol = std::max(line_scheme.tol, 1e-6);
        return lambda_derivative(
                   [&](double lam) { return geometric_cgf_line(p, lam, num); }, line_scheme)
            .value;
    }

    const double tp = p.drive.period();
    auto dn_curvature = [&](double Tl, double Tr) {
        auto f = [&](double lam) {
            return route == GeometricRoute::surface ? curvature(p, lam, Tl, Tr)
                                                    : curvature_fd(p, lam, Tl, Tr, num);
        };
        return lambda_derivative(f, scheme).value;
    };
    SurfaceSpec spec = num.surface;
    // The finite-difference curvature carries rounding noise well above the
    // default surface tolerance; its route accuracy is set by the difference
    // steps, not by the quadrature.
    if (route == GeometricRoute::surface_fd) spec.tol = std::max(spec.tol, 1e-5);
    return -surface_integral(p, dn_curvature, spec) / tp;
}

// ---------------------------------------------------------------------------
// compact closed forms

CurvatureAux ClosedFormCurvature::auxiliaries(double lambda, double T_left, double T_right) const {
    const ModelParams& p = *params;
    const double nl = bose_occupation(p.theta0, T_left);
    const double nr = bose_occupation(p.theta0, T_right);
    const double chl = std::cosh(2.0 * p.left.squeeze_x);
    const double chr = std::cosh(2.0 * p.right.squeeze_x);

    CurvatureAux aux;
    aux.C_l = p.theta0 / (T_left * T_left) * std::exp(p.theta0 / T_left) *
              (chl * (nl + 0.5) - 0.5);
    aux.C_r = p.theta0 / (T_right * T_right) * std::exp(p.theta0 / T_right) *
              (chr * (nr + 0.5) - 0.5);
    aux.K = 2.0 * p.left.gamma * chl * (nl + 0.5) + 2.0 * p.right.gamma * chr * (nr + 0.5);

    const double beta_prod = p.left.gamma * (chl * (nl + 0.5) - 0.5) * p.right.gamma *
                             (chr * (nr + 0.5) - 0.5);
    const double e_l = std::exp(p.theta0 / T_left);
    const double e_r = std::exp(p.theta0 / T_right);
    double first = e_l, second = e_l;
    if (reading == FLambdaReading::second_right) second = e_r;
    if (reading == FLambdaReading::first_right) first = e_r;
    aux.f_lambda = beta_prod * (first * std::expm1(lambda) + second * std::expm1(-lambda));
    return aux;
}

double ClosedFormCurvature::operator()(double lambda, double T_left, double T_right) const {
    if (!(T_left > 0.0) || !(T_right > 0.0))
        throw std::domain_error("closed-form curvature: temperatures must be > 0");
    const ModelParams& p = *params;
    const CurvatureAux aux = auxiliaries(lambda, T_left, T_right);
    const double Gamma =
        p.left.gamma * p.right.gamma * (p.left.gamma + p.right.gamma);
    const double base =
        denom == DenominatorForm::squared ? aux.K * aux.K + 4.0 * aux.f_lambda
                                          : aux.K + 4.0 * aux.f_lambda;
    return -2.0 * Gamma * aux.C_l * aux.C_r * std::sin(lambda) / std::pow(base, 1.5);
}

namespace {

double closed_form_residual(double value, double surface) {
    const double floor = 1e-300 + 1e-12 * std::abs(value);
    return std::abs(value - surface) / std::max(std::abs(surface), floor);
}

double x_plus(const BathSpec& b, double theta0, double T) {
    return std::cosh(2.0 * b.squeeze_x) * (2.0 * bose_occupation(theta0, T) + 1.0);
}

}  // namespace

ClosedFormResult geometric_flux_closed(const ModelParams& p, const Numerics& num) {
    if (!(p.drive.Omega > 0.0))
        throw ValidationError("closed-form geometric flux needs Omega > 0");
    const double tp = p.drive.period();
    const double Gamma = p.left.gamma * p.right.gamma * (p.left.gamma + p.right.gamma);
    const double ch2 = std::cosh(2.0 * p.left.squeeze_x) * std::cosh(2.0 * p.right.squeeze_x);
    auto integrand = [&](double t) {
        const double K = p.left.gamma * x_plus(p.left, p.theta0, temperature(p, Side::left, t)) +
                         p.right.gamma * x_plus(p.right, p.theta0, temperature(p, Side::right, t));
        return 2.0 * Gamma * ch2 / (K * K * K);
    };
    ClosedFormResult res;
    res.value = -integrate(integrand, 0.0, tp, num.quad) / tp;
    res.surface_value = geometric_cumulant(p, 1, GeometricRoute::surface, num);
    res.residual = closed_form_residual(res.value, res.surface_value);
    return res;
}

ClosedFormResult geometric_noise_closed(const ModelParams& p, const Numerics& num) {
    if (!(p.drive.Omega > 0.0))
        throw ValidationError("closed-form geometric noise needs Omega > 0");
    const double tp = p.drive.period();
    const double gl = p.left.gamma, gr = p.right.gamma;
    const double Gamma = gl * gr * (gl + gr);
    const double ch2 = std::cosh(2.0 * p.left.squeeze_x) * std::cosh(2.0 * p.right.squeeze_x);
    auto integrand = [&](double t) {
        const double xl = x_plus(p.left, p.theta0, temperature(p, Side::left, t));
        const double xr = x_plus(p.right, p.theta0, temperature(p, Side::right, t));
        const double K = gl * xl + gr * xr;
        return 12.0 * Gamma * Gamma * ch2 * (xr - xl) / ((gl + gr) * std::pow(K, 5));
    };
    ClosedFormResult res;
    res.value = -integrate(integrand, 0.0, tp, num.quad) / tp;
    res.surface_value = geometric_cumulant(p, 2, GeometricRoute::surface, num);
    res.residual = closed_form_residual(res.value, res.surface_value);
    return res;
}

// ---------------------------------------------------------------------------
// low-temperature scaling

namespace {

double lowtemp_prediction(double xl, double xr) {
    const double cl = std::cosh(2.0 * xl);
    const double cr = std::cosh(2.0 * xr);
    return 1.0 / std::sqrt((cl * cl * cl + cr * cr * cr) * (cl - 1.0) * (cr - 1.0));
}

struct Fit {
    double slope;
    double rms;
};

Fit fit_loglog(const std::vector<double>& logp, const std::vector<double>& logf) {
    const std::size_t n = logp.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += logp[i];
        sy += logf[i];
        sxx += logp[i] * logp[i];
        sxy += logp[i] * logf[i];
    }
    const double denom = n * sxx - sx * sx;
    const double slope = (n * sxy - sx * sy) / denom;
    const double intercept = (sy - slope * sx) / n;
    double rss = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = logf[i] - (intercept + slope * logp[i]);
        rss += r * r;
    }
    return Fit{slope, std::sqrt(rss / n)};
}

}  // namespace

LowTempScalingReport low_temperature_limit_check(const ModelParams& p, double lambda,
                                                 const LowTempGrid& grid, const Numerics&) {
    const double T_hi = std::max(p.left.T0, p.right.T0) + p.drive.A0;
    if (!(p.theta0 / T_hi >= 5.0))
        throw RegimeError("low-temperature check requires theta0/T >= 5 over the whole orbit");
    if (grid.count < 3) throw ValidationError("low-temperature grid needs >= 3 points");

    LowTempScalingReport rep;
    if (lambda == 0.0) {
        rep.trivial_zero = true;
        return rep;
    }

    auto sweep = [&](bool vary_left) {
        std::vector<double> logp, logf;
        for (int i = 0; i < grid.count; ++i) {
            const double x = grid.x_min + (grid.x_max - grid.x_min) * i / (grid.count - 1);
            BathSpec l = p.left, r = p.right;
            (vary_left ? l.squeeze_x : r.squeeze_x) = x;
            const ModelParams varied(p.theta0, l, r, p.drive);
            const double F = curvature(varied, lambda, p.left.T0, p.right.T0);
            logp.push_back(std::log(lowtemp_prediction(l.squeeze_x, r.squeeze_x)));
            logf.push_back(std::log(std::abs(F)));
        }
        return fit_loglog(logp, logf);
    };

    const Fit fl = sweep(true);
    const Fit fr = sweep(false);
    rep.slope_left = fl.slope;
    rep.rms_residual_left = fl.rms;
    rep.slope_right = fr.slope;
    rep.rms_residual_right = fr.rms;
    return rep;
}

}  // namespace sqfcs
