#include "sqfcs/spectral.hpp"

#include <cmath>

namespace sqfcs {

namespace {

TiltedGenerator assemble(double al, double bl, double ar, double br, double lambda, double t) {
    TiltedGenerator g;
    g.m00 = -(al + ar);
    g.m01 = bl * std::exp(lambda) + br;
    g.m10 = al * std::exp(-lambda) + ar;
    g.m11 = -(bl + br);
    g.lambda = lambda;
    g.t = t;
    g.alpha_l = al;
    g.beta_l = bl;
    g.alpha_r = ar;
    g.beta_r = br;
    g.has_rates = true;
    return g;
}

// sqrt of the discriminant (a-b)^2/4 + m01*m10, always positive for physical
// generators since the off-diagonal entries are strictly positive.
double sqrt_discriminant(const TiltedGenerator& g) {
    const double off = g.m01 * g.m10;
    if (off < 0.0)
        throw DegenerateEigenvalueError("tilted generator has negative off-diagonal product");
    return std::hypot(0.5 * (g.m00 - g.m11), std::sqrt(off));
}

}  // namespace

TiltedGenerator build_generator(const ModelParams& p, double lambda, double t) {
    const RatePair l = rates(p, Side::left, t);
    const RatePair r = rates(p, Side::right, t);
    return assemble(l.alpha, l.beta, r.alpha, r.beta, lambda, t);
}

TiltedGenerator build_generator_at(const ModelParams& p, double lambda,
                                   double T_left, double T_right) {
    const RatePair l = rates_at_temperature(p.left, p.theta0, T_left);
    const RatePair r = rates_at_temperature(p.right, p.theta0, T_right);
    return assemble(l.alpha, l.beta, r.alpha, r.beta, lambda, 0.0);
}

double dominant_eigenvalue(const TiltedGenerator& g) {
    const double s = -0.5 * (g.m00 + g.m11);  // (a+b)/2
    const double root = sqrt_discriminant(g);
    const double num = g.has_rates
                           ? g.beta_l * g.alpha_r * std::expm1(g.lambda) +
                                 g.alpha_l * g.beta_r * std::expm1(-g.lambda)
                           : g.m01 * g.m10 - g.m00 * g.m11;
    const double denom = root + s;
    if (!(denom > 0.0))
        throw DegenerateEigenvalueError("tilted generator is not dissipative");
    return num / denom;
}

EigenSystem eigensystem(const TiltedGenerator& g) {
    const double zeta0 = dominant_eigenvalue(g);
    const double root = sqrt_discriminant(g);
    const double s = -0.5 * (g.m00 + g.m11);
    const double zeta1 = -s - root;
    if (2.0 * root < 1e-12 * (std::abs(zeta0) + std::abs(zeta1)))
        throw DegenerateEigenvalueError("eigenvalues of the tilted generator are degenerate");

    // (M - zeta0) R = 0 gives R ~ (m01, zeta0 - m00); both components positive.
    const double u = zeta0 - g.m00;
    const double sum = g.m01 + u;
    EigenSystem es;
    es.zeta0 = zeta0;
    es.right = {g.m01 / sum, u / sum};
    // L ~ (m10, zeta0 - m00), scaled so <L|R> = 1 under the sum gauge.
    const double lr = g.m10 * g.m01 + u * u;
    es.left = {g.m10 * sum / lr, u * sum / lr};
    return es;
}

}  // namespace sqfcs
