#include "sqfcs/cumulants.hpp"

#include <cmath>

#include "sqfcs/geometry.hpp"

namespace sqfcs {

double dynamic_cgf(const ModelParams& p, double lambda, const Numerics& num) {
    if (!p.drive.driven())
        return dominant_eigenvalue(build_generator(p, lambda, 0.0));
    const double tp = p.drive.period();
    return integrate([&](double t) { return dominant_eigenvalue(build_generator(p, lambda, t)); },
                     0.0, tp, num.quad) /
           tp;
}

// The counting-field derivative commutes with the period average; taking it
// outside keeps every quadrature on a smooth integrand (at the exchange-
// symmetric points the stencil cancels exactly instead of integrating noise).
double dynamic_cumulant(const ModelParams& p, int n, const Numerics& num) {
    if (n != 1 && n != 2) throw ValidationError("dynamic_cumulant: n must be 1 or 2");
    return lambda_derivative([&](double lam) { return dynamic_cgf(p, lam, num); },
                             num.deriv(n))
        .value;
}

double reference_cumulant(const ModelParams& p, int n, const Numerics& num) {
    BathSpec l = p.left;
    BathSpec r = p.right;
    l.squeeze_x = 0.0;
    r.squeeze_x = 0.0;
    const ModelParams ref(p.theta0, l, r, DriveProtocol{});
    return dynamic_cumulant(ref, n, num);
}

double scaled_cumulant(const ModelParams& p, CumulantKind kind, int n, const Numerics& num) {
    const double ref = reference_cumulant(p, n, num);
    const double floor = 1e-10 * (p.left.gamma + p.right.gamma);
    if (std::abs(ref) <= floor)
        throw ReferenceZeroError("reference cumulant vanishes; scaling undefined");
    const double j = kind == CumulantKind::dynamic
                         ? dynamic_cumulant(p, n, num)
                         : geometric_cumulant(p, n, GeometricRoute::surface, num);
    return j / ref;
}

}  // namespace sqfcs
