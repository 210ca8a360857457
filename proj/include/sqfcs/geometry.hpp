// geometry.hpp — geometric contribution to the counting statistics: line
// integral of the eigenvector connection, curvature over the drive orbit's
// interior, compact closed-form variants kept for comparison, and the low-temperature
// scaling check

#pragma once

#include <array>

#include "sqfcs/cumulants.hpp"

namespace sqfcs {

// The temperature orbit (T_l(t), T_r(t)) traces an ellipse of amplitude A0
// around (T_l^0, T_r^0); its signed area is pi*A0^2*sin(phi_l - phi_r), so the
// (cos, sin) pair is the counterclockwise circle and a zero relative phase
// degenerates to a segment of zero area.
struct LoopSurface {
    double center_Tl;
    double center_Tr;
    double radius;
    double delta_phi;

    int orientation() const;  // +1 ccw, -1 cw, 0 degenerate
    double signed_area() const;

    static LoopSurface of(const ModelParams& p);
};

// Geometric CGF from the gauge-fixed line integral:
//   S_g(lambda) = -(1/t_p) \int_0^{t_p} <L0| d/dt |R0> dt.
// Requires a driven protocol (Omega > 0).
double geometric_cgf_line(const ModelParams& p, double lambda, const Numerics& num = {});

// Curvature of the eigenvector connection in the (T_l, T_r) plane,
//   F = d_l <L0|d_r R0> - d_r <L0|d_l R0>,
// in closed form via the spectral decomposition of the 2x2 generator:
//   F(lambda) = -(gl+gr) w_l w_r sinh(lambda) / (4 D^{3/2}),
// with w_nu = gamma_nu cosh(2 x_nu) dn_nu/dT and D the tilted discriminant.
// Throws std::domain_error on nonpositive temperatures.
double curvature(const ModelParams& p, double lambda, double T_left, double T_right);

// Same quantity from nested central differences of the eigenvectors; kept as
// an independent cross-validation route.
double curvature_fd(const ModelParams& p, double lambda, double T_left, double T_right,
                    const Numerics& num = {});

// S_g(lambda) as a surface integral of the curvature over the orbit interior.
double geometric_cgf_surface(const ModelParams& p, double lambda, const Numerics& num = {});

enum class GeometricRoute { line, surface, surface_fd };

// j_g^{(n)} [1/ps] by the chosen route.  The surface routes integrate the
// pointwise counting-field derivative of the curvature over the enclosed
// surface and divide by the period.
double geometric_cumulant(const ModelParams& p, int n,
                          GeometricRoute route = GeometricRoute::surface,
                          const Numerics& num = {});

// ---- compact closed-form variants, kept for comparison only ----

// The exponential pair inside the f(lambda) auxiliary: repeated_left uses
// exp(theta0/T_l) in both slots; the other readings substitute
// exp(theta0/T_r) in one of them.
enum class FLambdaReading { repeated_left, second_right, first_right };
// The linear denominator {K + 4 f}^{3/2} mixes units (K is a rate, f a rate
// squared); the squared reading uses {K^2 + 4 f}^{3/2}.
enum class DenominatorForm { linear, squared };

struct CurvatureAux {
    double C_l, C_r, K, f_lambda;
};

// Compact closed-form curvature built from the C_nu, K, f(lambda)
// auxiliaries.  Its small-lambda normalization differs from the exact
// curvature even without squeezing; it is kept strictly as a comparison
// diagnostic, never as an input to the cumulant pipelines.
struct ClosedFormCurvature {
    const ModelParams* params;
    FLambdaReading reading = FLambdaReading::repeated_left;
    DenominatorForm denom = DenominatorForm::squared;

    CurvatureAux auxiliaries(double lambda, double T_left, double T_right) const;
    double operator()(double lambda, double T_left, double T_right) const;
};

struct ClosedFormResult {
    double value;          // compact closed form, time quadrature
    double surface_value;  // authoritative surface-route cumulant
    double residual;       // |value - surface| / max(|surface|, floor)
};

// Compact closed-form flux and noise integrands evaluated as written and
// compared against the surface route (which is the trusted number).
ClosedFormResult geometric_flux_closed(const ModelParams& p, const Numerics& num = {});
ClosedFormResult geometric_noise_closed(const ModelParams& p, const Numerics& num = {});

// ---- low-temperature scaling ----

// Regression of log|F| against the predicted low-temperature form
//   F ~ sinh(lambda) [sum_nu cosh^3(2x_nu)]^{-1/2} [prod_nu (cosh(2x_nu)-1)]^{-1/2}
// across a squeezing grid, one sweep per bath with the other held fixed.
// Slopes near 1 confirm the scaling.  Requires theta0/T >= 5 over the whole
// orbit (RegimeError otherwise).
struct LowTempScalingReport {
    bool trivial_zero = false;  // lambda == 0: both sides vanish identically
    double slope_left = 0.0;    // sweep of x_l at fixed x_r
    double slope_right = 0.0;   // sweep of x_r at fixed x_l
    double rms_residual_left = 0.0;
    double rms_residual_right = 0.0;
};

struct LowTempGrid {
    double x_min = 2.5;
    double x_max = 4.5;
    int count = 9;
};

LowTempScalingReport low_temperature_limit_check(const ModelParams& p, double lambda,
                                                 const LowTempGrid& grid = {},
                                                 const Numerics& num = {});

}  // namespace sqfcs
