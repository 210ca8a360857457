// numerics.hpp — shared numerical settings for the cumulant pipelines

#pragma once

#include "sqfcs/derivative.hpp"
#include "sqfcs/quadrature.hpp"

namespace sqfcs {

// Polar tensor rule on the drive orbit's interior: Gauss-Legendre in the
// radial coordinate, trapezoid (periodic) in the angle.  The angular count
// must stay a multiple of 4 so the rule keeps the orbit's mirror symmetries.
struct SurfaceSpec {
    int radial = 24;
    int angular = 64;
    double tol = 1e-8;
    int max_doublings = 3;

    void validate() const {
        if (radial < 4) throw ValidationError("surface: radial nodes must be >= 4");
        if (angular < 8 || angular % 4 != 0)
            throw ValidationError("surface: angular nodes must be >= 8 and a multiple of 4");
        if (!(tol > 0.0)) throw ValidationError("surface: tol must be > 0");
        if (max_doublings < 0) throw ValidationError("surface: max_doublings must be >= 0");
    }
};

struct Numerics {
    QuadratureSpec quad;
    DerivativeScheme deriv1{1, 1e-2, 4, 1e-8};
    // Second derivatives sit on an O(h^2) signal, so extra Richardson levels
    // amplify evaluation noise faster than they remove truncation; two levels
    // of the base step keep both below the cross-check tolerance.
    DerivativeScheme deriv2{2, 1e-2, 2, 1e-5};
    SurfaceSpec surface;

    // Base central-difference step for d/dt of eigenvectors, relative to the
    // period (halved once for Richardson inside the line-route connection).
    double time_step_rel = 1e-3;
    // Central-difference step [K] for temperature derivatives of eigenvectors
    // (halved once for Richardson inside curvature_fd).
    double temp_step = 0.5;
    // Relative tolerance for agreement between independent geometric routes.
    double crosscheck_tol = 1e-4;

    const DerivativeScheme& deriv(int order) const {
        return order == 1 ? deriv1 : deriv2;
    }

    void validate() const {
        quad.validate();
        deriv1.validate();
        deriv2.validate();
        surface.validate();
        if (!(time_step_rel > 0.0 && time_step_rel < 1e-2))
            throw ValidationError("numerics: time_step_rel out of (0, 1e-2)");
        if (!(temp_step > 0.0)) throw ValidationError("numerics: temp_step must be > 0");
        if (!(crosscheck_tol > 0.0)) throw ValidationError("numerics: crosscheck_tol must be > 0");
    }
};

}  // namespace sqfcs
