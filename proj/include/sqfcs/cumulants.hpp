// cumulants.hpp — dynamic cumulants from period-averaged counting-field
// derivatives of the dominant eigenvalue

#pragma once

#include "sqfcs/numerics.hpp"
#include "sqfcs/spectral.hpp"

namespace sqfcs {

// Period average of zeta0(lambda, t); the static value when undriven.
double dynamic_cgf(const ModelParams& p, double lambda, const Numerics& num = {});

// j_d^{(n)} = (1/t_p) \int_0^{t_p} d^n/dlambda^n zeta0(lambda, t)|_0 dt  [1/ps].
double dynamic_cumulant(const ModelParams& p, int n, const Numerics& num = {});

// Reference cumulant of the same model with both squeezings and the drive
// amplitude set to zero (static, unsqueezed, same base temperatures).
double reference_cumulant(const ModelParams& p, int n, const Numerics& num = {});

enum class CumulantKind { dynamic, geometric };

// C^{(n)} = j^{(n)} / j_o^{(n)}; throws ReferenceZeroError when the reference
// vanishes (e.g. n = 1 at equal base temperatures).
double scaled_cumulant(const ModelParams& p, CumulantKind kind, int n,
                       const Numerics& num = {});

}  // namespace sqfcs
