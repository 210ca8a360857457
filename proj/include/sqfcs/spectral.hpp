// spectral.hpp — counting-field-tilted 2x2 generator, its dominant eigenvalue
// and biorthogonal eigenvectors under a fixed gauge

#pragma once

#include <array>

#include "sqfcs/model.hpp"

namespace sqfcs {

// Tilted generator in the basis (occupied, unoccupied):
//   [ -(al+ar)              bl e^{lambda} + br ]
//   [ al e^{-lambda} + ar   -(bl+br)           ]
// Counting is attached to the left-bath channels: e^{+lambda} on absorption
// from the left reservoir, e^{-lambda} on emission into it, so positive flux
// means net left-to-right transfer.
struct TiltedGenerator {
    double m00, m01, m10, m11;
    double lambda = 0.0;
    double t = 0.0;

    // Per-bath rates kept for the cancellation-free eigenvalue path; absent
    // when the matrix was assembled by hand.
    double alpha_l = 0.0, beta_l = 0.0, alpha_r = 0.0, beta_r = 0.0;
    bool has_rates = false;

    double column_sum(int col) const {
        return col == 0 ? m00 + m10 : m01 + m11;
    }
};

TiltedGenerator build_generator(const ModelParams& p, double lambda, double t);

// As build_generator but with the reservoir temperatures given explicitly.
TiltedGenerator build_generator_at(const ModelParams& p, double lambda,
                                   double T_left, double T_right);

// Algebraically larger root of the characteristic polynomial,
//   zeta0 = -(a+b)/2 + sqrt((a-b)^2/4 + m01*m10),
// evaluated as (m01*m10 - det)/(sqrt(...) + (a+b)/2) so that zeta0(0) == 0
// without cancellation.  With rate context the numerator uses
// bl*ar*expm1(lambda) + al*br*expm1(-lambda), which is exact at lambda = 0.
double dominant_eigenvalue(const TiltedGenerator& g);

// Gauge: |R0> scaled so its components sum to 1 at every lambda; <L0| carries
// the biorthogonal normalization <L0|R0> = 1.  At lambda = 0 this makes
// <L0| = (1, 1) and |R0> the instantaneous steady state.
struct EigenSystem {
    double zeta0;
    std::array<double, 2> left;
    std::array<double, 2> right;
};

// Throws DegenerateEigenvalueError when the eigenvalue gap collapses
// (impossible for rates from a valid ModelParams; signals corrupted input).
EigenSystem eigensystem(const TiltedGenerator& g);

}  // namespace sqfcs
