// thermo.hpp — thermodynamic affinity, fluctuation-symmetry residual, and the
// uncertainty-relation quantities

#pragma once

#include <string>
#include <vector>

#include "sqfcs/geometry.hpp"

namespace sqfcs {

// Thermodynamic affinity conjugate to the counted current,
//   A = log( \int beta~_l alpha~_r dt / \int alpha~_l beta~_r dt ),
// with alpha~ = 2 alpha/gamma and beta~ = 2 beta/gamma.  For a static
// protocol this is exactly the shift that closes the fluctuation symmetry,
// and at x = 0 it reduces to theta0 (1/T_r - 1/T_l).  Throws
// std::domain_error when either integral is nonpositive.
double affinity(const ModelParams& p, const Numerics& num = {});

// max over the grid of | <zeta0(lambda)>_t - <zeta0(-lambda - A)>_t |  [1/ps].
double gc_symmetry_residual(const ModelParams& p, const std::vector<double>& lambdas,
                            const Numerics& num = {});

// Geometric correction g = 1 / (1 + j_g^(1)/j_d^(1))^2.  Throws
// UndefinedCorrectionError where the dynamic flux vanishes (A = 0).
double tur_correction(const ModelParams& p, const Numerics& num = {});

// Minimum entropy production [k_B/ps],
//   Sigma_min = 2 (j_d+j_g)^2 / (j_d^(2)+j_g^(2)) * g,
// evaluated in the algebraically cancelled form 2 j_d^2 / (j_d^(2)+j_g^(2)),
// which stays finite through the A = 0 crossing.  Throws std::domain_error on
// nonpositive total noise.
double min_entropy(const ModelParams& p, const Numerics& num = {});

struct TurFlags {
    bool affinity_zero = false;
    bool g_undefined = false;

    bool empty() const { return !affinity_zero && !g_undefined; }
    std::string to_string() const;
};

// Everything needed to discuss the uncertainty relations at one parameter
// point.  Fano factor and both inequality left-hand sides use total cumulants
// j^(n) = j_d^(n) + j_g^(n); g and modified_lhs are NaN when flagged, so a
// flagged region can never be mistaken for a violation.
struct TurReport {
    double jd1, jd2, jg1, jg2;
    double affinity;
    double fano;
    double g_omega;
    double sigma_min;
    double standard_lhs;  // F * A
    double modified_lhs;  // j^(2) Sigma_min / ((j^(1))^2 g)
    TurFlags flags;
};

TurReport tur_report(const ModelParams& p, const Numerics& num = {});

// Left-hand side of the modified uncertainty relation with a caller-supplied
// entropy production rate instead of Sigma_min.
double modified_tur_lhs(const ModelParams& p, double sigma, const Numerics& num = {});

// |A| below this threshold marks the flagged (not allowed) region.
inline constexpr double kAffinityZeroTol = 1e-8;

}  // namespace sqfcs
