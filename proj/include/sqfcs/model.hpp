// model.hpp — physical parameters of the driven bosonic junction and the
// squeezed transition rates

#pragma once

#include "sqfcs/constants.hpp"
#include "sqfcs/errors.hpp"

namespace sqfcs {

enum class Side { left, right };

// One reservoir: coupling gamma [THz], squeezing parameter x (dimensionless,
// >= 0) and base temperature T0 [K].
struct BathSpec {
    double gamma;
    double squeeze_x;
    double T0;
};

// Sinusoidal temperature modulation T_nu(t) = T_nu^0 + A0 cos(Omega t + phi_nu).
// A0 in K, Omega in THz (angular), phases in rad.  Omega == 0 means undriven.
struct DriveProtocol {
    double A0 = 0.0;
    double Omega = 0.0;
    double phi_left = 0.0;
    double phi_right = 0.0;

    bool driven() const { return Omega > 0.0 && A0 > 0.0; }
    double period() const;  // 2*pi/Omega; throws ValidationError when Omega == 0
    double relative_phase() const { return phi_left - phi_right; }

    // The (cos, sin) pair: phi_left = phi, phi_right = phi - pi/2.
    static DriveProtocol cosine_sine(double A0, double Omega, double phi);
};

// Site quantum theta0 = hbar*omega0/k_B [K] plus the two baths and the drive.
// Validated on construction; in particular every temperature along the drive
// orbit must stay strictly positive (T0 - A0 > 0 for both baths).
struct ModelParams {
    ModelParams(double theta0, BathSpec left, BathSpec right, DriveProtocol drive);

    // Accepts the site frequency as an angular frequency in THz.
    static ModelParams from_site_frequency(double omega0_thz, BathSpec left,
                                           BathSpec right, DriveProtocol drive);

    double theta0;
    BathSpec left;
    BathSpec right;
    DriveProtocol drive;

    const BathSpec& bath(Side s) const { return s == Side::left ? left : right; }
    double phi(Side s) const {
        return s == Side::left ? drive.phi_left : drive.phi_right;
    }
};

// Instantaneous reservoir temperature T_nu(t) [K].
double temperature(const ModelParams& p, Side side, double t);

// Bose-Einstein occupation n = 1/(exp(theta0/T) - 1); throws std::domain_error
// for T <= 0.
double bose_occupation(double theta0, double T);

// Squeezed occupation N = cosh(2x)(n + 1/2) - 1/2.
double squeezed_occupation(double n, double x);

// Emission/absorption rate pair [THz]:
//   alpha = gamma(cosh(2x)(n + 1/2) + 1/2),  beta = alpha - gamma.
// alpha - beta == gamma holds exactly by construction.
struct RatePair {
    double alpha;
    double beta;
};

RatePair rates(const ModelParams& p, Side side, double t);

// Same rates evaluated at an explicit temperature instead of a drive time.
RatePair rates_at_temperature(const BathSpec& bath, double theta0, double T);

// d n / d T = (theta0/T^2) n (n + 1).
double bose_occupation_dT(double theta0, double T);

}  // namespace sqfcs
