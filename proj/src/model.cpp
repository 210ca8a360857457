#include "sqfcs/model.hpp"

#include <cmath>
#include <string>

namespace sqfcs {

double DriveProtocol::period() const {
    if (Omega <= 0.0) throw ValidationError("drive has Omega == 0; no period exists");
    return 2.0 * kPi / Omega;
}

DriveProtocol DriveProtocol::cosine_sine(double A0, double Omega, double phi) {
    return DriveProtocol{A0, Omega, phi, phi - 0.5 * kPi};
}

namespace {

void check_bath(const BathSpec& b, const char* which) {
    if (!(b.gamma > 0.0))
        throw ValidationError(std::string(which) + " bath: gamma must be > 0");
    if (!(b.squeeze_x >= 0.0))
        throw ValidationError(std::string(which) + " bath: squeeze_x must be >= 0");
    if (!(b.T0 > 0.0))
        throw ValidationError(std::string(which) + " bath: T0 must be > 0");
}

}  // namespace

ModelParams::ModelParams(double theta0_, BathSpec left_, BathSpec right_, DriveProtocol drive_)
    : theta0(theta0_), left(left_), right(right_), drive(drive_) {
    if (!(theta0 > 0.0)) throw ValidationError("theta0 must be > 0");
    check_bath(left, "left");
    check_bath(right, "right");
    if (!(drive.A0 >= 0.0)) throw ValidationError("drive: A0 must be >= 0");
    if (!(drive.Omega >= 0.0)) throw ValidationError("drive: Omega must be >= 0");
    if (!std::isfinite(drive.phi_left) || !std::isfinite(drive.phi_right))
        throw ValidationError("drive: phases must be finite");
    if (!(left.T0 - drive.A0 > 0.0) || !(right.T0 - drive.A0 > 0.0))
        throw ValidationError("drive amplitude too large: T0 - A0 must stay > 0 on both baths");
}

ModelParams ModelParams::from_site_frequency(double omega0_thz, BathSpec left,
                                             BathSpec right, DriveProtocol drive) {
    if (!(omega0_thz > 0.0)) throw ValidationError("omega0 must be > 0");
    return ModelParams(kKelvinPerThz * omega0_thz, left, right, drive);
}

double temperature(const ModelParams& p, Side side, double t) {
    return p.bath(side).T0 + p.drive.A0 * std::cos(p.drive.Omega * t + p.phi(side));
}

double bose_occupation(double theta0, double T) {
    if (!(T > 0.0)) throw std::domain_error("bose_occupation: temperature must be > 0");
    return 1.0 / std::expm1(theta0 / T);
}

double bose_occupation_dT(double theta0, double T) {
    const double n = bose_occupation(theta0, T);
    return theta0 / (T * T) * n * (n + 1.0);
}

double squeezed_occupation(double n, double x) {
    return std::cosh(2.0 * x) * (n + 0.5) - 0.5;
}

RatePair rates_at_temperature(const BathSpec& bath, double theta0, double T) {
    const double n = bose_occupation(theta0, T);
    const double c = std::cosh(2.0 * bath.squeeze_x) * (n + 0.5);
    const double alpha = bath.gamma * (c + 0.5);
    // beta = gamma(c - 1/2) up to rounding; this form keeps alpha - beta == gamma exact.
    return RatePair{alpha, alpha - bath.gamma};
}

RatePair rates(const ModelParams& p, Side side, double t) {
    return rates_at_temperature(p.bath(side), p.theta0, temperature(p, side, t));
}

}  // namespace sqfcs
