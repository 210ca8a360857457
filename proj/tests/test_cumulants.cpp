#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sqfcs/cumulants.hpp"
#include "sqfcs/geometry.hpp"

using namespace sqfcs;

namespace {

const Numerics kNum;

ModelParams fig_preset(double T_left, double T_right, double x_left, double x_right) {
    return ModelParams::from_site_frequency(
        7.4 * kPi, BathSpec{1000.0, x_left, T_left}, BathSpec{1000.0, x_right, T_right},
        DriveProtocol::cosine_sine(100.0, 100.0, kPi / 4.0));
}

ModelParams static_params(double T_left, double T_right, double x_left = 0.0,
                          double x_right = 0.0) {
    return ModelParams::from_site_frequency(7.4 * kPi, BathSpec{1000.0, x_left, T_left},
                                            BathSpec{1000.0, x_right, T_right},
                                            DriveProtocol{});
}

}  // namespace

TEST_CASE("equilibrium carries no flux") {
    ModelParams p = static_params(300.0, 300.0);
    CHECK(std::abs(dynamic_cumulant(p, 1, kNum)) < 1e-9);
}

TEST_CASE("static cumulants match the closed-form flux and noise") {
    ModelParams p = static_params(300.0, 250.0, 0.7, 0.2);
    const RatePair l = rates(p, Side::left, 0.0);
    const RatePair r = rates(p, Side::right, 0.0);
    const double sum = l.alpha + r.alpha + l.beta + r.beta;
    const double odd = l.beta * r.alpha - l.alpha * r.beta;
    const double even = l.beta * r.alpha + l.alpha * r.beta;
    CHECK(dynamic_cumulant(p, 1, kNum) == doctest::Approx(odd / sum).epsilon(1e-9));
    CHECK(dynamic_cumulant(p, 2, kNum) ==
          doctest::Approx(even / sum - 2.0 * odd * odd / (sum * sum * sum)).epsilon(1e-8));
}

TEST_CASE("dynamic cgf averages the eigenvalue over one period") {
    ModelParams p = fig_preset(300.0, 250.0, 0.7, 0.0);
    // undriven: plain eigenvalue
    ModelParams ps = static_params(300.0, 250.0, 0.7, 0.0);
    CHECK(dynamic_cgf(ps, 0.4, kNum) ==
          doctest::Approx(dominant_eigenvalue(build_generator(ps, 0.4, 0.0))).epsilon(1e-14));
    // driven average lies between the instantaneous extremes
    const double tp = p.drive.period();
    double lo = 1e300, hi = -1e300;
    for (int i = 0; i < 64; ++i) {
        const double z = dominant_eigenvalue(build_generator(p, 0.4, tp * i / 64.0));
        lo = std::min(lo, z);
        hi = std::max(hi, z);
    }
    const double avg = dynamic_cgf(p, 0.4, kNum);
    CHECK(avg >= lo);
    CHECK(avg <= hi);
}

TEST_CASE("exchange of squeezing parameters at equal base temperatures") {
    ModelParams a = fig_preset(300.0, 300.0, 0.7, 0.2);
    ModelParams b = fig_preset(300.0, 300.0, 0.2, 0.7);
    const double j1a = dynamic_cumulant(a, 1, kNum);
    const double j1b = dynamic_cumulant(b, 1, kNum);
    CHECK(j1a == doctest::Approx(-j1b).epsilon(1e-9));
    const double j2a = dynamic_cumulant(a, 2, kNum);
    const double j2b = dynamic_cumulant(b, 2, kNum);
    CHECK(j2a == doctest::Approx(j2b).epsilon(1e-9));
}

TEST_CASE("vanishing drive amplitude recovers the static cumulants") {
    ModelParams tiny = ModelParams::from_site_frequency(
        7.4 * kPi, BathSpec{1000.0, 0.7, 300.0}, BathSpec{1000.0, 0.0, 250.0},
        DriveProtocol::cosine_sine(1e-5, 100.0, kPi / 4.0));
    ModelParams flat = static_params(300.0, 250.0, 0.7, 0.0);
    for (int n : {1, 2}) {
        const double drv = dynamic_cumulant(tiny, n, kNum);
        const double stat = dynamic_cumulant(flat, n, kNum);
        CHECK(drv == doctest::Approx(stat).epsilon(1e-7));
    }
}

TEST_CASE("dynamic flux saturates at strong squeezing") {
    const double j4 = dynamic_cumulant(fig_preset(300.0, 300.0, 4.0, 0.7), 1, kNum);
    const double j5 = dynamic_cumulant(fig_preset(300.0, 300.0, 5.0, 0.7), 1, kNum);
    CHECK(std::abs(j5 - j4) / std::abs(j5) < 0.02);
}

TEST_CASE("scaled cumulant is one for the reference model itself") {
    ModelParams p = static_params(300.0, 250.0);
    CHECK(scaled_cumulant(p, CumulantKind::dynamic, 1, kNum) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(scaled_cumulant(p, CumulantKind::dynamic, 2, kNum) ==
          doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("scaling against a vanishing reference is rejected") {
    // equal base temperatures make the reference flux zero
    ModelParams p = fig_preset(300.0, 300.0, 0.7, 0.0);
    CHECK_THROWS_AS((void)scaled_cumulant(p, CumulantKind::dynamic, 1, kNum),
                    ReferenceZeroError);
    // the noise reference stays finite
    CHECK(std::isfinite(scaled_cumulant(p, CumulantKind::dynamic, 2, kNum)));
}

TEST_CASE("squeezing one bath enhances the scaled noise beyond unity") {
    ModelParams p = fig_preset(300.0, 250.0, 0.7, 0.0);
    CHECK(std::abs(scaled_cumulant(p, CumulantKind::dynamic, 2, kNum)) > 1.0);
}
