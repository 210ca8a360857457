#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sqfcs/geometry.hpp"

using namespace sqfcs;

namespace {

const Numerics kNum;

ModelParams fig_preset(double T_left, double T_right, double x_left, double x_right,
                       double Omega = 100.0) {
    return ModelParams::from_site_frequency(
        7.4 * kPi, BathSpec{1000.0, x_left, T_left}, BathSpec{1000.0, x_right, T_right},
        DriveProtocol::cosine_sine(100.0, Omega, kPi / 4.0));
}

}  // namespace

TEST_CASE("loop surface geometry") {
    ModelParams p = fig_preset(300.0, 250.0, 0.0, 0.0);
    const LoopSurface loop = LoopSurface::of(p);
    CHECK(loop.center_Tl == 300.0);
    CHECK(loop.center_Tr == 250.0);
    CHECK(loop.radius == 100.0);
    CHECK(loop.orientation() == 1);
    CHECK(loop.signed_area() == doctest::Approx(kPi * 1e4).epsilon(1e-12));

    ModelParams flat(p.theta0, p.left, p.right, DriveProtocol{100.0, 100.0, 0.2, 0.2});
    CHECK(LoopSurface::of(flat).orientation() == 0);
    CHECK(LoopSurface::of(flat).signed_area() == 0.0);
}

TEST_CASE("geometric cgf vanishes at lambda zero and without parameter motion") {
    ModelParams p = fig_preset(300.0, 250.0, 0.7, 0.0);
    CHECK(geometric_cgf_line(p, 0.0, kNum) == 0.0);

    ModelParams frozen(p.theta0, p.left, p.right,
                       DriveProtocol{0.0, 100.0, kPi / 4.0, -kPi / 4.0});
    CHECK(geometric_cgf_line(frozen, 0.8, kNum) == 0.0);
    CHECK(geometric_cgf_surface(frozen, 0.8, kNum) == 0.0);

    ModelParams undriven(p.theta0, p.left, p.right, DriveProtocol{});
    CHECK_THROWS_AS((void)geometric_cgf_line(undriven, 0.3, kNum), ValidationError);
    CHECK_THROWS_AS((void)geometric_cumulant(undriven, 1, GeometricRoute::surface, kNum),
                    ValidationError);
}

TEST_CASE("line and surface forms of the geometric cgf agree at finite lambda") {
    ModelParams p = fig_preset(300.0, 250.0, 0.0, 0.0);
    for (double lambda : {0.3, -1.0}) {
        const double line = geometric_cgf_line(p, lambda, kNum);
        const double surf = geometric_cgf_surface(p, lambda, kNum);
        CHECK(line == doctest::Approx(surf).epsilon(1e-6));
    }
}

TEST_CASE("spectral curvature matches the eigenvector finite-difference evaluator") {
    ModelParams p = fig_preset(300.0, 250.0, 0.0, 0.0);
    ModelParams q = fig_preset(300.0, 250.0, 0.9, 0.4);
    for (const ModelParams* m : {&p, &q}) {
        for (double lambda : {0.3, -0.8}) {
            for (double T : {260.0, 330.0}) {
                const double a = curvature(*m, lambda, T, 0.9 * T);
                const double b = curvature_fd(*m, lambda, T, 0.9 * T, kNum);
                CHECK(a == doctest::Approx(b).epsilon(1e-6));
            }
        }
    }
    CHECK(curvature(p, 0.0, 300.0, 250.0) == 0.0);
    CHECK_THROWS_AS((void)curvature(p, 0.3, -1.0, 250.0), std::domain_error);
    CHECK_THROWS_AS((void)curvature_fd(p, 0.3, 300.0, 0.0, kNum), std::domain_error);
}

TEST_CASE("curvature magnitude decreases with strong squeezing") {
    double prev = std::abs(curvature(fig_preset(300.0, 250.0, 2.0, 2.0), 0.4, 300.0, 250.0));
    for (double x : {2.4, 2.8, 3.2}) {
        const double cur =
            std::abs(curvature(fig_preset(300.0, 250.0, x, x), 0.4, 300.0, 250.0));
        CHECK(cur < prev);
        prev = cur;
    }
}

TEST_CASE("geometric cumulants: route agreement at a squeezed point") {
    ModelParams p = fig_preset(300.0, 250.0, 0.7, 0.35);
    for (int n : {1, 2}) {
        const double line = geometric_cumulant(p, n, GeometricRoute::line, kNum);
        const double surf = geometric_cumulant(p, n, GeometricRoute::surface, kNum);
        const double fd = geometric_cumulant(p, n, GeometricRoute::surface_fd, kNum);
        CHECK(std::abs(line - surf) <= 1e-4 * std::abs(surf));
        CHECK(std::abs(fd - surf) <= 1e-4 * std::abs(surf));
    }
}

TEST_CASE("reversing the drive orientation flips the geometric cumulants") {
    ModelParams p = fig_preset(300.0, 250.0, 0.7, 0.0);
    ModelParams rev(p.theta0, p.left, p.right,
                    DriveProtocol{100.0, 100.0, p.drive.phi_right, p.drive.phi_left});
    for (int n : {1, 2}) {
        const double fwd = geometric_cumulant(p, n, GeometricRoute::surface, kNum);
        const double bwd = geometric_cumulant(rev, n, GeometricRoute::surface, kNum);
        CHECK(fwd == doctest::Approx(-bwd).epsilon(1e-10));
    }
    const double fwd_line = geometric_cumulant(p, 1, GeometricRoute::line, kNum);
    const double bwd_line = geometric_cumulant(rev, 1, GeometricRoute::line, kNum);
    CHECK(fwd_line == doctest::Approx(-bwd_line).epsilon(1e-8));
}

TEST_CASE("geometric cumulants scale linearly with the drive frequency") {
    ModelParams slow = fig_preset(300.0, 250.0, 0.7, 0.0, 50.0);
    ModelParams fast = fig_preset(300.0, 250.0, 0.7, 0.0, 100.0);
    for (int n : {1, 2}) {
        const double a = geometric_cumulant(slow, n, GeometricRoute::surface, kNum);
        const double b = geometric_cumulant(fast, n, GeometricRoute::surface, kNum);
        CHECK(b == doctest::Approx(2.0 * a).epsilon(1e-10));
    }
    // per-period pumped charge is frequency independent
    CHECK(slow.drive.period() * geometric_cumulant(slow, 1, GeometricRoute::line, kNum) ==
          doctest::Approx(fast.drive.period() *
                          geometric_cumulant(fast, 1, GeometricRoute::line, kNum))
              .epsilon(1e-8));
}

TEST_CASE("strong squeezing suppresses geometricity by the exact hyperbolic factors") {
    ModelParams base = fig_preset(300.0, 250.0, 0.0, 0.0);
    ModelParams heavy = fig_preset(300.0, 250.0, 3.0, 3.0);
    const double r1 = geometric_cumulant(heavy, 1, GeometricRoute::surface, kNum) /
                      geometric_cumulant(base, 1, GeometricRoute::surface, kNum);
    const double r2 = geometric_cumulant(heavy, 2, GeometricRoute::surface, kNum) /
                      geometric_cumulant(base, 2, GeometricRoute::surface, kNum);
    // equal squeezing rescales the curvature pointwise: the flux by 1/cosh(2x),
    // the noise by 1/cosh^2(2x)
    CHECK(r1 == doctest::Approx(1.0 / std::cosh(6.0)).epsilon(1e-6));
    CHECK(r2 == doctest::Approx(1.0 / std::pow(std::cosh(6.0), 2)).epsilon(1e-5));
}

TEST_CASE("closed-form flux and noise keep their exchange structure at equal temperatures") {
    ModelParams a = fig_preset(300.0, 300.0, 0.7, 0.2);
    ModelParams b = fig_preset(300.0, 300.0, 0.2, 0.7);
    const double f_a = geometric_flux_closed(a, kNum).value;
    const double f_b = geometric_flux_closed(b, kNum).value;
    CHECK(f_a == doctest::Approx(f_b).epsilon(1e-9));
    const double n_a = geometric_noise_closed(a, kNum).value;
    const double n_b = geometric_noise_closed(b, kNum).value;
    CHECK(n_a == doctest::Approx(-n_b).epsilon(1e-9));

    // equal squeezing kills the closed-form noise integrand over one period
    ModelParams diag = fig_preset(300.0, 300.0, 0.7, 0.7);
    const ClosedFormResult noise = geometric_noise_closed(diag, kNum);
    const ClosedFormResult flux = geometric_flux_closed(diag, kNum);
    CHECK(std::abs(noise.value) < 1e-10 * std::abs(flux.value));
    CHECK(std::abs(flux.value) > 0.0);

    // unequal temperatures break both relations
    ModelParams ua = fig_preset(300.0, 250.0, 0.7, 0.2);
    ModelParams ub = fig_preset(300.0, 250.0, 0.2, 0.7);
    CHECK(std::abs(geometric_flux_closed(ua, kNum).value -
                   geometric_flux_closed(ub, kNum).value) >
          1e-3 * std::abs(geometric_flux_closed(ua, kNum).value));
}

TEST_CASE("closed forms are reported against the surface route") {
    ModelParams p = fig_preset(300.0, 250.0, 0.7, 0.0);
    const ClosedFormResult flux = geometric_flux_closed(p, kNum);
    CHECK(flux.surface_value ==
          doctest::Approx(geometric_cumulant(p, 1, GeometricRoute::surface, kNum))
              .epsilon(1e-12));
    CHECK(flux.residual == doctest::Approx(std::abs(flux.value - flux.surface_value) /
                                           std::abs(flux.surface_value))
                               .epsilon(1e-12));
    CHECK(std::isfinite(geometric_noise_closed(p, kNum).residual));
}

TEST_CASE("closed-form curvature exposes its auxiliaries and readings") {
    ModelParams p = fig_preset(300.0, 250.0, 0.4, 0.1);
    const ClosedFormCurvature closed{&p};
    const CurvatureAux aux = closed.auxiliaries(0.3, 300.0, 250.0);
    const double nl = bose_occupation(p.theta0, 300.0);
    CHECK(aux.K == doctest::Approx(2000.0 * std::cosh(0.8) * (nl + 0.5) +
                                   2000.0 * std::cosh(0.2) *
                                       (bose_occupation(p.theta0, 250.0) + 0.5))
                       .epsilon(1e-12));
    CHECK(closed(0.0, 300.0, 250.0) == 0.0);
    // the two readings of the exponential pair differ at finite lambda
    ClosedFormCurvature other{&p, FLambdaReading::second_right};
    CHECK(closed(0.3, 300.0, 250.0) != other(0.3, 300.0, 250.0));
}

TEST_CASE("low-temperature scaling of the curvature") {
    ModelParams cold = ModelParams::from_site_frequency(
        7.4 * kPi, BathSpec{1000.0, 1.0, 30.0}, BathSpec{1000.0, 1.0, 30.0},
        DriveProtocol::cosine_sine(5.0, 100.0, kPi / 4.0));
    const LowTempScalingReport rep = low_temperature_limit_check(cold, 0.5);
    CHECK(!rep.trivial_zero);
    CHECK(rep.slope_left == doctest::Approx(1.0).epsilon(0.1));
    CHECK(rep.slope_right == doctest::Approx(1.0).epsilon(0.1));

    CHECK(low_temperature_limit_check(cold, 0.0).trivial_zero);

    ModelParams warm = fig_preset(300.0, 250.0, 1.0, 1.0);
    CHECK_THROWS_AS((void)low_temperature_limit_check(warm, 0.5), RegimeError);
}

TEST_CASE("curvature fades as one squeezing parameter diverges") {
    double prev = std::abs(curvature(fig_preset(300.0, 250.0, 2.0, 1.0), 0.5, 300.0, 250.0));
    for (double x : {3.0, 4.0, 5.0}) {
        const double cur =
            std::abs(curvature(fig_preset(300.0, 250.0, x, 1.0), 0.5, 300.0, 250.0));
        CHECK(cur < prev);
        prev = cur;
    }
    CHECK(prev < 1e-3 * std::abs(curvature(fig_preset(300.0, 250.0, 0.0, 1.0), 0.5, 300.0,
                                           250.0)));
}
