#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "sqfcs/model.hpp"

using namespace sqfcs;

namespace {

ModelParams fig_preset(double T_left, double T_right, double x_left, double x_right) {
    return ModelParams::from_site_frequency(
        7.4 * kPi, BathSpec{1000.0, x_left, T_left}, BathSpec{1000.0, x_right, T_right},
        DriveProtocol::cosine_sine(100.0, 100.0, kPi / 4.0));
}

}  // namespace

TEST_CASE("temperature follows the drive protocol") {
    ModelParams undriven(200.0, BathSpec{1000.0, 0.0, 300.0}, BathSpec{1000.0, 0.0, 250.0},
                         DriveProtocol{});
    CHECK(temperature(undriven, Side::left, 0.37) == 300.0);
    CHECK(temperature(undriven, Side::right, -1.4) == 250.0);

    ModelParams p = fig_preset(300.0, 250.0, 0.0, 0.0);
    CHECK(temperature(p, Side::left, 0.0) ==
          doctest::Approx(300.0 + 100.0 * std::cos(kPi / 4.0)).epsilon(1e-15));
    // sine protocol for the right bath
    CHECK(temperature(p, Side::right, 0.0) ==
          doctest::Approx(250.0 + 100.0 * std::sin(kPi / 4.0)).epsilon(1e-15));

    const double tp = p.drive.period();
    for (double t : {0.0, 0.013, 0.5 * tp}) {
        CHECK(temperature(p, Side::left, t + tp) ==
              doctest::Approx(temperature(p, Side::left, t)).epsilon(1e-12));
    }
}

TEST_CASE("bose occupation") {
    CHECK(bose_occupation(100.0 * std::log(2.0), 100.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(bose_occupation(60000.0, 100.0) < 1e-200);  // deep quantum limit
    CHECK(bose_occupation(60000.0, 100.0) >= 0.0);

    // frozen regression value: theta0 for a 7.4*pi THz site, T = 300 K
    const double theta0 = kKelvinPerThz * 7.4 * kPi;
    CHECK(theta0 == doctest::Approx(177.57199360574839).epsilon(1e-14));
    CHECK(bose_occupation(theta0, 300.0) == doctest::Approx(1.238495518176987).epsilon(1e-14));

    CHECK_THROWS_AS((void)bose_occupation(100.0, 0.0), std::domain_error);
    CHECK_THROWS_AS((void)bose_occupation(100.0, -3.0), std::domain_error);
}

TEST_CASE("bose occupation temperature derivative matches finite differences") {
    const double theta0 = 177.0;
    for (double T : {40.0, 120.0, 350.0}) {
        const double h = 1e-4 * T;
        const double fd = (bose_occupation(theta0, T + h) - bose_occupation(theta0, T - h)) /
                          (2.0 * h);
        CHECK(bose_occupation_dT(theta0, T) == doctest::Approx(fd).epsilon(1e-7));
    }
}

TEST_CASE("squeezed occupation") {
    CHECK(squeezed_occupation(0.75, 0.0) == 0.75);
    CHECK(squeezed_occupation(0.83, 0.0) == doctest::Approx(0.83).epsilon(1e-15));
    CHECK(squeezed_occupation(0.0, 1.3) ==
          doctest::Approx(0.5 * (std::cosh(2.6) - 1.0)).epsilon(1e-15));
    // frozen regression value
    CHECK(squeezed_occupation(1.0, 0.7) == doctest::Approx(2.726347698089711).epsilon(1e-14));
    for (double n : {0.0, 0.4, 2.0})
        for (double x : {0.0, 0.5, 2.0}) CHECK(squeezed_occupation(n, x) >= n);
}

TEST_CASE("rates reduce to the detailed-balance pair without squeezing") {
    ModelParams p(150.0, BathSpec{700.0, 0.0, 280.0}, BathSpec{1200.0, 0.0, 350.0},
                  DriveProtocol{});
    const double n_left = bose_occupation(150.0, 280.0);
    const RatePair l = rates(p, Side::left, 0.0);
    CHECK(l.alpha == doctest::Approx(700.0 * (n_left + 1.0)).epsilon(1e-14));
    CHECK(l.beta == doctest::Approx(700.0 * n_left).epsilon(1e-13));
}

TEST_CASE("alpha - beta equals gamma exactly") {
    ModelParams p = fig_preset(300.0, 250.0, 0.7, 1.9);
    for (double t : {0.0, 0.011, 0.5, 3.7}) {
        const RatePair l = rates(p, Side::left, t);
        const RatePair r = rates(p, Side::right, t);
        CHECK(l.alpha - l.beta == 1000.0);
        CHECK(r.alpha - r.beta == 1000.0);
    }
}

TEST_CASE("rates at the figure preset match the occupation-factor composition") {
    ModelParams p = fig_preset(300.0, 250.0, 0.7, 0.0);
    const double T = temperature(p, Side::left, 0.0);
    const double N = squeezed_occupation(bose_occupation(p.theta0, T), 0.7);
    const RatePair l = rates(p, Side::left, 0.0);
    CHECK(l.alpha == doctest::Approx(1000.0 * (N + 1.0)).epsilon(1e-14));
    CHECK(l.beta == doctest::Approx(1000.0 * N).epsilon(1e-13));
}

TEST_CASE("rate properties over random draws") {
    std::mt19937_64 rng(99);
    auto uni = [&](double a, double b) {
        return std::uniform_real_distribution<double>(a, b)(rng);
    };
    for (int i = 0; i < 200; ++i) {
        const double Tl = uni(60.0, 600.0), Tr = uni(60.0, 600.0);
        ModelParams p(uni(30.0, 300.0), BathSpec{uni(10.0, 2000.0), uni(0.0, 3.0), Tl},
                      BathSpec{uni(10.0, 2000.0), uni(0.0, 3.0), Tr},
                      DriveProtocol{uni(0.0, 0.7 * std::min(Tl, Tr)), uni(1.0, 400.0),
                                    uni(-kPi, kPi), uni(-kPi, kPi)});
        const double t = uni(-1.0, 1.0);
        for (Side s : {Side::left, Side::right}) {
            const RatePair rp = rates(p, s, t);
            CHECK(rp.alpha > rp.beta);
            CHECK(rp.beta >= 0.0);
            const double ratio = rp.beta / rp.alpha;
            CHECK(ratio >= 0.0);
            CHECK(ratio < 1.0);
        }
        // periodicity to machine precision
        const double tp = p.drive.period();
        const RatePair a = rates(p, Side::left, t);
        const RatePair b = rates(p, Side::left, t + tp);
        CHECK(b.alpha == doctest::Approx(a.alpha).epsilon(1e-11));
    }
}

TEST_CASE("rates increase strictly with the squeezing parameter") {
    for (double x : {0.0, 0.4, 1.5, 3.0}) {
        ModelParams lo = fig_preset(300.0, 250.0, x, 0.0);
        ModelParams hi = fig_preset(300.0, 250.0, x + 0.05, 0.0);
        const RatePair a = rates(lo, Side::left, 0.02);
        const RatePair b = rates(hi, Side::left, 0.02);
        CHECK(b.alpha > a.alpha);
        CHECK(b.beta > a.beta);
    }
}

TEST_CASE("exchange covariance: swapping baths and phases swaps the rates") {
    ModelParams p(177.0, BathSpec{800.0, 0.9, 320.0}, BathSpec{1500.0, 0.2, 260.0},
                  DriveProtocol{80.0, 120.0, 0.3, -1.1});
    ModelParams swapped(177.0, p.right, p.left, DriveProtocol{80.0, 120.0, -1.1, 0.3});
    for (double t : {0.0, 0.007, 0.4}) {
        const RatePair a = rates(p, Side::left, t);
        const RatePair b = rates(swapped, Side::right, t);
        CHECK(a.alpha == b.alpha);
        CHECK(a.beta == b.beta);
    }
}

TEST_CASE("parameter validation") {
    const BathSpec ok{1000.0, 0.0, 300.0};
    CHECK_THROWS_AS(ModelParams(-1.0, ok, ok, DriveProtocol{}), ValidationError);
    CHECK_THROWS_AS(ModelParams(177.0, BathSpec{0.0, 0.0, 300.0}, ok, DriveProtocol{}),
                    ValidationError);
    CHECK_THROWS_AS(ModelParams(177.0, BathSpec{1000.0, -0.1, 300.0}, ok, DriveProtocol{}),
                    ValidationError);
    CHECK_THROWS_AS(ModelParams(177.0, ok, BathSpec{1000.0, 0.0, -5.0}, DriveProtocol{}),
                    ValidationError);
    // temperatures must stay positive along the whole orbit
    CHECK_THROWS_AS(ModelParams(177.0, BathSpec{1000.0, 0.0, 50.0}, ok,
                                DriveProtocol{100.0, 10.0, 0.0, 0.0}),
                    ValidationError);
    CHECK_THROWS_AS(ModelParams(177.0, ok, ok, DriveProtocol{-1.0, 10.0, 0.0, 0.0}),
                    ValidationError);
    CHECK_THROWS_AS(ModelParams(177.0, ok, ok, DriveProtocol{10.0, -4.0, 0.0, 0.0}),
                    ValidationError);
    CHECK_THROWS_AS(ModelParams::from_site_frequency(0.0, ok, ok, DriveProtocol{}),
                    ValidationError);

    CHECK_THROWS_AS((void)DriveProtocol{}.period(), ValidationError);
    const DriveProtocol d = DriveProtocol::cosine_sine(100.0, 100.0, kPi / 4.0);
    CHECK(d.relative_phase() == doctest::Approx(0.5 * kPi));
    CHECK(d.period() == doctest::Approx(2.0 * kPi / 100.0).epsilon(1e-15));
}
