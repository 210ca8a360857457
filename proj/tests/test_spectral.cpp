#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "sqfcs/spectral.hpp"

using namespace sqfcs;

namespace {

ModelParams fig_preset(double x_left, double x_right) {
    return ModelParams::from_site_frequency(
        7.4 * kPi, BathSpec{1000.0, x_left, 300.0}, BathSpec{1000.0, x_right, 250.0},
        DriveProtocol::cosine_sine(100.0, 100.0, kPi / 4.0));
}

ModelParams random_params(std::mt19937_64& rng) {
    auto uni = [&](double a, double b) {
        return std::uniform_real_distribution<double>(a, b)(rng);
    };
    const double Tl = uni(60.0, 600.0), Tr = uni(60.0, 600.0);
    return ModelParams(uni(20.0, 400.0), BathSpec{uni(10.0, 2000.0), uni(0.0, 3.0), Tl},
                       BathSpec{uni(10.0, 2000.0), uni(0.0, 3.0), Tr},
                       DriveProtocol{uni(0.0, 0.8 * std::min(Tl, Tr)), uni(5.0, 500.0),
                                     uni(-kPi, kPi), uni(-kPi, kPi)});
}

double matrix_norm(const TiltedGenerator& g) {
    return std::abs(g.m00) + std::abs(g.m01) + std::abs(g.m10) + std::abs(g.m11);
}

}  // namespace

TEST_CASE("columns sum to zero at vanishing counting field") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 100; ++i) {
        const TiltedGenerator g = build_generator(random_params(rng), 0.0, 0.123 * i);
        CHECK(g.column_sum(0) == 0.0);
        CHECK(g.column_sum(1) == 0.0);
    }
}

TEST_CASE("generator entries match a direct recomposition from the rates") {
    ModelParams p = fig_preset(0.7, 0.0);
    const RatePair l = rates(p, Side::left, 0.0);
    const RatePair r = rates(p, Side::right, 0.0);
    const TiltedGenerator g = build_generator(p, 0.3, 0.0);
    CHECK(g.m00 == -(l.alpha + r.alpha));
    CHECK(g.m01 == doctest::Approx(l.beta * std::exp(0.3) + r.beta).epsilon(1e-15));
    CHECK(g.m10 == doctest::Approx(l.alpha * std::exp(-0.3) + r.alpha).epsilon(1e-15));
    CHECK(g.m11 == -(l.beta + r.beta));
}

TEST_CASE("dominant eigenvalue vanishes identically at lambda = 0") {
    std::mt19937_64 rng(21);
    for (int i = 0; i < 1000; ++i) {
        ModelParams p = random_params(rng);
        const double t = std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
        CHECK(dominant_eigenvalue(build_generator(p, 0.0, t)) == 0.0);
    }
}

TEST_CASE("trace and determinant identities for the eigenvalue pair") {
    std::mt19937_64 rng(22);
    for (int i = 0; i < 200; ++i) {
        const TiltedGenerator g = build_generator(random_params(rng), 0.35, 0.4);
        const double z0 = dominant_eigenvalue(g);
        const double z1 = (g.m00 + g.m11) - z0;  // companion root from the trace
        const double det = g.m00 * g.m11 - g.m01 * g.m10;
        CHECK(z0 * z1 == doctest::Approx(det).epsilon(1e-11));
        CHECK(z0 >= z1);
    }
}

TEST_CASE("dominant eigenvalue agrees with a dense eigensolver") {
    ModelParams p = fig_preset(0.7, 0.0);
    const double tp = p.drive.period();
    for (double lambda : {0.2, -0.6, 1.5}) {
        const TiltedGenerator g = build_generator(p, lambda, tp / 3.0);
        Eigen::Matrix2d m;
        m << g.m00, g.m01, g.m10, g.m11;
        const Eigen::Vector2cd ev = Eigen::EigenSolver<Eigen::Matrix2d>(m).eigenvalues();
        const double largest = std::max(ev[0].real(), ev[1].real());
        CHECK(dominant_eigenvalue(g) == doctest::Approx(largest).epsilon(1e-10));
    }
}

TEST_CASE("eigensystem satisfies the eigenvalue equations and normalization") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> lam(-2.0, 2.0);
    for (int i = 0; i < 1000; ++i) {
        const TiltedGenerator g = build_generator(random_params(rng), lam(rng), lam(rng));
        const EigenSystem es = eigensystem(g);
        const double scale = 1e-10 * matrix_norm(g);
        // right residual
        CHECK(std::abs(g.m00 * es.right[0] + g.m01 * es.right[1] - es.zeta0 * es.right[0]) <=
              scale);
        CHECK(std::abs(g.m10 * es.right[0] + g.m11 * es.right[1] - es.zeta0 * es.right[1]) <=
              scale);
        // left residual
        CHECK(std::abs(es.left[0] * g.m00 + es.left[1] * g.m10 - es.zeta0 * es.left[0]) <=
              scale * (std::abs(es.left[0]) + std::abs(es.left[1])));
        CHECK(std::abs(es.left[0] * g.m01 + es.left[1] * g.m11 - es.zeta0 * es.left[1]) <=
              scale * (std::abs(es.left[0]) + std::abs(es.left[1])));
        // biorthogonal normalization and the sum gauge
        CHECK(es.left[0] * es.right[0] + es.left[1] * es.right[1] ==
              doctest::Approx(1.0).epsilon(1e-12));
        CHECK(es.right[0] + es.right[1] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(es.right[0] >= 0.0);
        CHECK(es.right[1] >= 0.0);
    }
}

TEST_CASE("at lambda = 0 the left vector is flat and the right is the steady state") {
    ModelParams p = fig_preset(0.7, 0.35);
    const TiltedGenerator g = build_generator(p, 0.0, 0.017);
    const EigenSystem es = eigensystem(g);
    CHECK(es.left[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(es.left[1] == doctest::Approx(1.0).epsilon(1e-14));
    const double a = -g.m00, b = -g.m11;
    CHECK(es.right[0] == doctest::Approx(b / (a + b)).epsilon(1e-13));
    CHECK(es.right[1] == doctest::Approx(a / (a + b)).epsilon(1e-13));
}

TEST_CASE("degenerate input is rejected") {
    TiltedGenerator corrupt{};
    corrupt.m00 = -1.0;
    corrupt.m01 = 0.0;
    corrupt.m10 = 0.0;
    corrupt.m11 = -1.0;
    CHECK_THROWS_AS((void)eigensystem(corrupt), DegenerateEigenvalueError);
    TiltedGenerator negative{};
    negative.m00 = -1.0;
    negative.m01 = 1.0;
    negative.m10 = -1.0;
    negative.m11 = -1.0;
    CHECK_THROWS_AS((void)dominant_eigenvalue(negative), DegenerateEigenvalueError);
}

TEST_CASE("dominant eigenvalue is convex in lambda") {
    std::mt19937_64 rng(31);
    for (int i = 0; i < 50; ++i) {
        ModelParams p = random_params(rng);
        const double t = 0.21;
        const double h = 0.05;
        for (double lambda : {-1.5, -0.3, 0.0, 0.4, 1.2}) {
            const double fm = dominant_eigenvalue(build_generator(p, lambda - h, t));
            const double f0 = dominant_eigenvalue(build_generator(p, lambda, t));
            const double fp = dominant_eigenvalue(build_generator(p, lambda + h, t));
            const double second = fp - 2.0 * f0 + fm;
            CHECK(second >= -1e-9 * (std::abs(fp) + std::abs(f0) + std::abs(fm) + 1.0));
        }
    }
}

TEST_CASE("dominant eigenvalue is periodic in time") {
    ModelParams p = fig_preset(0.35, 0.7);
    const double tp = p.drive.period();
    for (double t : {0.0, 0.01, 0.03}) {
        const double a = dominant_eigenvalue(build_generator(p, 0.4, t));
        const double b = dominant_eigenvalue(build_generator(p, 0.4, t + tp));
        CHECK(b == doctest::Approx(a).epsilon(1e-10));
    }
}

TEST_CASE("gauge-fixed right vector has a convergent time derivative") {
    ModelParams p = fig_preset(0.7, 0.0);
    const double tp = p.drive.period();
    const double t0 = 0.3 * tp;
    auto right0 = [&](double t) { return eigensystem(build_generator(p, 0.4, t)).right[0]; };
    auto deriv = [&](double h) { return (right0(t0 + h) - right0(t0 - h)) / (2.0 * h); };
    const double ref = deriv(tp * 1e-6);
    const double err_h = std::abs(deriv(tp * 1e-2) - ref);
    const double err_h2 = std::abs(deriv(tp * 5e-3) - ref);
    // second-order central differences: halving the step cuts the error ~4x
    CHECK(err_h2 < err_h);
    CHECK(err_h2 / err_h == doctest::Approx(0.25).epsilon(0.2));
}
