#include "sqfcs/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "sqfcs/parallel.hpp"

namespace sqfcs::oracle {

namespace {

using Vec2 = std::array<double, 2>;

Vec2 matvec(const TiltedGenerator& g, const Vec2& y) {
    return Vec2{g.m00 * y[0] + g.m01 * y[1], g.m10 * y[0] + g.m11 * y[1]};
}

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

struct Stepper {
    const ModelParams& p;
    double lambda;
    const OdeOptions& opts;

    Vec2 rhs(double t, const Vec2& y) const { return matvec(build_generator(p, lambda, t), y); }

    // One accepted adaptive step from (t, y); dt is updated in place.
    void step(double& t, Vec2& y, double& dt, double t_end) const {
        for (int tries = 0; tries < 60; ++tries) {
            const double h = std::min(dt, t_end - t);
            const Vec2 k1 = rhs(t, y);
            const Vec2 k2 = rhs(t + c2 * h, {y[0] + h * a21 * k1[0], y[1] + h * a21 * k1[1]});
            const Vec2 k3 = rhs(t + c3 * h, {y[0] + h * (a31 * k1[0] + a32 * k2[0]),
                                             y[1] + h * (a31 * k1[1] + a32 * k2[1])});
            const Vec2 k4 =
                rhs(t + c4 * h, {y[0] + h * (a41 * k1[0] + a42 * k2[0] + a43 * k3[0]),
                                 y[1] + h * (a41 * k1[1] + a42 * k2[1] + a43 * k3[1])});
            const Vec2 k5 = rhs(
                t + c5 * h,
                {y[0] + h * (a51 * k1[0] + a52 * k2[0] + a53 * k3[0] + a54 * k4[0]),
                 y[1] + h * (a51 * k1[1] + a52 * k2[1] + a53 * k3[1] + a54 * k4[1])});
            const Vec2 k6 =
                rhs(t + h,
                    {y[0] + h * (a61 * k1[0] + a62 * k2[0] + a63 * k3[0] + a64 * k4[0] +
                                 a65 * k5[0]),
                     y[1] + h * (a61 * k1[1] + a62 * k2[1] + a63 * k3[1] + a64 * k4[1] +
                                 a65 * k5[1])});
            const Vec2 y5 = {
                y[0] + h * (b1 * k1[0] + b3 * k3[0] + b4 * k4[0] + b5 * k5[0] + b6 * k6[0]),
                y[1] + h * (b1 * k1[1] + b3 * k3[1] + b4 * k4[1] + b5 * k5[1] + b6 * k6[1])};
            const Vec2 k7 = rhs(t + h, y5);
            double err = 0.0;
            for (int i = 0; i < 2; ++i) {
                const double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                       e6 * k6[i] + e7 * k7[i]);
                const double sc =
                    opts.abs_tol + opts.rel_tol * std::max(std::abs(y[i]), std::abs(y5[i]));
                err = std::max(err, std::abs(ei) / sc);
            }
            if (err <= 1.0) {
                t += h;
                y = y5;
                dt = h * std::clamp(0.9 * std::pow(std::max(err, 1e-10), -0.2), 0.2, 5.0);
                return;
            }
            dt = h * std::clamp(0.9 * std::pow(err, -0.2), 0.2, 0.9);
        }
        throw Error("ODE step control failed to find an acceptable step");
    }
};

Vec2 steady_state_at(const ModelParams& p, double t) {
    const TiltedGenerator g = build_generator(p, 0.0, t);
    const double a = -g.m00;
    const double b = -g.m11;
    return Vec2{b / (a + b), a / (a + b)};
}

double period_or_effective(const ModelParams& p) {
    if (p.drive.Omega > 0.0) return p.drive.period();
    return 2.0 * kPi / (p.left.gamma + p.right.gamma);
}

}  // namespace

PropagationRun propagate(const ModelParams& p, double lambda, int periods,
                         int steps_per_period, const OdeOptions& opts) {
    if (periods < 1) throw ValidationError("propagate: periods must be >= 1");
    if (steps_per_period < 8) throw ValidationError("propagate: steps_per_period must be >= 8");
    const double tp = period_or_effective(p);

    PropagationRun run;
    run.lambda = lambda;
    run.periods = periods;
    run.steps_per_period = steps_per_period;
    run.initial_state = steady_state_at(p, 0.0);
    run.log_norm_trace.reserve(static_cast<std::size_t>(periods) + 1);
    run.log_norm_trace.emplace_back(0.0, 0.0);

    const Stepper stepper{p, lambda, opts};
    Vec2 y = run.initial_state;
    double log_norm = 0.0;
    double dt = tp / steps_per_period;
    double t = 0.0;
    for (int k = 1; k <= periods; ++k) {
        const double t_end = k * tp;
        while (t < t_end - 1e-14 * tp) stepper.step(t, y, dt, t_end);
        const double norm = y[0] + y[1];
        if (!(norm > 0.0)) throw Error("propagate: state norm became nonpositive");
        y[0] /= norm;
        y[1] /= norm;
        log_norm += std::log(norm);
        run.log_norm_trace.emplace_back(t_end, log_norm);
    }
    return run;
}

double finite_time_cgf_rate(const PropagationRun& run, double discard_fraction) {
    if (run.log_norm_trace.size() < 3)
        throw ValidationError("finite_time_cgf_rate: trace too short");
    const std::size_t n = run.log_norm_trace.size() - 1;
    std::size_t i0 = static_cast<std::size_t>(std::ceil(discard_fraction * n));
    i0 = std::min(i0, n - 1);
    const auto& [t0, c0] = run.log_norm_trace[i0];
    const auto& [t1, c1] = run.log_norm_trace[n];
    return (c1 - c0) / (t1 - t0);
}

double finite_time_cumulant(const std::vector<PropagationRun>& runs, int n,
                            double discard_fraction) {
    if (n != 1 && n != 2) throw ValidationError("finite_time_cumulant: n must be 1 or 2");
    // Group by |lambda|: each level must hold a +-h pair.
    std::map<double, std::pair<const PropagationRun*, const PropagationRun*>> levels;
    const PropagationRun* zero = nullptr;
    for (const auto& r : runs) {
        if (r.lambda == 0.0) {
            zero = &r;
            continue;
        }
        auto& slot = levels[std::abs(r.lambda)];
        (r.lambda > 0.0 ? slot.first : slot.second) = &r;
    }
    if (levels.empty()) throw StencilError("finite_time_cumulant: no nonzero-lambda runs");
    for (const auto& [h, pair] : levels)
        if (pair.first == nullptr || pair.second == nullptr)
            throw StencilError("finite_time_cumulant: stencil lacks a +-lambda pair");

    const double r0 = zero ? finite_time_cgf_rate(*zero, discard_fraction) : 0.0;

    // Richardson across levels, largest step first, assuming successive
    // halving of the stencil step.
    std::vector<double> est;
    for (auto it = levels.rbegin(); it != levels.rend(); ++it) {
        const double h = it->first;
        const double rp = finite_time_cgf_rate(*it->second.first, discard_fraction);
        const double rm = finite_time_cgf_rate(*it->second.second, discard_fraction);
        est.push_back(n == 1 ? (rp - rm) / (2.0 * h) : (rp - 2.0 * r0 + rm) / (h * h));
    }
    std::vector<double> prev;
    std::vector<double> row;
    for (std::size_t j = 0; j < est.size(); ++j) {
        row.assign(1, est[j]);
        double pow4 = 1.0;
        for (std::size_t k = 1; k <= j; ++k) {
            pow4 *= 4.0;
            row.push_back(row.back() + (row.back() - prev[k - 1]) / (pow4 - 1.0));
        }
        prev = row;
    }
    return prev.back();
}

double finite_time_cumulant(const ModelParams& p, int n, double lambda_step, int periods,
                            int steps_per_period, double discard_fraction,
                            const OdeOptions& opts) {
    std::vector<PropagationRun> runs;
    for (double lam : {lambda_step, -lambda_step, 0.5 * lambda_step, -0.5 * lambda_step})
        runs.push_back(propagate(p, lam, periods, steps_per_period, opts));
    if (n == 2) runs.push_back(propagate(p, 0.0, periods, steps_per_period, opts));
    return finite_time_cumulant(runs, n, discard_fraction);
}

// ---------------------------------------------------------------------------
// stochastic sampler

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

struct Envelopes {
    double occupied;  // bound on alpha_l + alpha_r over one period
    double empty;     // bound on beta_l + beta_r
};

Envelopes scan_envelopes(const ModelParams& p, double tp) {
    Envelopes env{0.0, 0.0};
    const int n = 2048;
    for (int i = 0; i <= n; ++i) {
        const double t = tp * i / n;
        const RatePair l = rates(p, Side::left, t);
        const RatePair r = rates(p, Side::right, t);
        env.occupied = std::max(env.occupied, l.alpha + r.alpha);
        env.empty = std::max(env.empty, l.beta + r.beta);
    }
    env.occupied *= 1.001;
    env.empty *= 1.001;
    return env;
}

}  // namespace

TrajectoryBatch sample_trajectories(const ModelParams& p, int n_traj, double horizon_periods,
                                    std::uint64_t seed, double burn_fraction, int threads) {
    if (n_traj < 1) throw ValidationError("sample_trajectories: n_traj must be >= 1");
    if (!(horizon_periods > 0.0))
        throw ValidationError("sample_trajectories: horizon must be > 0");
    const double tp = period_or_effective(p);
    const double horizon = horizon_periods * tp;
    const double t_burn = burn_fraction * horizon;
    const Envelopes env = scan_envelopes(p, tp);
    const auto init = steady_state_at(p, 0.0);

    TrajectoryBatch batch;
    batch.n_traj = n_traj;
    batch.horizon_periods = horizon_periods;
    batch.seed = seed;
    batch.window_time = horizon - t_burn;
    batch.counts.assign(static_cast<std::size_t>(n_traj), 0);

    parallel_for(n_traj, threads, [&](int i) {
        std::mt19937_64 rng(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(i) + 1)));
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        bool occupied = uni(rng) < init[0];
        double t = 0.0;
        long long q = 0;
        while (true) {
            const double rate_env = occupied ? env.occupied : env.empty;
            t += -std::log1p(-uni(rng)) / rate_env;
            if (t >= horizon) break;
            const RatePair l = rates(p, Side::left, t);
            const RatePair r = rates(p, Side::right, t);
            const double exit_rate = occupied ? l.alpha + r.alpha : l.beta + r.beta;
            if (exit_rate > rate_env)
                throw Error("sample_trajectories: envelope rate violated");
            if (uni(rng) * rate_env > exit_rate) continue;  // thinned-out candidate
            const bool in_window = t >= t_burn;
            if (occupied) {
                // emission; left channel counts -1
                if (uni(rng) * exit_rate < l.alpha && in_window) q -= 1;
                occupied = false;
            } else {
                // absorption; left channel counts +1
                if (uni(rng) * exit_rate < l.beta && in_window) q += 1;
                occupied = true;
            }
        }
        batch.counts[static_cast<std::size_t>(i)] = q;
    });
    return batch;
}

namespace {

std::pair<double, double> count_moments(const TrajectoryBatch& b) {
    double mean = 0.0;
    for (long long q : b.counts) mean += static_cast<double>(q);
    mean /= b.counts.size();
    double var = 0.0;
    for (long long q : b.counts) {
        const double d = static_cast<double>(q) - mean;
        var += d * d;
    }
    var /= (b.counts.size() > 1 ? b.counts.size() - 1 : 1);
    return {mean, var};
}

}  // namespace

double TrajectoryBatch::mean_rate() const { return count_moments(*this).first / window_time; }

double TrajectoryBatch::variance_rate() const {
    return count_moments(*this).second / window_time;
}

double TrajectoryBatch::mean_rate_stderr() const {
    const auto [mean, var] = count_moments(*this);
    return std::sqrt(var / counts.size()) / window_time;
}

double TrajectoryBatch::variance_rate_stderr() const {
    const auto [mean, var] = count_moments(*this);
    return var * std::sqrt(2.0 / (counts.size() > 1 ? counts.size() - 1.0 : 1.0)) / window_time;
}

}  // namespace sqfcs::oracle
