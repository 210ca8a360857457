// oracle.hpp — ground-truth generators independent of the adiabatic pipeline:
// finite-time propagation of the tilted master equation and a stochastic
// jump-trajectory counter

#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "sqfcs/spectral.hpp"

namespace sqfcs::oracle {

struct OdeOptions {
    double rel_tol = 1e-11;
    double abs_tol = 1e-13;
};

// One propagation of d/dt rho~ = M(lambda, t) rho~ over an integer number of
// periods, with the state renormalized at every period boundary and the log
// of the component sum accumulated; log_norm_trace[k] = (k t_p, log C(k t_p))
// is the finite-time cumulant generating function.
struct PropagationRun {
    double lambda = 0.0;
    int periods = 0;
    int steps_per_period = 0;
    std::array<double, 2> initial_state{};
    std::vector<std::pair<double, double>> log_norm_trace;
};

// Adaptive embedded Runge-Kutta 5(4); steps_per_period sets the initial step.
// Starts from the instantaneous steady state at t = 0.  For an undriven
// protocol the "period" is taken as 2*pi/gamma_total.
PropagationRun propagate(const ModelParams& p, double lambda, int periods,
                         int steps_per_period = 256, const OdeOptions& opts = {});

// Late-time slope of the finite-time CGF [1/ps]; the first discard_fraction
// of the periods is dropped as transient.
double finite_time_cgf_rate(const PropagationRun& run, double discard_fraction = 0.2);

// n-th counting cumulant per unit time from finite differences across a
// symmetric lambda stencil of runs (Richardson-extrapolated across stencil
// levels).  Throws StencilError when the runs do not form +-h pairs or are
// inconsistent in horizon.
double finite_time_cumulant(const std::vector<PropagationRun>& runs, int n,
                            double discard_fraction = 0.2);

// Convenience: propagate a symmetric stencil {0, +-h, +-h/2} and return the
// finite-time cumulant.
double finite_time_cumulant(const ModelParams& p, int n, double lambda_step = 2e-2,
                            int periods = 30, int steps_per_period = 256,
                            double discard_fraction = 0.2, const OdeOptions& opts = {});

// Net boson count per trajectory, counted on the left-reservoir channels
// (+1 absorption from the left bath, -1 emission into it) inside the
// measurement window [burn_fraction * horizon, horizon].
struct TrajectoryBatch {
    int n_traj = 0;
    double horizon_periods = 0.0;
    std::uint64_t seed = 0;
    double window_time = 0.0;  // ps
    std::vector<long long> counts;

    double mean_rate() const;      // [1/ps]
    double variance_rate() const;  // [1/ps]
    double mean_rate_stderr() const;
    double variance_rate_stderr() const;
};

// Continuous-time jump sampling with time-dependent rates via thinning
// against per-state envelope rates; trajectory i draws from an RNG stream
// derived deterministically from (seed, i), so results do not depend on the
// thread count.
TrajectoryBatch sample_trajectories(const ModelParams& p, int n_traj, double horizon_periods,
                                    std::uint64_t seed, double burn_fraction = 0.2,
                                    int threads = 1);

}  // namespace sqfcs::oracle
