// quadrature.hpp — composite Gauss-Legendre quadrature with panel-doubling
// refinement

#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "sqfcs/errors.hpp"

namespace sqfcs {

// Nodes and weights on [-1, 1].
struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Cached rule of the given order (Newton iteration on the Legendre recurrence).
const GaussLegendreRule& gauss_legendre(int n);

// Fixed-order Gauss-Legendre panels over the integration interval. The result
// is accepted once doubling the panel count moves it by less than
// tol * max(|I|, 1e-3 * integral of |f|) + abs_tol.  The absolute term is for
// integrands whose true value sits below their own evaluation noise (e.g.
// finite-difference connections at strong squeezing); it defaults to off.
struct QuadratureSpec {
    int nodes_per_panel = 8;
    int panels = 32;
    double tol = 1e-8;
    int max_doublings = 6;
    double abs_tol = 0.0;

    void validate() const {
        if (nodes_per_panel < 2 || nodes_per_panel > 64)
            throw ValidationError("quadrature: nodes_per_panel out of [2, 64]");
        if (panels < 8) throw ValidationError("quadrature: panels must be >= 8");
        if (!(tol > 0.0)) throw ValidationError("quadrature: tol must be > 0");
        if (max_doublings < 0) throw ValidationError("quadrature: max_doublings must be >= 0");
        if (!(abs_tol >= 0.0)) throw ValidationError("quadrature: abs_tol must be >= 0");
    }
};

namespace detail {

template <class F>
std::pair<double, double> composite_pass(F&& f, double a, double b, int panels,
                                         const GaussLegendreRule& rule) {
    const double h = (b - a) / panels;
    double total = 0.0;
    double mass = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double mid = a + (p + 0.5) * h;
        const double half = 0.5 * h;
        for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
            const double v = f(mid + half * rule.nodes[k]);
            const double w = half * rule.weights[k];
            total += w * v;
            mass += std::abs(w * v);
        }
    }
    return {total, mass};
}

}  // namespace detail

template <class F>
double integrate(F&& f, double a, double b, const QuadratureSpec& spec = {}) {
    spec.validate();
    if (a == b) return 0.0;
    const GaussLegendreRule& rule = gauss_legendre(spec.nodes_per_panel);

    int panels = spec.panels;
    auto [prev, prev_mass] = detail::composite_pass(f, a, b, panels, rule);
    for (int round = 0; round < spec.max_doublings; ++round) {
        panels *= 2;
        auto [cur, mass] = detail::composite_pass(f, a, b, panels, rule);
        const double scale = std::max(std::abs(cur), 1e-3 * mass);
        if (std::abs(cur - prev) <= spec.tol * scale + spec.abs_tol + 1e-300) return cur;
        prev = cur;
        prev_mass = mass;
    }
    throw QuadratureError("quadrature did not converge within the doubling budget");
}

}  // namespace sqfcs
