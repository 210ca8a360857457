// derivative.hpp — central finite differences in the counting field with
// Richardson extrapolation

#pragma once

#include <cmath>
#include <vector>

#include "sqfcs/errors.hpp"

namespace sqfcs {

// order: which derivative at 0 (1 or 2). Steps are base_step/2^j for
// j = 0..levels-1, strictly decreasing by construction.
struct DerivativeScheme {
    int order = 1;
    double base_step = 1e-2;
    int levels = 4;
    double tol = 1e-8;

    std::vector<double> steps() const {
        std::vector<double> s(static_cast<std::size_t>(levels));
        double h = base_step;
        for (auto& v : s) {
            v = h;
            h *= 0.5;
        }
        return s;
    }

    void validate() const {
        if (order != 1 && order != 2)
            throw ValidationError("derivative: order must be 1 or 2");
        if (!(base_step >= 1e-5 && base_step <= 1e-2))
            throw ValidationError("derivative: base_step out of [1e-5, 1e-2]");
        if (levels < 2 || levels > 8)
            throw ValidationError("derivative: levels out of [2, 8]");
        if (!(tol > 0.0)) throw ValidationError("derivative: tol must be > 0");
    }
};

struct DerivativeResult {
    double value;
    double error_estimate;
};

// f^{(order)}(0) for a smooth f.  Central differences at steps base/2^j feed a
// Richardson tableau T[j][k] = T[j][k-1] + (T[j][k-1] - T[j-1][k-1])/(4^k - 1);
// the returned error estimate is the last diagonal correction.  Throws
// DerivativeError when successive diagonal entries differ by more than 100x
// the scheme tolerance.
template <class F>
DerivativeResult lambda_derivative(F&& f, const DerivativeScheme& scheme) {
    scheme.validate();
    const double f0 = scheme.order == 2 ? f(0.0) : 0.0;

    std::vector<double> prev_row;
    std::vector<double> row;
    double fscale = 0.0;  // magnitude scale of the raw difference quotients
    double value = 0.0;
    double err = 0.0;

    double h = scheme.base_step;
    for (int j = 0; j < scheme.levels; ++j, h *= 0.5) {
        const double fp = f(h);
        const double fm = f(-h);
        double est;
        if (scheme.order == 1) {
            est = (fp - fm) / (2.0 * h);
            fscale = std::max(fscale, std::max(std::abs(fp), std::abs(fm)) / (2.0 * h));
        } else {
            est = (fp - 2.0 * f0 + fm) / (h * h);
            fscale = std::max(fscale,
                              (std::abs(fp) + 2.0 * std::abs(f0) + std::abs(fm)) / (h * h));
        }
        row.assign(1, est);
        double pow4 = 1.0;
        for (int k = 1; k <= j; ++k) {
            pow4 *= 4.0;
            row.push_back(row.back() + (row.back() - prev_row[static_cast<std::size_t>(k) - 1]) /
                                           (pow4 - 1.0));
        }
        if (j > 0) err = std::abs(row.back() - prev_row.back());
        value = row.back();
        prev_row = row;
    }

    const double floor = 1e-6 * fscale;
    if (err > 100.0 * scheme.tol * std::max(std::abs(value), floor))
        throw DerivativeError("derivative extrapolation did not converge");
    return DerivativeResult{value, err};
}

}  // namespace sqfcs
