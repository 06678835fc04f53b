#include "avpode/reduction.hpp"

#include <cmath>
#include <memory>
#include <utility>

namespace avpode {

OdeSystem reduce_to_first_order(const HighOrderPolyOde& high) {
    if (high.order < 1) {
        throw InvalidArgumentError("order must be at least 1");
    }
    if (high.leading_coefficient == 0.0 || !std::isfinite(high.leading_coefficient)) {
        throw InvalidArgumentError("leading coefficient must be nonzero and finite");
    }
    if (static_cast<int>(high.coefficients.size()) != high.order) {
        throw InvalidArgumentError("need exactly p_0..p_{n-1}: expected " +
                                   std::to_string(high.order) + " coefficient functions, got " +
                                   std::to_string(high.coefficients.size()));
    }
    for (const auto& p : high.coefficients) {
        if (!p) {
            throw InvalidArgumentError("coefficient functions must be callable");
        }
    }
    if (!high.forcing) {
        throw InvalidArgumentError("forcing must be callable");
    }

    const int n = high.order;
    const double leading = high.leading_coefficient;
    auto coeffs = std::make_shared<std::vector<StateCoefficientFn>>(high.coefficients);
    auto forcing = high.forcing;
    // State s_1 = y, ..., s_n = y^(n-1); the last equation isolates y^(n).
    return OdeSystem::single(n, [n, leading, coeffs, forcing](double x, std::span<const double> s,
                                                              std::span<double> out) {
        for (int i = 0; i + 1 < n; ++i) {
            out[static_cast<std::size_t>(i)] = s[static_cast<std::size_t>(i) + 1];
        }
        double acc = 0.0;
        for (int i = 0; i < n; ++i) {
            acc += (*coeffs)[static_cast<std::size_t>(i)](x, s) * s[static_cast<std::size_t>(i)];
        }
        out[static_cast<std::size_t>(n) - 1] = (forcing(x) - acc) / leading;
    });
}

Trajectory solve_high_order_fvp(const HighOrderPolyOde& high, std::span<const double> final_values,
                                const Interval& interval, const MethodSpec& method, double h) {
    if (static_cast<int>(final_values.size()) != high.order) {
        throw InvalidArgumentError("final state needs one value per derivative order: expected " +
                                   std::to_string(high.order) + ", got " +
                                   std::to_string(final_values.size()));
    }
    const OdeSystem system = reduce_to_first_order(high);
    return integrate_leg(system, interval.hi, final_values, interval.lo, method, h);
}

OdeSystem shift_delay(const OdeSystem& system, const DelaySpec& delay) {
    return system.with_argument_shift(delay.offset);
}

}  // namespace avpode
