#pragma once

#include <functional>
#include <span>
#include <vector>

#include "avpode/core.hpp"
#include "avpode/steppers.hpp"

namespace avpode {

using StateCoefficientFn = std::function<double(double x, std::span<const double> state)>;
using ForcingFn = std::function<double(double x)>;

/// Scalar equation in polynomial form,
///   leading * y^(n) + p_{n-1} * y^(n-1) + ... + p_1 * y' + p_0 * y = f(x),
/// with coefficients that may depend on x and on the state vector.
struct HighOrderPolyOde {
    int order = 1;
    double leading_coefficient = 1.0;
    std::vector<StateCoefficientFn> coefficients;  // p_0 .. p_{order-1}
    ForcingFn forcing;
};

/// Companion-form reduction to a first-order system with state variables
/// s_1 = y, s_2 = y', ..., s_n = y^(n-1).
OdeSystem reduce_to_first_order(const HighOrderPolyOde& high);

/// Reduces, seeds the state vector at the right endpoint and integrates the
/// backward leg down to the left endpoint.
Trajectory solve_high_order_fvp(const HighOrderPolyOde& high, std::span<const double> final_values,
                                const Interval& interval, const MethodSpec& method, double h);

/// Constant shift T of the independent variable inside the rhs: f(x + T, y).
struct DelaySpec {
    double offset = 0.0;
};

/// System whose rhs evaluates the original rhs at (x + T, y). The shift is
/// exact; successive shifts compose additively.
OdeSystem shift_delay(const OdeSystem& system, const DelaySpec& delay);

}  // namespace avpode
