#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "avpode/core.hpp"
#include "avpode/steppers.hpp"

namespace avpode {

struct LipschitzEstimate {
    double L = 0.0;
    std::int64_t sample_count = 0;
    Interval x_region;
    std::vector<std::pair<double, double>> y_region;  // per-component [lo, hi]
};

/// One evaluated convergence/stability inequality.
struct AnalysisReport {
    bool satisfied = false;
    double lhs = 0.0;
    double rhs = 0.0;
    std::string inequality_text;
};

/// Estimates the Lipschitz constant of f in y over x_range x y_box by taking
/// the larger of two estimators: max-norm difference quotients over a uniform
/// lattice, and central finite-difference probes of the Jacobian infinity
/// norm at the lattice points.
LipschitzEstimate estimate_lipschitz(const OdeSystem& system, const Interval& x_range,
                                     const std::vector<std::pair<double, double>>& y_box,
                                     int samples_per_axis);

/// Convergence condition of the backward scheme for step h and Lipschitz
/// constant L. Predictor-corrector kinds test the contraction of their
/// corrector iteration (hL < 1, hL/2 < 1); the explicit kinds are convergent
/// whenever the decrement function's Lipschitz constant is finite, which the
/// report carries as lhs.
AnalysisReport convergence_condition(MethodKind kind, double h, double L,
                                     const std::optional<RkTableau>& tableau = std::nullopt);

/// Stability of the backward scheme on the test model y' = lambda*y with
/// lambda > 0: satisfied iff the per-step amplification magnitude is < 1.
AnalysisReport stability_condition(MethodKind kind, double h, double lambda,
                                   const std::optional<RkTableau>& tableau = std::nullopt);

/// Signed per-step factor R(z) the backward scheme applies to the test model
/// y' = lambda*y, z = h*lambda. Predictor-corrector kinds report the factor
/// of their implicit target formula (the corrector's fixed point).
double linear_amplification(MethodKind kind, double z,
                            const std::optional<RkTableau>& tableau = std::nullopt);

/// Global error bound |e0|*exp(T*L) + (C*h^p/L)*(exp(T*L) - 1).
double global_error_bound(double e0, double L, double C, double h, int p, double T);

using ExactSolutionFn = std::function<std::vector<double>(double)>;

/// Empirical order: integrates the leg at the adjusted step h and at h/2 and
/// returns log2 of the ratio of max-norm errors against exact over shared
/// grid points.
double observed_order(const OdeSystem& system, const ExactSolutionFn& exact, double from_x,
                      std::span<const double> from_y, double to_x, const MethodSpec& method,
                      double h);

}  // namespace avpode
