#include "avpode/steppers.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <sstream>
#include <utility>

namespace avpode {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

// RHS access bound either to the whole system or to one segment (one-sided
// evaluation at junction points).
struct RhsView {
    const OdeSystem* system;
    std::size_t segment = 0;
    bool pinned = false;

    void operator()(double x, std::span<const double> y, std::span<double> out) const {
        if (pinned) {
            system->eval_in_segment(segment, x, y, out);
        } else {
            system->eval(x, y, out);
        }
    }
};

void require_finite(std::span<const double> v, const char* what, double x) {
    for (double c : v) {
        if (!std::isfinite(c)) {
            throw NumericOverflowError(std::string(what) + " produced a non-finite value near x = " +
                                       fmt(x));
        }
    }
}

void check_step_pre(std::span<const double> y, double h, const OdeSystem& system) {
    if (!(h > 0.0) || !std::isfinite(h)) {
        throw InvalidArgumentError("step size must be positive and finite");
    }
    if (static_cast<int>(y.size()) != system.dimension()) {
        throw InvalidArgumentError("state vector has " + std::to_string(y.size()) +
                                   " components, system dimension is " +
                                   std::to_string(system.dimension()));
    }
}

double max_norm_diff(std::span<const double> a, std::span<const double> b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(a[i] - b[i]));
    }
    return m;
}

// Decrement function of the classical fourth-order scheme,
//   phi = (1/6) k1 + (1/3) k2 + (1/3) k3 + (1/6) k4,
// with the stage arguments shaped exactly like the general kernel below so
// the classical tableau reproduces this path bit for bit. `sign` is -1 for
// the backward form and +1 for the forward mirror.
std::vector<double> rk4_phi(double x, std::span<const double> y, double h, const RhsView& f,
                            double sign) {
    const std::size_t n = y.size();
    std::vector<double> k1(n), k2(n), k3(n), k4(n), arg(n), phi(n);

    f(x, y, k1);
    require_finite(k1, "rhs stage 1", x);

    for (std::size_t j = 0; j < n; ++j) arg[j] = y[j] + sign * h * (0.5 * k1[j]);
    f(x + sign * (0.5 * h), arg, k2);
    require_finite(k2, "rhs stage 2", x);

    for (std::size_t j = 0; j < n; ++j) arg[j] = y[j] + sign * h * (0.5 * k2[j]);
    f(x + sign * (0.5 * h), arg, k3);
    require_finite(k3, "rhs stage 3", x);

    for (std::size_t j = 0; j < n; ++j) arg[j] = y[j] + sign * h * (1.0 * k3[j]);
    f(x + sign * (1.0 * h), arg, k4);
    require_finite(k4, "rhs stage 4", x);

    for (std::size_t j = 0; j < n; ++j) {
        phi[j] = (1.0 / 6.0) * k1[j];
        phi[j] += (1.0 / 3.0) * k2[j];
        phi[j] += (1.0 / 3.0) * k3[j];
        phi[j] += (1.0 / 6.0) * k4[j];
    }
    return phi;
}

// General explicit tableau: K_1 = f(x, y), K_i = f(x +- alpha_i h,
// y -+ h sum beta_ij K_j), phi = sum c_i K_i.
std::vector<double> general_rk_phi(double x, std::span<const double> y, double h,
                                   const RhsView& f, const RkTableau& tableau, double sign) {
    const std::size_t n = y.size();
    const int r = tableau.stages();
    std::vector<std::vector<double>> k(static_cast<std::size_t>(r), std::vector<double>(n));
    std::vector<double> arg(n), acc(n), phi(n, 0.0);

    f(x, y, k[0]);
    require_finite(k[0], "rhs stage 1", x);
    for (int i = 1; i < r; ++i) {
        const auto& beta = tableau.coefficients()[static_cast<std::size_t>(i - 1)];
        std::fill(acc.begin(), acc.end(), 0.0);
        for (int j = 0; j < i; ++j) {
            for (std::size_t c = 0; c < n; ++c) acc[c] += beta[static_cast<std::size_t>(j)] * k[static_cast<std::size_t>(j)][c];
        }
        for (std::size_t c = 0; c < n; ++c) arg[c] = y[c] + sign * h * acc[c];
        const double alpha = tableau.offsets()[static_cast<std::size_t>(i - 1)];
        f(x + sign * (alpha * h), arg, k[static_cast<std::size_t>(i)]);
        require_finite(k[static_cast<std::size_t>(i)], "rhs stage", x);
    }
    for (int i = 0; i < r; ++i) {
        const double w = tableau.weights()[static_cast<std::size_t>(i)];
        for (std::size_t c = 0; c < n; ++c) phi[c] += w * k[static_cast<std::size_t>(i)][c];
    }
    return phi;
}

std::vector<double> euler_step(double x, std::span<const double> y, double h, const RhsView& f,
                               double sign) {
    const std::size_t n = y.size();
    std::vector<double> k(n), out(n);
    f(x, y, k);
    require_finite(k, "rhs", x);
    for (std::size_t j = 0; j < n; ++j) out[j] = y[j] + sign * h * k[j];
    return out;
}

// Corrector loop shared by both predictor-corrector forms. `target` maps the
// current iterate to the next one; iteration stops when the max-norm change
// drops below tol or max_iters is reached (non-convergence is flagged, not
// fatal; the divergent iterate is still returned).
template <typename TargetFn>
StepRecord run_corrector(std::vector<double> predictor, double x_target, double tol, int max_iters,
                         TargetFn&& target) {
    if (!(tol > 0.0)) {
        throw InvalidArgumentError("corrector tolerance must be positive");
    }
    if (max_iters < 1) {
        throw InvalidArgumentError("corrector max iterations must be positive");
    }
    StepRecord record;
    require_finite(predictor, "predictor", x_target);
    std::vector<double> current = std::move(predictor);
    std::vector<double> next(current.size());
    record.converged = false;
    for (int s = 1; s <= max_iters; ++s) {
        target(current, next);
        require_finite(next, "corrector iterate", x_target);
        const double delta = max_norm_diff(next, current);
        record.correction_deltas.push_back(delta);
        record.corrector_iterations_used = s;
        current.swap(next);
        if (delta < tol) {
            record.converged = true;
            break;
        }
    }
    record.y_out = std::move(current);
    return record;
}

}  // namespace

RkTableau::RkTableau(std::vector<double> weights, std::vector<double> offsets,
                     std::vector<std::vector<double>> coefficients)
    : weights_(std::move(weights)), offsets_(std::move(offsets)),
      coefficients_(std::move(coefficients)) {
    const std::size_t r = weights_.size();
    if (r == 0) {
        throw InvalidArgumentError("tableau needs at least one stage");
    }
    if (offsets_.size() != r - 1 || coefficients_.size() != r - 1) {
        throw InvalidArgumentError("tableau needs one offset and one coefficient row per stage "
                                   "beyond the first");
    }
    for (std::size_t i = 0; i < coefficients_.size(); ++i) {
        if (coefficients_[i].size() != i + 1) {
            throw InvalidArgumentError("tableau coefficient rows must be strictly lower triangular");
        }
    }
    double s = 0.0;
    for (double c : weights_) s += c;
    if (std::abs(s - 1.0) > 1e-12) {
        throw InvalidArgumentError("tableau weights must sum to 1, got " + fmt(s));
    }
}

RkTableau RkTableau::classical_rk4() {
    return RkTableau({1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0}, {0.5, 0.5, 1.0},
                     {{0.5}, {0.0, 0.5}, {0.0, 0.0, 1.0}});
}

MethodSpec MethodSpec::explicit_euler() { return MethodSpec{MethodKind::ExplicitEuler, 1e-12, 50, {}}; }
MethodSpec MethodSpec::euler_pc(double tol, int max_iters) {
    return MethodSpec{MethodKind::EulerPC, tol, max_iters, {}};
}
MethodSpec MethodSpec::trapezoid_pc(double tol, int max_iters) {
    return MethodSpec{MethodKind::TrapezoidPC, tol, max_iters, {}};
}
MethodSpec MethodSpec::classical_rk4() { return MethodSpec{MethodKind::ClassicalRk4, 1e-12, 50, {}}; }
MethodSpec MethodSpec::general_rk(RkTableau tableau) {
    return MethodSpec{MethodKind::GeneralRk, 1e-12, 50, std::move(tableau)};
}

std::string method_kind_name(MethodKind kind) {
    switch (kind) {
        case MethodKind::ExplicitEuler: return "explicit-euler";
        case MethodKind::EulerPC: return "euler-pc";
        case MethodKind::TrapezoidPC: return "trapezoid-pc";
        case MethodKind::ClassicalRk4: return "rk4";
        case MethodKind::GeneralRk: return "general-rk";
    }
    return "unknown";
}

std::string MethodSpec::name() const { return method_kind_name(kind); }

void MethodSpec::validate() const {
    if (is_predictor_corrector()) {
        if (!(corrector_tol > 0.0)) {
            throw InvalidArgumentError("corrector tolerance must be positive");
        }
        if (corrector_max_iters < 1) {
            throw InvalidArgumentError("corrector max iterations must be positive");
        }
    }
    if ((kind == MethodKind::GeneralRk) != tableau.has_value()) {
        throw InvalidArgumentError("tableau must be present exactly for the general-rk kind");
    }
}

std::vector<double> step_explicit_euler_backward(double x_next, std::span<const double> y_next,
                                                 double h, const OdeSystem& system) {
    check_step_pre(y_next, h, system);
    return euler_step(x_next, y_next, h, RhsView{&system}, -1.0);
}

std::vector<double> step_explicit_euler_forward(double x_prev, std::span<const double> y_prev,
                                                double h, const OdeSystem& system) {
    check_step_pre(y_prev, h, system);
    return euler_step(x_prev, y_prev, h, RhsView{&system}, +1.0);
}

namespace {

StepRecord euler_pc_step(double x_from, std::span<const double> y_from, double h, const RhsView& f,
                         double tol, int max_iters, double sign) {
    const std::size_t n = y_from.size();
    const double x_to = x_from + sign * h;
    std::vector<double> k(n);
    return run_corrector(euler_step(x_from, y_from, h, f, sign), x_to, tol, max_iters,
                         [&](const std::vector<double>& cur, std::vector<double>& next) {
                             f(x_to, cur, k);
                             for (std::size_t j = 0; j < n; ++j) next[j] = y_from[j] + sign * h * k[j];
                         });
}

StepRecord trapezoid_pc_step(double x_from, std::span<const double> y_from, double h,
                             const RhsView& f, double tol, int max_iters, double sign) {
    const std::size_t n = y_from.size();
    const double x_to = x_from + sign * h;
    std::vector<double> k(n), k_from(n);
    f(x_from, y_from, k_from);
    require_finite(k_from, "rhs", x_from);
    return run_corrector(euler_step(x_from, y_from, h, f, sign), x_to, tol, max_iters,
                         [&](const std::vector<double>& cur, std::vector<double>& next) {
                             f(x_to, cur, k);
                             for (std::size_t j = 0; j < n; ++j) {
                                 next[j] = y_from[j] + sign * (0.5 * h) * (k[j] + k_from[j]);
                             }
                         });
}

}  // namespace

StepRecord step_euler_pc_backward(double x_next, std::span<const double> y_next, double h,
                                  const OdeSystem& system, double tol, int max_iters) {
    check_step_pre(y_next, h, system);
    return euler_pc_step(x_next, y_next, h, RhsView{&system}, tol, max_iters, -1.0);
}

StepRecord step_euler_pc_forward(double x_prev, std::span<const double> y_prev, double h,
                                 const OdeSystem& system, double tol, int max_iters) {
    check_step_pre(y_prev, h, system);
    return euler_pc_step(x_prev, y_prev, h, RhsView{&system}, tol, max_iters, +1.0);
}

StepRecord step_trapezoid_pc_backward(double x_next, std::span<const double> y_next, double h,
                                      const OdeSystem& system, double tol, int max_iters) {
    check_step_pre(y_next, h, system);
    return trapezoid_pc_step(x_next, y_next, h, RhsView{&system}, tol, max_iters, -1.0);
}

StepRecord step_trapezoid_pc_forward(double x_prev, std::span<const double> y_prev, double h,
                                     const OdeSystem& system, double tol, int max_iters) {
    check_step_pre(y_prev, h, system);
    return trapezoid_pc_step(x_prev, y_prev, h, RhsView{&system}, tol, max_iters, +1.0);
}

namespace {

std::vector<double> apply_phi(std::span<const double> y, double h, std::span<const double> phi,
                              double sign) {
    std::vector<double> out(y.size());
    for (std::size_t j = 0; j < y.size(); ++j) out[j] = y[j] + sign * h * phi[j];
    return out;
}

}  // namespace

std::vector<double> step_rk4_backward(double x_next, std::span<const double> y_next, double h,
                                      const OdeSystem& system) {
    check_step_pre(y_next, h, system);
    const auto phi = rk4_phi(x_next, y_next, h, RhsView{&system}, -1.0);
    return apply_phi(y_next, h, phi, -1.0);
}

std::vector<double> step_rk4_forward(double x_prev, std::span<const double> y_prev, double h,
                                     const OdeSystem& system) {
    check_step_pre(y_prev, h, system);
    const auto phi = rk4_phi(x_prev, y_prev, h, RhsView{&system}, +1.0);
    return apply_phi(y_prev, h, phi, +1.0);
}

std::vector<double> step_general_rk_backward(double x_next, std::span<const double> y_next,
                                             double h, const OdeSystem& system,
                                             const RkTableau& tableau) {
    check_step_pre(y_next, h, system);
    const auto phi = general_rk_phi(x_next, y_next, h, RhsView{&system}, tableau, -1.0);
    return apply_phi(y_next, h, phi, -1.0);
}

std::vector<double> step_general_rk_forward(double x_prev, std::span<const double> y_prev,
                                            double h, const OdeSystem& system,
                                            const RkTableau& tableau) {
    check_step_pre(y_prev, h, system);
    const auto phi = general_rk_phi(x_prev, y_prev, h, RhsView{&system}, tableau, +1.0);
    return apply_phi(y_prev, h, phi, +1.0);
}

std::vector<double> decrement_function(const MethodSpec& method, double x,
                                       std::span<const double> y, double h,
                                       const OdeSystem& system) {
    check_step_pre(y, h, system);
    method.validate();
    const RhsView f{&system};
    switch (method.kind) {
        case MethodKind::ExplicitEuler: {
            std::vector<double> phi(y.size());
            f(x, y, phi);
            require_finite(phi, "rhs", x);
            return phi;
        }
        case MethodKind::ClassicalRk4:
            return rk4_phi(x, y, h, f, -1.0);
        case MethodKind::GeneralRk:
            return general_rk_phi(x, y, h, f, *method.tableau, -1.0);
        case MethodKind::EulerPC:
        case MethodKind::TrapezoidPC:
            throw UnsupportedMethodError("decrement function is undefined for " + method.name() +
                                         ": its update is implicit in the departure value");
    }
    throw UnsupportedMethodError("unknown method kind");
}

namespace {

std::vector<double> apply_method_step(const MethodSpec& method, double x_from,
                                      std::span<const double> y_from, double h, const RhsView& f,
                                      double sign) {
    switch (method.kind) {
        case MethodKind::ExplicitEuler:
            return euler_step(x_from, y_from, h, f, sign);
        case MethodKind::EulerPC:
            return euler_pc_step(x_from, y_from, h, f, method.corrector_tol,
                                 method.corrector_max_iters, sign)
                .y_out;
        case MethodKind::TrapezoidPC:
            return trapezoid_pc_step(x_from, y_from, h, f, method.corrector_tol,
                                     method.corrector_max_iters, sign)
                .y_out;
        case MethodKind::ClassicalRk4:
            return apply_phi(y_from, h, rk4_phi(x_from, y_from, h, f, sign), sign);
        case MethodKind::GeneralRk:
            return apply_phi(y_from, h, general_rk_phi(x_from, y_from, h, f, *method.tableau, sign),
                             sign);
    }
    throw UnsupportedMethodError("unknown method kind");
}

}  // namespace

Trajectory integrate_leg(const OdeSystem& system, double from_x, std::span<const double> from_y,
                         double to_x, const MethodSpec& method, double h) {
    method.validate();
    if (from_x == to_x) {
        throw InvalidArgumentError("leg endpoints must differ");
    }
    if (static_cast<int>(from_y.size()) != system.dimension()) {
        throw InvalidArgumentError("seed vector has " + std::to_string(from_y.size()) +
                                   " components, system dimension is " +
                                   std::to_string(system.dimension()));
    }
    require_finite(from_y, "seed value", from_x);
    const bool backward = to_x < from_x;
    const double sign = backward ? -1.0 : +1.0;
    const Interval span(std::min(from_x, to_x), std::max(from_x, to_x));
    if (!system.covers(span)) {
        throw InvalidArgumentError("system segments do not cover the leg [" + fmt(span.lo) + ", " +
                                   fmt(span.hi) + "]");
    }
    const UniformGrid grid = make_uniform_grid(span, h);

    // Piecewise break points must land on grid points; otherwise a step would
    // straddle two segments.
    for (double b : system.break_points_within(span)) {
        const double steps = std::round((b - from_x) / (sign * grid.h));
        const double nearest = from_x + sign * (steps * grid.h);
        const double tol = 4.0 * std::numeric_limits<double>::epsilon() *
                           std::max({std::abs(b), std::abs(from_x), 1.0});
        if (std::abs(nearest - b) > tol) {
            throw GridMisalignmentError("break point at x = " + fmt(b) +
                                        " does not coincide with a grid point (h = " + fmt(grid.h) +
                                        ")");
        }
    }

    std::vector<double> xs(static_cast<std::size_t>(grid.count) + 1);
    std::vector<std::vector<double>> ys(xs.size());
    xs[0] = from_x;
    ys[0].assign(from_y.begin(), from_y.end());
    for (std::int64_t i = 1; i <= grid.count; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        xs[idx] = i == grid.count ? to_x : from_x + sign * (static_cast<double>(i) * grid.h);
        const double x_prev = xs[idx - 1];
        const std::size_t seg =
            system.segment_for_span(std::min(x_prev, xs[idx]), std::max(x_prev, xs[idx]));
        try {
            ys[idx] = apply_method_step(method, x_prev, ys[idx - 1], grid.h,
                                        RhsView{&system, seg, system.bounded()}, sign);
        } catch (const NumericOverflowError& e) {
            throw NumericOverflowError(std::string(e.what()) + " (grid index " + std::to_string(i) +
                                       " of " + std::to_string(grid.count) + ")");
        }
    }
    return Trajectory(std::move(xs), std::move(ys), method.name(), grid.h,
                      backward ? Direction::Backward : Direction::Forward);
}

}  // namespace avpode
