#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "avpode/core.hpp"

namespace avpode {

/// Coefficients of an explicit Runge-Kutta scheme: weights c_1..c_r, stage
/// offsets alpha_2..alpha_r and the strictly lower-triangular stage matrix
/// beta (row i holds beta_{i,1}..beta_{i,i-1} for stage i = 2..r).
class RkTableau {
public:
    RkTableau(std::vector<double> weights, std::vector<double> offsets,
              std::vector<std::vector<double>> coefficients);

    int stages() const { return static_cast<int>(weights_.size()); }
    const std::vector<double>& weights() const { return weights_; }
    const std::vector<double>& offsets() const { return offsets_; }
    const std::vector<std::vector<double>>& coefficients() const { return coefficients_; }

    static RkTableau classical_rk4();

private:
    std::vector<double> weights_;
    std::vector<double> offsets_;
    std::vector<std::vector<double>> coefficients_;
};

enum class MethodKind { ExplicitEuler, EulerPC, TrapezoidPC, ClassicalRk4, GeneralRk };

/// A scheme choice plus its parameters. Corrector fields only matter for the
/// predictor-corrector kinds; the tableau is present exactly for GeneralRk.
struct MethodSpec {
    MethodKind kind = MethodKind::ClassicalRk4;
    double corrector_tol = 1e-12;
    int corrector_max_iters = 50;
    std::optional<RkTableau> tableau;

    static MethodSpec explicit_euler();
    static MethodSpec euler_pc(double tol = 1e-12, int max_iters = 50);
    static MethodSpec trapezoid_pc(double tol = 1e-12, int max_iters = 50);
    static MethodSpec classical_rk4();
    static MethodSpec general_rk(RkTableau tableau);

    std::string name() const;
    bool is_predictor_corrector() const {
        return kind == MethodKind::EulerPC || kind == MethodKind::TrapezoidPC;
    }
    void validate() const;
};

std::string method_kind_name(MethodKind kind);

/// Outcome of one predictor-corrector step.
struct StepRecord {
    std::vector<double> y_out;
    int corrector_iterations_used = 0;
    /// False when max_iters was reached before the tolerance was met.
    bool converged = true;
    /// Max-norm change of each corrector iteration, in order.
    std::vector<double> correction_deltas;
};

// Backward steps: given the value at x_next, produce the value at x_next - h.
std::vector<double> step_explicit_euler_backward(double x_next, std::span<const double> y_next,
                                                 double h, const OdeSystem& system);
StepRecord step_euler_pc_backward(double x_next, std::span<const double> y_next, double h,
                                  const OdeSystem& system, double tol, int max_iters);
StepRecord step_trapezoid_pc_backward(double x_next, std::span<const double> y_next, double h,
                                      const OdeSystem& system, double tol, int max_iters);
std::vector<double> step_rk4_backward(double x_next, std::span<const double> y_next, double h,
                                      const OdeSystem& system);
std::vector<double> step_general_rk_backward(double x_next, std::span<const double> y_next,
                                             double h, const OdeSystem& system,
                                             const RkTableau& tableau);

// Forward mirrors: given the value at x_prev, produce the value at x_prev + h.
std::vector<double> step_explicit_euler_forward(double x_prev, std::span<const double> y_prev,
                                                double h, const OdeSystem& system);
StepRecord step_euler_pc_forward(double x_prev, std::span<const double> y_prev, double h,
                                 const OdeSystem& system, double tol, int max_iters);
StepRecord step_trapezoid_pc_forward(double x_prev, std::span<const double> y_prev, double h,
                                     const OdeSystem& system, double tol, int max_iters);
std::vector<double> step_rk4_forward(double x_prev, std::span<const double> y_prev, double h,
                                     const OdeSystem& system);
std::vector<double> step_general_rk_forward(double x_prev, std::span<const double> y_prev,
                                            double h, const OdeSystem& system,
                                            const RkTableau& tableau);

/// phi of the one-step recurrence y_out = y - h * phi(x, y, h), with x the
/// departure point of the backward step. Defined for the explicit kinds only.
std::vector<double> decrement_function(const MethodSpec& method, double x,
                                       std::span<const double> y, double h,
                                       const OdeSystem& system);

/// Drives the method's step across a uniform grid from (from_x, from_y) to
/// to_x. Direction is Backward when to_x < from_x. The grid step is adjusted
/// per make_uniform_grid; both endpoints are hit exactly.
Trajectory integrate_leg(const OdeSystem& system, double from_x, std::span<const double> from_y,
                         double to_x, const MethodSpec& method, double h);

}  // namespace avpode
