#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "avpode/errors.hpp"

namespace avpode {

/// Closed interval [lo, hi] on the independent axis. Requires lo < hi, both finite.
struct Interval {
    double lo;
    double hi;

    Interval(double lo_, double hi_);

    double length() const { return hi - lo; }
    bool contains(double x) const { return x >= lo && x <= hi; }
};

/// Forward means increasing x, backward means decreasing x.
enum class Direction { Forward, Backward };

/// Where the known value sits relative to the interval endpoints.
enum class ProblemClass { Initial, Final, InnerInterval };

/// Right-hand side contract: writes f(x, y) into dydx; y and dydx have the
/// system dimension.
using RhsFn = std::function<void(double x, std::span<const double> y, std::span<double> dydx)>;

/// First-order system y' = f(x, y) of fixed dimension. The right-hand side is
/// either a single function valid everywhere or an ordered list of contiguous
/// segments, each with its own function (break points may carry jumps).
///
/// Systems are immutable after construction and safe to share across threads.
class OdeSystem {
public:
    struct Segment {
        std::optional<Interval> span;  // nullopt: valid for every x
        RhsFn rhs;
    };

    /// System with one rhs valid on any interval.
    static OdeSystem single(int dimension, RhsFn rhs);

    /// System assembled from contiguous, non-overlapping segments (ordered by x).
    static OdeSystem piecewise(int dimension, std::vector<std::pair<Interval, RhsFn>> segments);

    int dimension() const { return dim_; }

    /// True when the rhs is only defined on the union of bounded segments.
    bool bounded() const { return bounded_; }
    std::size_t segment_count() const { return segments_.size(); }

    /// Span of segment i on the axis this system is evaluated on.
    Interval segment_span(std::size_t i) const;

    /// Break points strictly inside `iv` (piecewise systems only).
    std::vector<double> break_points_within(const Interval& iv) const;

    bool covers(const Interval& iv) const;

    /// Index of the first segment whose closed span contains x.
    std::size_t segment_containing(double x) const;

    /// Segment holding the whole step span [x_lo, x_hi]; junction points are
    /// resolved one-sided, from inside the step.
    std::size_t segment_for_span(double x_lo, double x_hi) const;

    void eval(double x, std::span<const double> y, std::span<double> out) const;
    void eval_in_segment(std::size_t seg, double x, std::span<const double> y,
                         std::span<double> out) const;
    std::vector<double> eval(double x, std::span<const double> y) const;

    /// System whose rhs is this one's evaluated at x + delta; segment spans
    /// translate by -delta. Repeated shifts accumulate into a single offset.
    OdeSystem with_argument_shift(double delta) const;
    double argument_shift() const { return shift_; }

private:
    OdeSystem() = default;

    int dim_ = 0;
    bool bounded_ = false;
    double shift_ = 0.0;              // rhs sees x + shift_
    std::vector<Segment> segments_;   // spans stored on the base (unshifted) axis
};

/// The known value y(x) = y of the problem. x may be anywhere in the interval.
struct BoundaryCondition {
    double x;
    std::vector<double> y;
};

/// An ODE problem with the value given at an arbitrary point of [a, c].
class AvpProblem {
public:
    AvpProblem(OdeSystem system, Interval interval, BoundaryCondition condition);

    const OdeSystem& system() const { return system_; }
    const Interval& interval() const { return interval_; }
    const BoundaryCondition& condition() const { return condition_; }

private:
    OdeSystem system_;
    Interval interval_;
    BoundaryCondition condition_;
};

/// Initial iff the condition sits exactly on the left endpoint, Final iff on
/// the right endpoint, InnerInterval otherwise. Comparison is exact.
ProblemClass classify_problem(const AvpProblem& problem);

struct UniformGrid {
    double h;            // adjusted step, (hi - lo) / count
    std::int64_t count;  // number of steps; samples = count + 1
};

/// Adjusts h_requested so an integer number of steps lands exactly on both
/// endpoints: count = round(length / h_requested), h = length / count.
UniformGrid make_uniform_grid(const Interval& interval, double h_requested);

/// Discrete solution samples (x_i, y_i) produced by a one-step method.
/// xs is strictly increasing for Forward, strictly decreasing for Backward.
class Trajectory {
public:
    Trajectory(std::vector<double> xs, std::vector<std::vector<double>> ys,
               std::string method_name, double step, Direction direction);

    std::size_t size() const { return xs_.size(); }
    int dimension() const { return ys_.empty() ? 0 : static_cast<int>(ys_.front().size()); }
    double x(std::size_t i) const { return xs_[i]; }
    const std::vector<double>& y(std::size_t i) const { return ys_[i]; }
    const std::vector<double>& xs() const { return xs_; }
    const std::vector<std::vector<double>>& ys() const { return ys_; }
    const std::string& method_name() const { return method_name_; }
    double step() const { return step_; }
    Direction direction() const { return direction_; }

    Trajectory reversed() const;

private:
    std::vector<double> xs_;
    std::vector<std::vector<double>> ys_;
    std::string method_name_;
    double step_;
    Direction direction_;
};

}  // namespace avpode
