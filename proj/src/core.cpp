#include "avpode/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace avpode {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace

Interval::Interval(double lo_, double hi_) : lo(lo_), hi(hi_) {
    if (!std::isfinite(lo) || !std::isfinite(hi)) {
        throw InvalidArgumentError("interval endpoints must be finite");
    }
    if (!(lo < hi)) {
        throw InvalidArgumentError("interval requires lo < hi, got [" + fmt(lo) + ", " + fmt(hi) +
                                   "]");
    }
}

OdeSystem OdeSystem::single(int dimension, RhsFn rhs) {
    if (dimension < 1) {
        throw InvalidArgumentError("system dimension must be positive");
    }
    if (!rhs) {
        throw InvalidArgumentError("rhs must be callable");
    }
    OdeSystem sys;
    sys.dim_ = dimension;
    sys.bounded_ = false;
    sys.segments_.push_back(Segment{std::nullopt, std::move(rhs)});
    return sys;
}

OdeSystem OdeSystem::piecewise(int dimension, std::vector<std::pair<Interval, RhsFn>> segments) {
    if (dimension < 1) {
        throw InvalidArgumentError("system dimension must be positive");
    }
    if (segments.empty()) {
        throw InvalidArgumentError("piecewise system needs at least one segment");
    }
    for (std::size_t i = 0; i + 1 < segments.size(); ++i) {
        if (segments[i].first.hi != segments[i + 1].first.lo) {
            throw InvalidArgumentError("segments must be contiguous: segment " + std::to_string(i) +
                                       " ends at " + fmt(segments[i].first.hi) + " but segment " +
                                       std::to_string(i + 1) + " starts at " +
                                       fmt(segments[i + 1].first.lo));
        }
    }
    OdeSystem sys;
    sys.dim_ = dimension;
    sys.bounded_ = true;
    for (auto& [span, rhs] : segments) {
        if (!rhs) {
            throw InvalidArgumentError("rhs must be callable");
        }
        sys.segments_.push_back(Segment{span, std::move(rhs)});
    }
    return sys;
}

Interval OdeSystem::segment_span(std::size_t i) const {
    const auto& span = segments_.at(i).span;
    if (!span) {
        throw InvalidArgumentError("segment has unbounded span");
    }
    return Interval(span->lo - shift_, span->hi - shift_);
}

std::vector<double> OdeSystem::break_points_within(const Interval& iv) const {
    std::vector<double> points;
    if (!bounded_) {
        return points;
    }
    for (std::size_t i = 0; i + 1 < segments_.size(); ++i) {
        const double b = segments_[i].span->hi - shift_;
        if (b > iv.lo && b < iv.hi) {
            points.push_back(b);
        }
    }
    return points;
}

bool OdeSystem::covers(const Interval& iv) const {
    if (!bounded_) {
        return true;
    }
    const double lo = segments_.front().span->lo - shift_;
    const double hi = segments_.back().span->hi - shift_;
    return lo <= iv.lo && iv.hi <= hi;
}

std::size_t OdeSystem::segment_containing(double x) const {
    if (!bounded_) {
        return 0;
    }
    const double xb = x + shift_;
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        if (segments_[i].span->lo <= xb && xb <= segments_[i].span->hi) {
            return i;
        }
    }
    throw InvalidArgumentError("x = " + fmt(x) + " lies outside the system's covered range");
}

std::size_t OdeSystem::segment_for_span(double x_lo, double x_hi) const {
    if (!bounded_) {
        return 0;
    }
    return segment_containing(0.5 * (x_lo + x_hi));
}

void OdeSystem::eval(double x, std::span<const double> y, std::span<double> out) const {
    eval_in_segment(segment_containing(x), x, y, out);
}

void OdeSystem::eval_in_segment(std::size_t seg, double x, std::span<const double> y,
                                std::span<double> out) const {
    segments_.at(seg).rhs(x + shift_, y, out);
}

std::vector<double> OdeSystem::eval(double x, std::span<const double> y) const {
    std::vector<double> out(static_cast<std::size_t>(dim_));
    eval(x, y, out);
    return out;
}

OdeSystem OdeSystem::with_argument_shift(double delta) const {
    if (!std::isfinite(delta)) {
        throw InvalidArgumentError("argument shift must be finite");
    }
    OdeSystem sys = *this;
    sys.shift_ = shift_ + delta;
    return sys;
}

AvpProblem::AvpProblem(OdeSystem system, Interval interval, BoundaryCondition condition)
    : system_(std::move(system)), interval_(interval), condition_(std::move(condition)) {
    if (!interval_.contains(condition_.x)) {
        throw InvalidArgumentError("condition point " + fmt(condition_.x) +
                                   " lies outside the interval [" + fmt(interval_.lo) + ", " +
                                   fmt(interval_.hi) + "]");
    }
    if (static_cast<int>(condition_.y.size()) != system_.dimension()) {
        throw InvalidArgumentError("condition value has " + std::to_string(condition_.y.size()) +
                                   " components, system dimension is " +
                                   std::to_string(system_.dimension()));
    }
    for (double v : condition_.y) {
        if (!std::isfinite(v)) {
            throw InvalidArgumentError("condition value components must be finite");
        }
    }
    if (!system_.covers(interval_)) {
        throw InvalidArgumentError("system segments do not cover the problem interval");
    }
}

ProblemClass classify_problem(const AvpProblem& problem) {
    const double b = problem.condition().x;
    if (b == problem.interval().lo) {
        return ProblemClass::Initial;
    }
    if (b == problem.interval().hi) {
        return ProblemClass::Final;
    }
    return ProblemClass::InnerInterval;
}

UniformGrid make_uniform_grid(const Interval& interval, double h_requested) {
    const double length = interval.length();
    if (!(h_requested > 0.0) || !std::isfinite(h_requested)) {
        throw InvalidArgumentError("invalid step: h must be positive, got " + fmt(h_requested));
    }
    if (h_requested > length) {
        throw InvalidArgumentError("invalid step: h = " + fmt(h_requested) +
                                   " exceeds interval length " + fmt(length));
    }
    // Ties (length/h exactly halfway) round away from zero.
    std::int64_t count = std::llround(length / h_requested);
    count = std::max<std::int64_t>(count, 1);
    return UniformGrid{length / static_cast<double>(count), count};
}

Trajectory::Trajectory(std::vector<double> xs, std::vector<std::vector<double>> ys,
                       std::string method_name, double step, Direction direction)
    : xs_(std::move(xs)),
      ys_(std::move(ys)),
      method_name_(std::move(method_name)),
      step_(step),
      direction_(direction) {
    if (xs_.empty() || xs_.size() != ys_.size()) {
        throw InvalidArgumentError("trajectory needs matching, nonempty xs and ys");
    }
    if (!(step_ > 0.0)) {
        throw InvalidArgumentError("trajectory step must be positive");
    }
    const std::size_t n = ys_.front().size();
    for (const auto& y : ys_) {
        if (y.size() != n) {
            throw InvalidArgumentError("trajectory samples must share one dimension");
        }
    }
    for (std::size_t i = 0; i + 1 < xs_.size(); ++i) {
        const bool ok = direction_ == Direction::Forward ? xs_[i] < xs_[i + 1] : xs_[i] > xs_[i + 1];
        if (!ok) {
            throw InvalidArgumentError("trajectory xs must be strictly monotone in its direction");
        }
    }
}

Trajectory Trajectory::reversed() const {
    std::vector<double> xs(xs_.rbegin(), xs_.rend());
    std::vector<std::vector<double>> ys(ys_.rbegin(), ys_.rend());
    const Direction flipped =
        direction_ == Direction::Forward ? Direction::Backward : Direction::Forward;
    return Trajectory(std::move(xs), std::move(ys), method_name_, step_, flipped);
}

}  // namespace avpode
