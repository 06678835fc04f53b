#include "avpode/avp.hpp"

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

LegInfo leg_info(const Trajectory& t) {
    return LegInfo{t.direction(), t.step(), static_cast<std::int64_t>(t.size()) - 1};
}

template <typename Fn>
Trajectory run_leg(const char* tag, Fn&& fn) {
    try {
        return fn();
    } catch (const NumericOverflowError& e) {
        throw NumericOverflowError(std::string(tag) + ": " + e.what());
    } catch (const GridMisalignmentError& e) {
        throw GridMisalignmentError(std::string(tag) + ": " + e.what());
    }
}

}  // namespace

AvpSolution solve_avp(const AvpProblem& problem, const MethodSpec& method, double h) {
    const ProblemClass cls = classify_problem(problem);
    const OdeSystem& system = problem.system();
    const BoundaryCondition& cond = problem.condition();
    const Interval& iv = problem.interval();

    if (cls == ProblemClass::Final) {
        Trajectory back = run_leg("backward leg", [&] {
            return integrate_leg(system, cond.x, cond.y, iv.lo, method, h);
        });
        const LegInfo info = leg_info(back);
        Trajectory merged = back.reversed();
        const std::size_t boundary = merged.size() - 1;
        return AvpSolution{std::move(merged), boundary, cls, {info}};
    }
    if (cls == ProblemClass::Initial) {
        Trajectory fwd = run_leg("forward leg", [&] {
            return integrate_leg(system, cond.x, cond.y, iv.hi, method, h);
        });
        const LegInfo info = leg_info(fwd);
        return AvpSolution{std::move(fwd), 0, cls, {info}};
    }

    Trajectory back = run_leg("backward leg", [&] {
        return integrate_leg(system, cond.x, cond.y, iv.lo, method, h);
    });
    Trajectory fwd = run_leg("forward leg", [&] {
        return integrate_leg(system, cond.x, cond.y, iv.hi, method, h);
    });

    // One merged trajectory in increasing x; the condition sample is shared,
    // stored once at the junction.
    std::vector<double> xs;
    std::vector<std::vector<double>> ys;
    xs.reserve(back.size() + fwd.size() - 1);
    ys.reserve(back.size() + fwd.size() - 1);
    for (std::size_t i = back.size(); i-- > 0;) {
        xs.push_back(back.x(i));
        ys.push_back(back.y(i));
    }
    for (std::size_t i = 1; i < fwd.size(); ++i) {
        xs.push_back(fwd.x(i));
        ys.push_back(fwd.y(i));
    }
    const std::size_t boundary = back.size() - 1;
    Trajectory merged(std::move(xs), std::move(ys), method.name(), h, Direction::Forward);
    return AvpSolution{std::move(merged), boundary, cls, {leg_info(back), leg_info(fwd)}};
}

AvpSolution solve_piecewise_avp(const AvpProblem& problem, const MethodSpec& method, double h) {
    if (classify_problem(problem) != ProblemClass::InnerInterval) {
        throw InvalidArgumentError("piecewise split requires an inner-interval condition");
    }
    const OdeSystem& system = problem.system();
    if (!system.bounded() || system.segment_count() != 2) {
        throw InvalidArgumentError("piecewise split requires exactly two segments");
    }
    const double junction = system.segment_span(0).hi;
    if (junction != problem.condition().x) {
        throw InvalidArgumentError("segment break at x = " + fmt(junction) +
                                   " must equal the condition point x = " +
                                   fmt(problem.condition().x));
    }
    return solve_avp(problem, method, h);
}

}  // namespace avpode
