#pragma once

#include <cstdint>
#include <vector>

#include "avpode/core.hpp"
#include "avpode/steppers.hpp"

namespace avpode {

struct LegInfo {
    Direction direction = Direction::Forward;
    double h = 0.0;             // adjusted per-leg step
    std::int64_t steps = 0;
};

/// Solution of an arbitrary-value problem, normalized to increasing x.
/// The sample at leg_boundary_index is the boundary condition verbatim.
struct AvpSolution {
    Trajectory trajectory;
    std::size_t leg_boundary_index = 0;
    ProblemClass problem_class = ProblemClass::Initial;
    std::vector<LegInfo> legs;  // backward leg first when two are present
};

/// Splits the problem at the condition point: a backward leg towards a, a
/// forward leg towards c (either may be empty when the condition sits on an
/// endpoint), then merges into one increasing-x trajectory that shares the
/// condition sample. Per-leg steps are grid-adjusted independently.
AvpSolution solve_avp(const AvpProblem& problem, const MethodSpec& method, double h);

/// solve_avp for the two-segment configuration split exactly at the condition
/// point; each leg sees only its own segment's rhs, one-sided at the junction.
AvpSolution solve_piecewise_avp(const AvpProblem& problem, const MethodSpec& method, double h);

}  // namespace avpode
