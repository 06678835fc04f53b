#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "avpode/analysis.hpp"
#include "avpode/avp.hpp"
#include "avpode/core.hpp"
#include "avpode/expr.hpp"
#include "avpode/reduction.hpp"
#include "avpode/steppers.hpp"

namespace py = pybind11;
using namespace avpode;

namespace {

// Python callables work on lists; adapt them to the span-based contract.
using PyRhs = std::function<std::vector<double>(double, std::vector<double>)>;

RhsFn wrap_rhs(PyRhs f, int dimension) {
    return [f = std::move(f), dimension](double x, std::span<const double> y,
                                         std::span<double> out) {
        const std::vector<double> result = f(x, std::vector<double>(y.begin(), y.end()));
        if (static_cast<int>(result.size()) != dimension) {
            throw InvalidArgumentError("rhs callable returned " + std::to_string(result.size()) +
                                       " components, expected " + std::to_string(dimension));
        }
        std::copy(result.begin(), result.end(), out.begin());
    };
}

std::vector<double> to_vec(const std::vector<double>& v) { return v; }

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Backward and forward one-step ODE solvers for value conditions anywhere in the "
              "interval, with convergence/stability analyzers, companion-form reduction and an "
              "expression-based problem surface.";

    py::register_exception<NumericOverflowError>(m, "NumericOverflowError");
    py::register_exception<UnsupportedMethodError>(m, "UnsupportedMethodError");
    py::register_exception<GridMisalignmentError>(m, "GridMisalignmentError");
    py::register_exception<DegenerateOrderError>(m, "DegenerateOrderError");
    py::register_exception<ParseError>(m, "ParseError");
    py::register_exception<EvalError>(m, "EvalError");
    py::register_exception<InvalidArgumentError>(m, "InvalidArgumentError");

    py::class_<Interval>(m, "Interval")
        .def(py::init<double, double>(), py::arg("lo"), py::arg("hi"))
        .def_readonly("lo", &Interval::lo)
        .def_readonly("hi", &Interval::hi)
        .def("length", &Interval::length)
        .def("contains", &Interval::contains);

    py::enum_<Direction>(m, "Direction")
        .value("Forward", Direction::Forward)
        .value("Backward", Direction::Backward);

    py::enum_<ProblemClass>(m, "ProblemClass")
        .value("Initial", ProblemClass::Initial)
        .value("Final", ProblemClass::Final)
        .value("InnerInterval", ProblemClass::InnerInterval);

    py::class_<OdeSystem>(m, "OdeSystem")
        .def_static(
            "from_callable",
            [](int dimension, PyRhs f) {
                return OdeSystem::single(dimension, wrap_rhs(std::move(f), dimension));
            },
            py::arg("dimension"), py::arg("rhs"),
            "System from a callable (x, y_list) -> y_list.")
        .def_static(
            "from_expressions",
            [](const std::vector<std::string>& texts) {
                return compile_system(texts, static_cast<int>(texts.size()));
            },
            py::arg("expressions"), "System compiled from one rhs expression per component.")
        .def_static(
            "piecewise",
            [](int dimension, const std::vector<std::tuple<double, double, PyRhs>>& segments) {
                std::vector<std::pair<Interval, RhsFn>> segs;
                for (const auto& [lo, hi, f] : segments) {
                    segs.emplace_back(Interval(lo, hi), wrap_rhs(f, dimension));
                }
                return OdeSystem::piecewise(dimension, std::move(segs));
            },
            py::arg("dimension"), py::arg("segments"),
            "Piecewise system from (from, to, rhs) tuples.")
        .def_property_readonly("dimension", &OdeSystem::dimension)
        .def("eval",
             [](const OdeSystem& sys, double x, const std::vector<double>& y) {
                 return sys.eval(x, y);
             })
        .def("with_argument_shift", &OdeSystem::with_argument_shift);

    py::class_<BoundaryCondition>(m, "BoundaryCondition")
        .def(py::init([](double x, std::vector<double> y) {
                 return BoundaryCondition{x, std::move(y)};
             }),
             py::arg("x"), py::arg("y"))
        .def_readonly("x", &BoundaryCondition::x)
        .def_readonly("y", &BoundaryCondition::y);

    py::class_<AvpProblem>(m, "AvpProblem")
        .def(py::init<OdeSystem, Interval, BoundaryCondition>(), py::arg("system"),
             py::arg("interval"), py::arg("condition"))
        .def_property_readonly("system", &AvpProblem::system)
        .def_property_readonly("interval", &AvpProblem::interval)
        .def_property_readonly("condition", &AvpProblem::condition);

    m.def("classify_problem", &classify_problem);

    py::class_<UniformGrid>(m, "UniformGrid")
        .def_readonly("h", &UniformGrid::h)
        .def_readonly("count", &UniformGrid::count);
    m.def("make_uniform_grid", &make_uniform_grid, py::arg("interval"), py::arg("h_requested"));

    py::class_<Trajectory>(m, "Trajectory")
        .def_property_readonly("xs", [](const Trajectory& t) { return t.xs(); })
        .def_property_readonly("ys", [](const Trajectory& t) { return t.ys(); })
        .def_property_readonly("method_name", &Trajectory::method_name)
        .def_property_readonly("step", &Trajectory::step)
        .def_property_readonly("direction", &Trajectory::direction)
        .def("__len__", &Trajectory::size)
        .def("x", &Trajectory::x)
        .def("y", [](const Trajectory& t, std::size_t i) { return to_vec(t.y(i)); });

    py::class_<RkTableau>(m, "RkTableau")
        .def(py::init<std::vector<double>, std::vector<double>,
                      std::vector<std::vector<double>>>(),
             py::arg("weights"), py::arg("offsets"), py::arg("coefficients"))
        .def_static("classical_rk4", &RkTableau::classical_rk4)
        .def_property_readonly("stages", &RkTableau::stages)
        .def_property_readonly("weights", &RkTableau::weights)
        .def_property_readonly("offsets", &RkTableau::offsets)
        .def_property_readonly("coefficients", &RkTableau::coefficients);

    py::enum_<MethodKind>(m, "MethodKind")
        .value("ExplicitEuler", MethodKind::ExplicitEuler)
        .value("EulerPC", MethodKind::EulerPC)
        .value("TrapezoidPC", MethodKind::TrapezoidPC)
        .value("ClassicalRk4", MethodKind::ClassicalRk4)
        .value("GeneralRk", MethodKind::GeneralRk);

    py::class_<MethodSpec>(m, "MethodSpec")
        .def_static("explicit_euler", &MethodSpec::explicit_euler)
        .def_static("euler_pc", &MethodSpec::euler_pc, py::arg("tol") = 1e-12,
                    py::arg("max_iters") = 50)
        .def_static("trapezoid_pc", &MethodSpec::trapezoid_pc, py::arg("tol") = 1e-12,
                    py::arg("max_iters") = 50)
        .def_static("classical_rk4", &MethodSpec::classical_rk4)
        .def_static("general_rk", &MethodSpec::general_rk, py::arg("tableau"))
        .def_readonly("kind", &MethodSpec::kind)
        .def_readonly("corrector_tol", &MethodSpec::corrector_tol)
        .def_readonly("corrector_max_iters", &MethodSpec::corrector_max_iters)
        .def_property_readonly("name", &MethodSpec::name);

    py::class_<StepRecord>(m, "StepRecord")
        .def_readonly("y_out", &StepRecord::y_out)
        .def_readonly("corrector_iterations_used", &StepRecord::corrector_iterations_used)
        .def_readonly("converged", &StepRecord::converged)
        .def_readonly("correction_deltas", &StepRecord::correction_deltas);

    m.def("step_explicit_euler_backward",
          [](double x, std::vector<double> y, double h, const OdeSystem& s) {
              return step_explicit_euler_backward(x, y, h, s);
          });
    m.def("step_explicit_euler_forward",
          [](double x, std::vector<double> y, double h, const OdeSystem& s) {
              return step_explicit_euler_forward(x, y, h, s);
          });
    m.def("step_euler_pc_backward",
          [](double x, std::vector<double> y, double h, const OdeSystem& s, double tol,
             int iters) { return step_euler_pc_backward(x, y, h, s, tol, iters); },
          py::arg("x_next"), py::arg("y_next"), py::arg("h"), py::arg("system"),
          py::arg("tol") = 1e-12, py::arg("max_iters") = 50);
    m.def("step_euler_pc_forward",
          [](double x, std::vector<double> y, double h, const OdeSystem& s, double tol,
             int iters) { return step_euler_pc_forward(x, y, h, s, tol, iters); },
          py::arg("x_prev"), py::arg("y_prev"), py::arg("h"), py::arg("system"),
          py::arg("tol") = 1e-12, py::arg("max_iters") = 50);
    m.def("step_trapezoid_pc_backward",
          [](double x, std::vector<double> y, double h, const OdeSystem& s, double tol,
             int iters) { return step_trapezoid_pc_backward(x, y, h, s, tol, iters); },
          py::arg("x_next"), py::arg("y_next"), py::arg("h"), py::arg("system"),
          py::arg("tol") = 1e-12, py::arg("max_iters") = 50);
    m.def("step_trapezoid_pc_forward",
          [](double x, std::vector<double> y, double h, const OdeSystem& s, double tol,
             int iters) { return step_trapezoid_pc_forward(x, y, h, s, tol, iters); },
          py::arg("x_prev"), py::arg("y_prev"), py::arg("h"), py::arg("system"),
          py::arg("tol") = 1e-12, py::arg("max_iters") = 50);
    m.def("step_rk4_backward", [](double x, std::vector<double> y, double h, const OdeSystem& s) {
        return step_rk4_backward(x, y, h, s);
    });
    m.def("step_rk4_forward", [](double x, std::vector<double> y, double h, const OdeSystem& s) {
        return step_rk4_forward(x, y, h, s);
    });
    m.def("step_general_rk_backward",
          [](double x, std::vector<double> y, double h, const OdeSystem& s, const RkTableau& t) {
              return step_general_rk_backward(x, y, h, s, t);
          });
    m.def("step_general_rk_forward",
          [](double x, std::vector<double> y, double h, const OdeSystem& s, const RkTableau& t) {
              return step_general_rk_forward(x, y, h, s, t);
          });
    m.def("decrement_function",
          [](const MethodSpec& method, double x, std::vector<double> y, double h,
             const OdeSystem& s) { return decrement_function(method, x, y, h, s); });
    m.def("integrate_leg",
          [](const OdeSystem& s, double from_x, std::vector<double> from_y, double to_x,
             const MethodSpec& method, double h) {
              return integrate_leg(s, from_x, from_y, to_x, method, h);
          },
          py::arg("system"), py::arg("from_x"), py::arg("from_y"), py::arg("to_x"),
          py::arg("method"), py::arg("h"));

    py::class_<LipschitzEstimate>(m, "LipschitzEstimate")
        .def_readonly("L", &LipschitzEstimate::L)
        .def_readonly("sample_count", &LipschitzEstimate::sample_count);

    py::class_<AnalysisReport>(m, "AnalysisReport")
        .def_readonly("satisfied", &AnalysisReport::satisfied)
        .def_readonly("lhs", &AnalysisReport::lhs)
        .def_readonly("rhs", &AnalysisReport::rhs)
        .def_readonly("inequality_text", &AnalysisReport::inequality_text);

    m.def("estimate_lipschitz",
          [](const OdeSystem& s, const Interval& x_range,
             const std::vector<std::pair<double, double>>& y_box, int samples) {
              return estimate_lipschitz(s, x_range, y_box, samples);
          },
          py::arg("system"), py::arg("x_range"), py::arg("y_box"),
          py::arg("samples_per_axis") = 9);
    m.def("convergence_condition", &convergence_condition, py::arg("kind"), py::arg("h"),
          py::arg("L"), py::arg("tableau") = std::nullopt);
    m.def("stability_condition", &stability_condition, py::arg("kind"), py::arg("h"),
          py::arg("lambda_"), py::arg("tableau") = std::nullopt);
    m.def("linear_amplification", &linear_amplification, py::arg("kind"), py::arg("z"),
          py::arg("tableau") = std::nullopt);
    m.def("global_error_bound", &global_error_bound, py::arg("e0"), py::arg("L"), py::arg("C"),
          py::arg("h"), py::arg("p"), py::arg("T"));
    m.def("observed_order",
          [](const OdeSystem& s, const std::function<std::vector<double>(double)>& exact,
             double from_x, std::vector<double> from_y, double to_x, const MethodSpec& method,
             double h) { return observed_order(s, exact, from_x, from_y, to_x, method, h); },
          py::arg("system"), py::arg("exact"), py::arg("from_x"), py::arg("from_y"),
          py::arg("to_x"), py::arg("method"), py::arg("h"));

    py::class_<HighOrderPolyOde>(m, "HighOrderPolyOde")
        .def(py::init([](int order, double leading,
                         std::vector<std::function<double(double, std::vector<double>)>> coeffs,
                         std::function<double(double)> forcing) {
                 HighOrderPolyOde high;
                 high.order = order;
                 high.leading_coefficient = leading;
                 for (auto& c : coeffs) {
                     high.coefficients.push_back(
                         [c = std::move(c)](double x, std::span<const double> s) {
                             return c(x, std::vector<double>(s.begin(), s.end()));
                         });
                 }
                 high.forcing = std::move(forcing);
                 return high;
             }),
             py::arg("order"), py::arg("leading"), py::arg("coefficients"), py::arg("forcing"));

    m.def("reduce_to_first_order", &reduce_to_first_order);
    m.def("solve_high_order_fvp",
          [](const HighOrderPolyOde& high, std::vector<double> final_values,
             const Interval& interval, const MethodSpec& method, double h) {
              return solve_high_order_fvp(high, final_values, interval, method, h);
          },
          py::arg("high"), py::arg("final_values"), py::arg("interval"), py::arg("method"),
          py::arg("h"));

    py::class_<DelaySpec>(m, "DelaySpec")
        .def(py::init([](double T) { return DelaySpec{T}; }), py::arg("T"))
        .def_readonly("offset", &DelaySpec::offset);
    m.def("shift_delay", &shift_delay);

    py::class_<LegInfo>(m, "LegInfo")
        .def_readonly("direction", &LegInfo::direction)
        .def_readonly("h", &LegInfo::h)
        .def_readonly("steps", &LegInfo::steps);

    py::class_<AvpSolution>(m, "AvpSolution")
        .def_readonly("trajectory", &AvpSolution::trajectory)
        .def_readonly("leg_boundary_index", &AvpSolution::leg_boundary_index)
        .def_readonly("problem_class", &AvpSolution::problem_class)
        .def_readonly("legs", &AvpSolution::legs);

    m.def("solve_avp", &solve_avp, py::arg("problem"), py::arg("method"), py::arg("h"));
    m.def("solve_piecewise_avp", &solve_piecewise_avp, py::arg("problem"), py::arg("method"),
          py::arg("h"));

    py::class_<Expression>(m, "Expression")
        .def("evaluate",
             [](const Expression& e, double x, std::vector<double> y) { return e.evaluate(x, y); },
             py::arg("x"), py::arg("y") = std::vector<double>{})
        .def("__str__", &Expression::to_string)
        .def("structurally_equal", &Expression::structurally_equal);

    m.def("parse_expression", [](const std::string& text) { return parse_expression(text); });
    m.def("compile_system", &compile_system, py::arg("texts"), py::arg("dimension"));
    m.def("max_state_index", &max_state_index);

#ifdef AVPODE_VERSION
    m.attr("__version__") = AVPODE_VERSION;
#else
    m.attr("__version__") = "dev";
#endif
}
