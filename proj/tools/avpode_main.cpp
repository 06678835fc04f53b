#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "avpode/analysis.hpp"
#include "avpode/avp.hpp"
#include "avpode/core.hpp"
#include "avpode/expr.hpp"
#include "avpode/reduction.hpp"
#include "avpode/steppers.hpp"

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFileError = 1;
constexpr int kExitNumericError = 2;
constexpr int kExitGridError = 3;
constexpr int kExitTableMismatch = 4;

avpode::MethodSpec method_from_name(const std::string& name, double tol, int iters) {
    if (name == "explicit-euler") return avpode::MethodSpec::explicit_euler();
    if (name == "euler-pc") return avpode::MethodSpec::euler_pc(tol, iters);
    if (name == "trapezoid-pc") return avpode::MethodSpec::trapezoid_pc(tol, iters);
    if (name == "rk4") return avpode::MethodSpec::classical_rk4();
    throw avpode::InvalidArgumentError("unknown method '" + name + "'");
}

avpode::MethodKind kind_from_name(const std::string& name) {
    if (name == "explicit-euler") return avpode::MethodKind::ExplicitEuler;
    if (name == "euler-pc") return avpode::MethodKind::EulerPC;
    if (name == "trapezoid-pc") return avpode::MethodKind::TrapezoidPC;
    if (name == "rk4") return avpode::MethodKind::ClassicalRk4;
    throw avpode::InvalidArgumentError("unknown method '" + name + "'");
}

std::vector<std::string> split_list(const std::vector<std::string>& values) {
    std::vector<std::string> out;
    for (const auto& v : values) {
        std::size_t start = 0;
        while (start <= v.size()) {
            const std::size_t semi = v.find(';', start);
            if (semi == std::string::npos) {
                out.push_back(v.substr(start));
                break;
            }
            out.push_back(v.substr(start, semi - start));
            start = semi + 1;
        }
    }
    return out;
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw avpode::InvalidArgumentError("cannot open problem file '" + path + "'");
    }
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw avpode::InvalidArgumentError("problem file '" + path + "': " + e.what());
    }
}

avpode::OdeSystem system_from_file(const json& doc, int dimension) {
    const bool has_rhs = doc.contains("rhs");
    const bool has_segments = doc.contains("segments");
    const bool has_high_order = doc.contains("high_order");
    if (has_rhs + has_segments + has_high_order != 1) {
        throw avpode::InvalidArgumentError(
            "problem file needs exactly one of: rhs, segments, high_order");
    }

    if (has_rhs) {
        return avpode::compile_system(doc.at("rhs").get<std::vector<std::string>>(), dimension);
    }

    if (has_segments) {
        std::vector<std::pair<avpode::Interval, avpode::RhsFn>> segments;
        for (const auto& seg : doc.at("segments")) {
            const avpode::Interval span(seg.at("from").get<double>(), seg.at("to").get<double>());
            avpode::OdeSystem compiled = avpode::compile_system(
                seg.at("rhs").get<std::vector<std::string>>(), dimension);
            segments.emplace_back(span, [compiled](double x, std::span<const double> y,
                                                   std::span<double> out) {
                compiled.eval(x, y, out);
            });
        }
        return avpode::OdeSystem::piecewise(dimension, std::move(segments));
    }

    const json& ho = doc.at("high_order");
    const int order = ho.at("order").get<int>();
    if (order != dimension) {
        throw avpode::InvalidArgumentError("high_order.order must equal dimension");
    }
    avpode::HighOrderPolyOde high;
    high.order = order;
    high.leading_coefficient = ho.value("leading", 1.0);
    for (const auto& text : ho.at("coefficients").get<std::vector<std::string>>()) {
        avpode::Expression e = avpode::parse_expression(text);
        high.coefficients.push_back(
            [e](double x, std::span<const double> state) { return e.evaluate(x, state); });
    }
    {
        avpode::Expression e = avpode::parse_expression(ho.at("forcing").get<std::string>());
        if (avpode::max_state_index(e) != 0) {
            throw avpode::InvalidArgumentError("high_order.forcing may only reference x");
        }
        high.forcing = [e](double x) { return e.evaluate(x, {}); };
    }
    return avpode::reduce_to_first_order(high);
}

avpode::AvpProblem problem_from_file(const json& doc) {
    const int dimension = doc.at("dimension").get<int>();
    avpode::OdeSystem system = system_from_file(doc, dimension);
    if (doc.contains("delay")) {
        system = avpode::shift_delay(system, avpode::DelaySpec{doc.at("delay").at("T").get<double>()});
    }
    const avpode::Interval interval(doc.at("interval").at("a").get<double>(),
                                    doc.at("interval").at("c").get<double>());
    avpode::BoundaryCondition condition{doc.at("condition").at("x").get<double>(),
                                        doc.at("condition").at("y").get<std::vector<double>>()};
    return avpode::AvpProblem(std::move(system), interval, std::move(condition));
}

std::vector<avpode::Expression> parse_exact_expressions(const std::vector<std::string>& raw,
                                                        int dimension) {
    const std::vector<std::string> texts = split_list(raw);
    if (static_cast<int>(texts.size()) != dimension) {
        throw avpode::InvalidArgumentError("--exact needs one expression per component (" +
                                           std::to_string(dimension) + "), got " +
                                           std::to_string(texts.size()));
    }
    std::vector<avpode::Expression> exprs;
    for (const auto& t : texts) {
        avpode::Expression e = avpode::parse_expression(t);
        if (avpode::max_state_index(e) != 0) {
            throw avpode::InvalidArgumentError("--exact expressions may only reference x");
        }
        exprs.push_back(std::move(e));
    }
    return exprs;
}

const char* class_name(avpode::ProblemClass cls) {
    switch (cls) {
        case avpode::ProblemClass::Initial: return "initial";
        case avpode::ProblemClass::Final: return "final";
        case avpode::ProblemClass::InnerInterval: return "inner-interval";
    }
    return "?";
}

const char* direction_name(avpode::Direction d) {
    return d == avpode::Direction::Forward ? "forward" : "backward";
}

int run_solve(const std::string& file, const std::string& method_name, double h,
              const std::string& format, const std::vector<std::string>& exact_raw, double tol,
              int iters) {
    const json doc = load_json_file(file);
    const avpode::AvpProblem problem = problem_from_file(doc);
    const avpode::MethodSpec method = method_from_name(method_name, tol, iters);
    const int n = problem.system().dimension();

    std::vector<avpode::Expression> exact;
    if (!exact_raw.empty()) {
        exact = parse_exact_expressions(exact_raw, n);
    }

    const avpode::AvpSolution solution = avpode::solve_avp(problem, method, h);
    const avpode::Trajectory& traj = solution.trajectory;

    if (format == "csv") {
        std::printf("# method=%s h_requested=%.17g class=%s\n", method.name().c_str(), h,
                    class_name(solution.problem_class));
        for (const auto& leg : solution.legs) {
            std::printf("# leg %s: h=%.17g steps=%lld\n", direction_name(leg.direction), leg.h,
                        static_cast<long long>(leg.steps));
        }
        std::string header = "x";
        for (int c = 1; c <= n; ++c) header += ",y" + std::to_string(c);
        if (!exact.empty()) {
            for (int c = 1; c <= n; ++c) header += ",exact" + std::to_string(c);
            for (int c = 1; c <= n; ++c) header += ",err" + std::to_string(c);
        }
        std::printf("%s\n", header.c_str());
        for (std::size_t i = 0; i < traj.size(); ++i) {
            std::printf("%.6f", traj.x(i));
            for (double v : traj.y(i)) std::printf(",%.6f", v);
            if (!exact.empty()) {
                std::vector<double> ex(static_cast<std::size_t>(n));
                for (int c = 0; c < n; ++c) ex[static_cast<std::size_t>(c)] = exact[static_cast<std::size_t>(c)].evaluate(traj.x(i), {});
                for (double v : ex) std::printf(",%.6f", v);
                for (int c = 0; c < n; ++c) {
                    std::printf(",%.6f", std::fabs(traj.y(i)[static_cast<std::size_t>(c)] - ex[static_cast<std::size_t>(c)]));
                }
            }
            std::printf("\n");
        }
        return kExitOk;
    }

    json meta{{"method", method.name()},
              {"h_requested", h},
              {"class", class_name(solution.problem_class)},
              {"boundary_index", solution.leg_boundary_index}};
    json legs = json::array();
    for (const auto& leg : solution.legs) {
        legs.push_back({{"direction", direction_name(leg.direction)}, {"h", leg.h},
                        {"steps", leg.steps}});
    }
    meta["legs"] = legs;
    json rows = json::array();
    for (std::size_t i = 0; i < traj.size(); ++i) {
        json row{{"x", traj.x(i)}, {"y", traj.y(i)}};
        if (!exact.empty()) {
            std::vector<double> ex(static_cast<std::size_t>(n)), err(static_cast<std::size_t>(n));
            for (int c = 0; c < n; ++c) {
                ex[static_cast<std::size_t>(c)] = exact[static_cast<std::size_t>(c)].evaluate(traj.x(i), {});
                err[static_cast<std::size_t>(c)] = std::fabs(traj.y(i)[static_cast<std::size_t>(c)] - ex[static_cast<std::size_t>(c)]);
            }
            row["exact"] = ex;
            row["abs_error"] = err;
        }
        rows.push_back(std::move(row));
    }
    const json out{{"meta", std::move(meta)}, {"rows", std::move(rows)}};
    std::printf("%s\n", out.dump(2).c_str());
    return kExitOk;
}

void print_report(const std::string& what, const std::string& method,
                  const avpode::AnalysisReport& report, const std::string& verdict_true,
                  const std::string& verdict_false) {
    const std::string verdict = report.satisfied ? verdict_true : verdict_false;
    std::printf("%s %s: %s with lhs=%.12g rhs=%.12g -> %s\n", what.c_str(), method.c_str(),
                report.inequality_text.c_str(), report.lhs, report.rhs, verdict.c_str());
    const json j{{"what", what},          {"method", method}, {"lhs", report.lhs},
                 {"rhs", report.rhs},     {"inequality", report.inequality_text},
                 {"satisfied", report.satisfied}, {"verdict", verdict}};
    std::printf("%s\n", j.dump().c_str());
}

int run_analyze_stability(const std::string& method, double h, double lambda) {
    const auto report = avpode::stability_condition(kind_from_name(method), h, lambda);
    print_report("stability", method, report, "STABLE", "UNSTABLE");
    return kExitOk;
}

int run_analyze_convergence(const std::string& method, double h, double L) {
    const auto report = avpode::convergence_condition(kind_from_name(method), h, L);
    print_report("convergence", method, report, "CONVERGENT", "NOT-CONVERGENT");
    return kExitOk;
}

int run_analyze_lipschitz(const std::vector<std::string>& rhs_raw, int dim, double x_lo,
                          double x_hi, const std::vector<double>& y_lo,
                          const std::vector<double>& y_hi, int samples) {
    const avpode::OdeSystem system = avpode::compile_system(split_list(rhs_raw), dim);
    if (static_cast<int>(y_lo.size()) != dim || static_cast<int>(y_hi.size()) != dim) {
        throw avpode::InvalidArgumentError("--y-lo/--y-hi need one value per component");
    }
    std::vector<std::pair<double, double>> box;
    for (int c = 0; c < dim; ++c) box.emplace_back(y_lo[static_cast<std::size_t>(c)], y_hi[static_cast<std::size_t>(c)]);
    const auto est = avpode::estimate_lipschitz(system, avpode::Interval(x_lo, x_hi), box, samples);
    std::printf("lipschitz: L=%.12g over %lld samples\n", est.L,
                static_cast<long long>(est.sample_count));
    const json j{{"what", "lipschitz"}, {"L", est.L}, {"samples", est.sample_count}};
    std::printf("%s\n", j.dump().c_str());
    return kExitOk;
}

int run_analyze_order(const std::string& file, const std::string& method_name, double h,
                      const std::vector<std::string>& exact_raw, double tol, int iters) {
    const json doc = load_json_file(file);
    const avpode::AvpProblem problem = problem_from_file(doc);
    const int n = problem.system().dimension();
    const std::vector<avpode::Expression> exact = parse_exact_expressions(exact_raw, n);
    const avpode::MethodSpec method = method_from_name(method_name, tol, iters);

    // Initial problems measure the forward leg, everything else the backward
    // leg from the condition point down to a.
    const auto& cond = problem.condition();
    const double to_x = classify_problem(problem) == avpode::ProblemClass::Initial
                            ? problem.interval().hi
                            : problem.interval().lo;
    const auto exact_fn = [&exact, n](double x) {
        std::vector<double> out(static_cast<std::size_t>(n));
        for (int c = 0; c < n; ++c) out[static_cast<std::size_t>(c)] = exact[static_cast<std::size_t>(c)].evaluate(x, {});
        return out;
    };
    const double order =
        avpode::observed_order(problem.system(), exact_fn, cond.x, cond.y, to_x, method, h);
    std::printf("order %s: observed=%.6f\n", method_name.c_str(), order);
    const json j{{"what", "order"}, {"method", method_name}, {"observed", order}};
    std::printf("%s\n", j.dump().c_str());
    return kExitOk;
}

int run_table1() {
    const avpode::OdeSystem system = avpode::OdeSystem::single(
        1, [](double x, std::span<const double> y, std::span<double> out) {
            out[0] = y[0] - 2.0 * x / y[0];
        });
    const double sqrt3 = 1.7320508075688772;
    const avpode::MethodSpec rk4 = avpode::MethodSpec::classical_rk4();

    const avpode::Trajectory forward =
        avpode::integrate_leg(system, 0.0, std::vector<double>{1.0}, 1.0, rk4, 0.1);
    const avpode::Trajectory backward =
        avpode::integrate_leg(system, 1.0, std::vector<double>{sqrt3}, 0.0, rk4, 0.1);

    // Reference six-decimal values of the h = 0.1 experiment.
    static const double kForward[11] = {1.000000, 1.095446, 1.183217, 1.264912, 1.341642, 1.414216,
                                        1.483242, 1.549196, 1.612455, 1.673325, 1.732056};
    static const double kBackward[11] = {1.732051, 1.673320, 1.612451, 1.549193, 1.483239,
                                         1.414213, 1.341640, 1.264910, 1.183215, 1.095444,
                                         0.999999};

    std::vector<std::string> mismatches;
    const auto check_block = [&mismatches](const char* title, const avpode::Trajectory& traj,
                                           const double* reference) {
        std::printf("%s\n", title);
        std::printf("x_n,y_n,abs_error\n");
        for (std::size_t i = 0; i < traj.size(); ++i) {
            const double x = traj.x(i);
            const double y = traj.y(i)[0];
            const double err = std::fabs(y - std::sqrt(1.0 + 2.0 * x));
            std::printf("%.1f,%.6f,%.6f\n", x, y, err);
            if (std::fabs(y - reference[i]) > 2e-6) {
                std::ostringstream os;
                os << title << " row x=" << x << ": y=" << y << " deviates from reference "
                   << reference[i];
                mismatches.push_back(os.str());
            }
            if (err > 1e-5) {
                std::ostringstream os;
                os << title << " row x=" << x << ": error " << err << " exceeds 1e-5";
                mismatches.push_back(os.str());
            }
        }
    };
    check_block("initial value problem (forward rk4, h=0.1)", forward, kForward);
    check_block("final value problem (backward rk4, h=0.1)", backward, kBackward);

    if (!mismatches.empty()) {
        for (const auto& m : mismatches) std::fprintf(stderr, "table1: %s\n", m.c_str());
        return kExitTableMismatch;
    }
    std::printf("table1: PASS\n");
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"One-step ODE solvers for value conditions anywhere in the interval"};
    app.require_subcommand(1);
    app.set_help_flag("--help", "Print help");

    // solve
    auto* solve = app.add_subcommand("solve", "Solve a problem file and print the trajectory");
    solve->set_help_flag("--help", "Print help");
    std::string solve_file;
    std::string solve_method = "rk4";
    double solve_h = 0.1;
    std::string solve_format = "csv";
    std::vector<std::string> solve_exact;
    double corrector_tol = 1e-12;
    int corrector_iters = 50;
    solve->add_option("file", solve_file, "Problem file (JSON)")->required();
    solve->add_option("--method", solve_method, "Scheme")
        ->check(CLI::IsMember({"explicit-euler", "euler-pc", "trapezoid-pc", "rk4"}));
    solve->add_option("--h", solve_h, "Requested step size")->required();
    solve->add_option("--format", solve_format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));
    solve->add_option("--exact", solve_exact,
                      "Exact solution expression(s) in x, one per component ("
                      "repeat or separate with ';')");
    solve->add_option("--corrector-tol", corrector_tol, "Corrector tolerance (PC kinds)");
    solve->add_option("--corrector-iters", corrector_iters, "Corrector max iterations (PC kinds)");

    // analyze
    auto* analyze = app.add_subcommand("analyze", "Convergence/stability/Lipschitz/order queries");
    analyze->set_help_flag("--help", "Print help");
    std::string what;
    std::string an_method = "rk4";
    double an_h = 0.1;
    double an_lambda = 1.0;
    double an_L = 1.0;
    std::vector<std::string> an_rhs;
    int an_dim = 1;
    double an_x_lo = 0.0, an_x_hi = 1.0;
    std::vector<double> an_y_lo, an_y_hi;
    int an_samples = 9;
    std::string an_problem;
    std::vector<std::string> an_exact;
    analyze->add_option("--what", what, "Query")
        ->required()
        ->check(CLI::IsMember({"stability", "convergence", "lipschitz", "order"}));
    analyze->add_option("--method", an_method, "Scheme")
        ->check(CLI::IsMember({"explicit-euler", "euler-pc", "trapezoid-pc", "rk4"}));
    analyze->add_option("--h", an_h, "Step size");
    analyze->add_option("--lambda", an_lambda, "Test-model rate (stability)");
    analyze->add_option("--L", an_L, "Lipschitz constant (convergence)");
    analyze->add_option("--rhs", an_rhs, "Rhs expression(s) (lipschitz)");
    analyze->add_option("--dim", an_dim, "System dimension (lipschitz)");
    analyze->add_option("--x-lo", an_x_lo, "x range lower bound (lipschitz)");
    analyze->add_option("--x-hi", an_x_hi, "x range upper bound (lipschitz)");
    analyze->add_option("--y-lo", an_y_lo, "y box lower bounds (lipschitz)");
    analyze->add_option("--y-hi", an_y_hi, "y box upper bounds (lipschitz)");
    analyze->add_option("--samples", an_samples, "Samples per axis (lipschitz)");
    analyze->add_option("--problem", an_problem, "Problem file (order)");
    analyze->add_option("--exact", an_exact, "Exact solution expression(s) (order)");
    analyze->add_option("--corrector-tol", corrector_tol, "Corrector tolerance (PC kinds)");
    analyze->add_option("--corrector-iters", corrector_iters, "Corrector max iterations (PC kinds)");

    // table1
    app.add_subcommand("table1", "Reproduce the built-in forward/backward rk4 experiment");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // Normalize CLI11's exit codes onto the 0/1 taxonomy.
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitFileError;
    }

    try {
        if (solve->parsed()) {
            return run_solve(solve_file, solve_method, solve_h, solve_format, solve_exact,
                             corrector_tol, corrector_iters);
        }
        if (analyze->parsed()) {
            if (what == "stability") return run_analyze_stability(an_method, an_h, an_lambda);
            if (what == "convergence") return run_analyze_convergence(an_method, an_h, an_L);
            if (what == "lipschitz") {
                return run_analyze_lipschitz(an_rhs, an_dim, an_x_lo, an_x_hi, an_y_lo, an_y_hi,
                                             an_samples);
            }
            if (an_problem.empty() || an_exact.empty()) {
                throw avpode::InvalidArgumentError("--what order needs --problem and --exact");
            }
            return run_analyze_order(an_problem, an_method, an_h, an_exact, corrector_tol,
                                     corrector_iters);
        }
        return run_table1();
    } catch (const avpode::NumericOverflowError& e) {
        std::fprintf(stderr, "numeric failure: %s\n", e.what());
        return kExitNumericError;
    } catch (const avpode::GridMisalignmentError& e) {
        std::fprintf(stderr, "grid misalignment: %s\n", e.what());
        return kExitGridError;
    } catch (const avpode::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitFileError;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitFileError;
    }
}
