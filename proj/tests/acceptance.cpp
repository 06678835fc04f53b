// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Tolerances are pinned in code next to each check.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "avpode/analysis.hpp"
#include "avpode/avp.hpp"
#include "avpode/expr.hpp"
#include "avpode/reduction.hpp"
#include "avpode/steppers.hpp"
#include "expr_corpus.hpp"
#include "test_helpers.hpp"

using namespace avpode;
using namespace avpode_tests;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            if (detail.tellp() > 0) detail << "; ";
            detail << what;
        }
    }
};

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

// ---------------------------------------------------------------- criteria

Outcome criterion_1_backward_reference() {
    Outcome out;
    const auto start = Clock::now();
    const Trajectory traj = integrate_leg(sqrt_system(), 1.0, std::vector<double>{kSqrt3}, 0.0,
                                          MethodSpec::classical_rk4(), 0.1);
    const double elapsed = ms_since(start);
    out.require(traj.size() == 11, "expected 11 samples");
    double max_ref_dev = 0.0, max_exact_err = 0.0;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        max_ref_dev = std::max(max_ref_dev, std::fabs(traj.y(i)[0] - backward_reference()[i]));
        max_exact_err = std::max(max_exact_err, std::fabs(traj.y(i)[0] - sqrt_exact(traj.x(i))));
    }
    out.require(max_ref_dev <= 2e-6, "reference deviation " + fmt(max_ref_dev) + " > 2e-6");
    out.require(max_exact_err <= 1.5e-6, "exact error " + fmt(max_exact_err) + " > 1.5e-6");
    out.require(elapsed < 1000.0, "runtime " + fmt(elapsed) + " ms >= 1 s");
    out.detail << "ref dev " << fmt(max_ref_dev) << ", exact err " << fmt(max_exact_err) << ", "
               << fmt(elapsed) << " ms";
    return out;
}

Outcome criterion_2_forward_reference() {
    Outcome out;
    const Trajectory traj = integrate_leg(sqrt_system(), 0.0, std::vector<double>{1.0}, 1.0,
                                          MethodSpec::classical_rk4(), 0.1);
    double max_ref_dev = 0.0;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        max_ref_dev = std::max(max_ref_dev, std::fabs(traj.y(i)[0] - forward_reference()[i]));
    }
    const double final_err = std::fabs(traj.y(10)[0] - sqrt_exact(1.0));
    out.require(max_ref_dev <= 2e-6, "reference deviation " + fmt(max_ref_dev) + " > 2e-6");
    out.require(final_err <= 7e-6, "final-row error " + fmt(final_err) + " > 7e-6");
    out.detail << "ref dev " << fmt(max_ref_dev) << ", final err " << fmt(final_err);
    return out;
}

Outcome criterion_3_observed_orders() {
    Outcome out;
    const auto exact = [](double x) { return std::vector<double>{sqrt_exact(x)}; };
    const std::vector<double> top{kSqrt3};
    const std::vector<double> bottom{1.0};

    const double rk4_back = observed_order(sqrt_system(), exact, 1.0, top, 0.0,
                                           MethodSpec::classical_rk4(), 0.1);
    const double rk4_fwd = observed_order(sqrt_system(), exact, 0.0, bottom, 1.0,
                                          MethodSpec::classical_rk4(), 0.1);
    const double euler = observed_order(sqrt_system(), exact, 1.0, top, 0.0,
                                        MethodSpec::explicit_euler(), 0.1);
    const double trap = observed_order(sqrt_system(), exact, 1.0, top, 0.0,
                                       MethodSpec::trapezoid_pc(1e-13, 80), 0.1);
    out.require(rk4_back >= 3.5 && rk4_back <= 4.5, "rk4 backward order " + fmt(rk4_back));
    out.require(rk4_fwd >= 3.5 && rk4_fwd <= 4.5, "rk4 forward order " + fmt(rk4_fwd));
    out.require(euler >= 0.7 && euler <= 1.3, "euler order " + fmt(euler));
    out.require(trap >= 1.6 && trap <= 2.4, "trapezoid order " + fmt(trap));
    out.detail << "rk4 " << fmt(rk4_back) << "/" << fmt(rk4_fwd) << ", euler " << fmt(euler)
               << ", trapezoid " << fmt(trap);
    return out;
}

Outcome criterion_4_euler_stability_boundary() {
    Outcome out;

    // h*lambda = 0.5 (h = 0.5, lambda = 1): the computed decay tracks
    // exp(x - 20) within a factor of 10 of the unit seed.
    const Trajectory stable = integrate_leg(linear_system(1.0), 20.0, std::vector<double>{1.0},
                                            0.0, MethodSpec::explicit_euler(), 0.5);
    double max_err = 0.0;
    for (std::size_t i = 0; i < stable.size(); ++i) {
        max_err = std::max(max_err, std::fabs(stable.y(i)[0] - std::exp(stable.x(i) - 20.0)));
    }
    out.require(max_err <= 10.0, "stable-run error " + fmt(max_err) + " > 10");
    out.require(stability_condition(MethodKind::ExplicitEuler, 0.5, 1.0).satisfied,
                "verdict for h*lambda = 0.5 should be stable");

    // h*lambda = 2.5 (h = 0.5, lambda = 5, 40 steps): the iterate magnitude
    // blows past 1e6 before the leg ends.
    const Trajectory unstable = integrate_leg(linear_system(5.0), 20.0, std::vector<double>{1.0},
                                              0.0, MethodSpec::explicit_euler(), 0.5);
    std::size_t crossing = unstable.size();
    for (std::size_t i = 0; i < unstable.size(); ++i) {
        if (std::fabs(unstable.y(i)[0]) > 1e6) {
            crossing = i;
            break;
        }
    }
    out.require(crossing < unstable.size() - 1,
                "iterate never exceeded 1e6 before the leg end");
    out.require(!stability_condition(MethodKind::ExplicitEuler, 0.5, 5.0).satisfied,
                "verdict for h*lambda = 2.5 should be unstable");
    out.detail << "stable max err " << fmt(max_err) << ", blowup at step " << crossing << "/"
               << unstable.size() - 1;
    return out;
}

Outcome criterion_5_trapezoid_unconditional_stability() {
    Outcome out;
    // lambda = 7, h = 10: the trapezoid target formula's amplification on the
    // linear model, applied 50 times.
    const double R = linear_amplification(MethodKind::TrapezoidPC, 70.0);
    out.require(stability_condition(MethodKind::TrapezoidPC, 10.0, 7.0).satisfied,
                "trapezoid verdict should be stable");
    double y = 1.0;
    double prev_mag = 1.0;
    bool bounded = true, monotone = true, alternating = true;
    for (int k = 1; k <= 50; ++k) {
        const double next = R * y;
        if (std::fabs(next) > 1.0 + 1e-12) bounded = false;
        if (std::fabs(next) > prev_mag + 1e-12) monotone = false;
        if (next * y >= 0.0) alternating = false;
        prev_mag = std::fabs(next);
        y = next;
    }
    out.require(bounded, "sequence not bounded");
    out.require(monotone, "|y_k| increased beyond the 1e-12 tolerance");
    out.require(alternating, "sequence did not alternate in sign");
    out.detail << "R = " << fmt(R) << ", |y_50| = " << fmt(std::fabs(y));
    return out;
}

Outcome criterion_6_rk4_stability_root() {
    Outcome out;
    double lo = 2.0, hi = 4.0;
    for (int i = 0; i < 100; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (std::fabs(linear_amplification(MethodKind::ClassicalRk4, mid)) < 1.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    const double root = 0.5 * (lo + hi);
    out.require(std::fabs(root - 2.7853) < 1e-3,
                "root " + fmt(root) + " not within 1e-3 of 2.7853");
    out.detail << "z* = " << fmt(root);
    return out;
}

Outcome criterion_7_corrector_contraction() {
    Outcome out;
    // h*lambda = 0.5 on f = y.
    const OdeSystem sys = linear_system(1.0);
    const auto measure = [](const StepRecord& rec) {
        std::vector<double> ratios;
        for (std::size_t s = 0; s + 1 < rec.correction_deltas.size(); ++s) {
            if (rec.correction_deltas[s] > 1e-9) {
                ratios.push_back(rec.correction_deltas[s + 1] / rec.correction_deltas[s]);
            }
        }
        return ratios;
    };

    const StepRecord euler = step_euler_pc_backward(1.0, std::vector<double>{1.0}, 0.5, sys,
                                                    1e-12, 100);
    for (double r : measure(euler)) {
        out.require(std::fabs(r - 0.5) <= 0.05, "euler-pc ratio " + fmt(r) + " off 0.5 by >10%");
    }

    const StepRecord trap = step_trapezoid_pc_backward(1.0, std::vector<double>{1.0}, 0.5, sys,
                                                       1e-12, 100);
    for (double r : measure(trap)) {
        out.require(std::fabs(r - 0.25) <= 0.025,
                    "trapezoid-pc ratio " + fmt(r) + " off 0.25 by >10%");
    }
    out.detail << "euler ratios ~0.5 (" << measure(euler).size() << "), trapezoid ~0.25 ("
               << measure(trap).size() << ")";
    return out;
}

Outcome criterion_8_avp_split() {
    Outcome out;
    const AvpProblem problem(sqrt_system(), Interval(0.0, 1.0),
                             BoundaryCondition{0.5, {std::sqrt(2.0)}});
    const AvpSolution sol = solve_avp(problem, MethodSpec::classical_rk4(), 0.1);
    const double err0 = std::fabs(sol.trajectory.y(0)[0] - 1.0);
    const double err1 = std::fabs(sol.trajectory.y(sol.trajectory.size() - 1)[0] - std::sqrt(3.0));
    out.require(sol.problem_class == ProblemClass::InnerInterval, "expected inner-interval class");
    out.require(err0 <= 1e-5, "error at x=0 " + fmt(err0) + " > 1e-5");
    out.require(err1 <= 1e-5, "error at x=1 " + fmt(err1) + " > 1e-5");
    out.detail << "err(0) " << fmt(err0) << ", err(1) " << fmt(err1);
    return out;
}

Outcome criterion_9_reduction() {
    Outcome out;
    // Three-state fixture: s3' = (-3*s3 - 2*s2 - 1)/4, s2' = s3, s1' = s2.
    HighOrderPolyOde fixture;
    fixture.order = 3;
    fixture.leading_coefficient = 4.0;
    fixture.coefficients = {[](double, std::span<const double>) { return 0.0; },
                            [](double, std::span<const double>) { return 2.0; },
                            [](double, std::span<const double>) { return 3.0; }};
    fixture.forcing = [](double) { return -1.0; };
    const OdeSystem sys = reduce_to_first_order(fixture);
    bool exact = sys.dimension() == 3;
    for (double s1 : {0.0, 1.0, -2.0}) {
        for (double s2 : {0.0, 0.5, -1.5}) {
            for (double s3 : {0.0, 2.0, -0.25}) {
                const auto rhs = sys.eval(0.0, std::vector<double>{s1, s2, s3});
                exact = exact && rhs[0] == s2 && rhs[1] == s3 &&
                        rhs[2] == (-1.0 - (0.0 * s1 + 2.0 * s2 + 3.0 * s3)) / 4.0;
            }
        }
    }
    out.require(exact, "fixture state system not reproduced exactly");

    HighOrderPolyOde line;
    line.order = 2;
    line.leading_coefficient = 1.0;
    line.coefficients = {[](double, std::span<const double>) { return 0.0; },
                         [](double, std::span<const double>) { return 0.0; }};
    line.forcing = [](double) { return 0.0; };
    const Trajectory traj = solve_high_order_fvp(line, std::vector<double>{1.0, 2.0},
                                                 Interval(0.0, 1.0), MethodSpec::classical_rk4(),
                                                 0.1);
    double max_err = 0.0;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        max_err = std::max(max_err,
                           std::fabs(traj.y(i)[0] - (1.0 + 2.0 * (traj.x(i) - 1.0))));
    }
    out.require(max_err <= 1e-12, "line recovery error " + fmt(max_err) + " > 1e-12");
    out.detail << "line err " << fmt(max_err);
    return out;
}

Outcome criterion_10_parser_corpus() {
    Outcome out;
    std::size_t count = 0;
    for (const auto& entry : expression_corpus()) {
        const Expression e = parse_expression(entry.text);
        const double got = e.evaluate(entry.x, entry.y);
        const double up = std::nextafter(entry.expected, std::numeric_limits<double>::infinity());
        const double down = std::nextafter(entry.expected, -std::numeric_limits<double>::infinity());
        const bool ok = got == entry.expected || (got >= down && got <= up);
        out.require(ok, std::string("'") + entry.text + "' off by more than 1 ulp");
        ++count;
    }
    out.require(count >= 30, "corpus smaller than 30 entries");

    for (const auto& bad : malformed_corpus()) {
        bool annotated = false;
        try {
            parse_expression(bad.text);
        } catch (const ParseError& e) {
            annotated = e.offset == bad.offset && !e.expected.empty();
        }
        out.require(annotated, std::string("'") + bad.text + "' not rejected at offset " +
                                   std::to_string(bad.offset));
    }
    out.detail << count << " expressions, " << malformed_corpus().size() << " malformed cases";
    return out;
}

// --------------------------------------------------- criterion 11 property suites

bool suite_linear_exactness(std::mt19937_64& rng, std::string& why) {
    std::uniform_real_distribution<double> lam(0.05, 2.0);
    std::uniform_real_distribution<double> step(0.01, 0.3);
    std::uniform_real_distribution<double> seed(0.5, 2.0);
    const RkTableau classical = RkTableau::classical_rk4();
    for (int trial = 0; trial < 1000; ++trial) {
        const double lambda = lam(rng);
        const double h = step(rng);
        const int k = 1 + static_cast<int>(rng() % 40);
        const double y0 = seed(rng);
        const double to_x = 1.0 - static_cast<double>(k) * h;
        // Request the exact per-leg step so the grid keeps k steps.
        const double h_req = (1.0 - to_x) / static_cast<double>(k);
        const OdeSystem sys = linear_system(lambda);

        const int scheme = trial % 3;
        MethodSpec method = scheme == 0   ? MethodSpec::explicit_euler()
                            : scheme == 1 ? MethodSpec::classical_rk4()
                                          : MethodSpec::general_rk(classical);
        const Trajectory traj =
            integrate_leg(sys, 1.0, std::vector<double>{y0}, to_x, method, h_req);
        const double z = traj.step() * lambda;
        const double R = scheme == 0 ? 1.0 - z : linear_amplification(MethodKind::ClassicalRk4, z);
        double expected = y0;
        for (std::size_t i = 0; i < traj.size(); ++i) {
            const double scale = std::max(std::fabs(expected), 1e-30);
            if (std::fabs(traj.y(i)[0] - expected) > 1e-12 * scale) {
                why = "k-step output drifted from R(h*lambda)^k at trial " + std::to_string(trial);
                return false;
            }
            expected *= R;
        }
    }
    return true;
}

bool suite_near_inversion(std::mt19937_64& rng, std::string& why) {
    std::uniform_real_distribution<double> seed(1.55, 1.95);
    std::uniform_real_distribution<double> step(0.06, 0.1);
    const MethodSpec rk4 = MethodSpec::classical_rk4();
    const OdeSystem sys = sqrt_system();
    const auto round_trip = [&](double y0, double h) {
        const Trajectory back = integrate_leg(sys, 1.0, std::vector<double>{y0}, 0.0, rk4, h);
        const Trajectory fwd = integrate_leg(sys, 0.0, back.y(back.size() - 1), 1.0, rk4, h);
        return std::fabs(fwd.y(fwd.size() - 1)[0] - y0);
    };
    for (int trial = 0; trial < 1000; ++trial) {
        const double y0 = seed(rng);
        const double h = step(rng) / static_cast<double>(1 << (rng() % 3));
        const UniformGrid grid = make_uniform_grid(Interval(0.0, 1.0), h);
        const double r1 = round_trip(y0, grid.h);
        const double r2 = round_trip(y0, grid.h / 2.0);
        const double ratio = r1 / r2;
        if (!(ratio >= 24.0 && ratio <= 40.0)) {
            why = "round-trip ratio " + fmt(ratio) + " outside [24, 40] at trial " +
                  std::to_string(trial);
            return false;
        }
    }
    return true;
}

bool suite_decrement_lipschitz(std::mt19937_64& rng, std::string& why) {
    // Equality of the fourth-order chain holds on f = lambda*y with lambda < 0
    // (L = |lambda|), where every stage term carries the same sign.
    std::uniform_real_distribution<double> lam(-3.0, -0.05);
    std::uniform_real_distribution<double> step(0.01, 0.5);
    std::uniform_real_distribution<double> val(-2.0, 2.0);
    const MethodSpec rk4 = MethodSpec::classical_rk4();
    for (int trial = 0; trial < 1000; ++trial) {
        const double lambda = lam(rng);
        const double L = -lambda;
        const double h = step(rng);
        double y1 = val(rng), y2 = val(rng);
        if (y1 == y2) y2 += 0.5;
        const OdeSystem sys = linear_system(lambda);
        const auto p1 = decrement_function(rk4, 0.3, std::vector<double>{y1}, h, sys);
        const auto p2 = decrement_function(rk4, 0.3, std::vector<double>{y2}, h, sys);
        const double measured = std::fabs(p1[0] - p2[0]) / std::fabs(y1 - y2);
        const double z = h * L;
        const double chain = L * (1.0 + z / 2.0 + z * z / 6.0 + z * z * z / 24.0);
        if (std::fabs(measured - chain) > 1e-10 * chain) {
            why = "measured ratio " + fmt(measured) + " != chain " + fmt(chain) + " at trial " +
                  std::to_string(trial);
            return false;
        }
    }
    return true;
}

bool suite_tableau_equivalence(std::mt19937_64& rng, std::string& why) {
    std::uniform_real_distribution<double> val(-2.0, 2.0);
    std::uniform_real_distribution<double> step(0.01, 0.4);
    const RkTableau classical = RkTableau::classical_rk4();
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 3);
        // Random affine field: f_i = a_i + b_i x + sum_j c_ij y_j.
        std::vector<double> a(static_cast<std::size_t>(n)), b(static_cast<std::size_t>(n));
        std::vector<std::vector<double>> c(static_cast<std::size_t>(n),
                                           std::vector<double>(static_cast<std::size_t>(n)));
        for (int i = 0; i < n; ++i) {
            a[i] = val(rng);
            b[i] = val(rng);
            for (int j = 0; j < n; ++j) c[i][j] = val(rng);
        }
        const OdeSystem sys = OdeSystem::single(
            n, [a, b, c, n](double x, std::span<const double> y, std::span<double> out) {
                for (int i = 0; i < n; ++i) {
                    double s = a[static_cast<std::size_t>(i)] + b[static_cast<std::size_t>(i)] * x;
                    for (int j = 0; j < n; ++j) {
                        s += c[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] *
                             y[static_cast<std::size_t>(j)];
                    }
                    out[static_cast<std::size_t>(i)] = s;
                }
            });
        std::vector<double> y(static_cast<std::size_t>(n));
        for (auto& v : y) v = val(rng);
        const double x = val(rng);
        const double h = step(rng);
        const auto direct = trial % 2 == 0 ? step_rk4_backward(x, y, h, sys)
                                           : step_rk4_forward(x, y, h, sys);
        const auto general = trial % 2 == 0 ? step_general_rk_backward(x, y, h, sys, classical)
                                            : step_general_rk_forward(x, y, h, sys, classical);
        for (int i = 0; i < n; ++i) {
            if (direct[static_cast<std::size_t>(i)] != general[static_cast<std::size_t>(i)]) {
                why = "general tableau diverged from rk4 bitwise at trial " + std::to_string(trial);
                return false;
            }
        }
    }
    return true;
}

bool suite_shift_composition(std::mt19937_64& rng, std::string& why) {
    std::uniform_real_distribution<double> val(-5.0, 5.0);
    const OdeSystem base = OdeSystem::single(
        1, [](double x, std::span<const double> y, std::span<double> out) {
            out[0] = std::sin(x) + x * y[0];
        });
    for (int trial = 0; trial < 1000; ++trial) {
        const double t1 = val(rng), t2 = val(rng);
        const OdeSystem chained = shift_delay(shift_delay(base, DelaySpec{t1}), DelaySpec{t2});
        const OdeSystem direct = shift_delay(base, DelaySpec{t1 + t2});
        const double x = val(rng);
        const std::vector<double> y{val(rng)};
        if (chained.eval(x, y)[0] != direct.eval(x, y)[0]) {
            why = "composed shift diverged from the direct shift at trial " + std::to_string(trial);
            return false;
        }
    }
    return true;
}

bool suite_reduction_round_trip(std::mt19937_64& rng, std::string& why) {
    std::uniform_real_distribution<double> val(-3.0, 3.0);
    for (int trial = 0; trial < 1000; ++trial) {
        const int order = 1 + static_cast<int>(rng() % 4);
        std::vector<double> cs(static_cast<std::size_t>(order));
        for (auto& c : cs) c = val(rng);
        HighOrderPolyOde high;
        high.order = order;
        high.leading_coefficient = val(rng);
        if (std::fabs(high.leading_coefficient) < 0.1) high.leading_coefficient = 2.0;
        for (int i = 0; i < order; ++i) {
            const double c = cs[static_cast<std::size_t>(i)];
            high.coefficients.push_back(
                [c](double x, std::span<const double> s) { return c + 0.25 * x + 0.1 * s[0]; });
        }
        const double f0 = val(rng);
        high.forcing = [f0](double x) { return f0 * std::cos(x); };

        const OdeSystem sys = reduce_to_first_order(high);
        std::vector<double> state(static_cast<std::size_t>(order));
        for (auto& s : state) s = val(rng);
        const double x = val(rng);
        const auto rhs = sys.eval(x, state);
        for (int i = 0; i + 1 < order; ++i) {
            if (rhs[static_cast<std::size_t>(i)] != state[static_cast<std::size_t>(i) + 1]) {
                why = "chain equations broke at trial " + std::to_string(trial);
                return false;
            }
        }
        double acc = 0.0;
        for (int i = 0; i < order; ++i) {
            acc += (cs[static_cast<std::size_t>(i)] + 0.25 * x + 0.1 * state[0]) *
                   state[static_cast<std::size_t>(i)];
        }
        const double forcing = f0 * std::cos(x);
        const double recon =
            rhs[static_cast<std::size_t>(order) - 1] * high.leading_coefficient + acc;
        const double scale = std::max({std::fabs(forcing), std::fabs(acc), 1.0});
        if (std::fabs(recon - forcing) > 4.0 * std::numeric_limits<double>::epsilon() * scale) {
            why = "reconstruction off by " + fmt(std::fabs(recon - forcing)) + " at trial " +
                  std::to_string(trial);
            return false;
        }
    }
    return true;
}

Outcome criterion_11_property_suites() {
    Outcome out;
    const auto start = Clock::now();
    std::mt19937_64 rng(0xA5CADE);
    std::string why;
    out.require(suite_linear_exactness(rng, why), "linear exactness: " + why);
    out.require(suite_near_inversion(rng, why), "near-inversion: " + why);
    out.require(suite_decrement_lipschitz(rng, why), "decrement lipschitz: " + why);
    out.require(suite_tableau_equivalence(rng, why), "tableau equivalence: " + why);
    out.require(suite_shift_composition(rng, why), "shift composition: " + why);
    out.require(suite_reduction_round_trip(rng, why), "reduction round-trip: " + why);
    const double elapsed = ms_since(start);
    out.require(elapsed < 30000.0, "runtime " + fmt(elapsed) + " ms >= 30 s");
    out.detail << "6 suites x 1000 instances, " << fmt(elapsed) << " ms";
    return out;
}

}  // namespace

int main() {
    struct Entry {
        int id;
        const char* label;
        std::function<Outcome()> run;
    };
    const std::vector<Entry> criteria = {
        {1, "backward rk4 reference run", criterion_1_backward_reference},
        {2, "forward rk4 reference run", criterion_2_forward_reference},
        {3, "observed orders", criterion_3_observed_orders},
        {4, "explicit euler stability boundary", criterion_4_euler_stability_boundary},
        {5, "trapezoid unconditional stability", criterion_5_trapezoid_unconditional_stability},
        {6, "rk4 stability root", criterion_6_rk4_stability_root},
        {7, "corrector contraction ratios", criterion_7_corrector_contraction},
        {8, "inner-interval split", criterion_8_avp_split},
        {9, "companion-form reduction", criterion_9_reduction},
        {10, "expression corpus", criterion_10_parser_corpus},
        {11, "randomized property suites", criterion_11_property_suites},
    };

    int failures = 0;
    for (const auto& entry : criteria) {
        Outcome outcome;
        try {
            outcome = entry.run();
        } catch (const std::exception& e) {
            outcome.pass = false;
            outcome.detail << "exception: " << e.what();
        }
        if (!outcome.pass) ++failures;
        std::printf("%s %2d %s: %s\n", outcome.pass ? "PASS" : "FAIL", entry.id, entry.label,
                    outcome.detail.str().c_str());
    }
    if (failures > 0) {
        std::printf("acceptance: %d of %zu criteria failed\n", failures, criteria.size());
        return 1;
    }
    std::printf("acceptance: all %zu criteria passed\n", criteria.size());
    return 0;
}
