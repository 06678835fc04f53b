#include <doctest.h>

#include <cmath>
#include <random>

#include "avpode/reduction.hpp"
#include "test_helpers.hpp"

using namespace avpode;
using namespace avpode_tests;

namespace {

StateCoefficientFn constant_coeff(double c) {
    return [c](double, std::span<const double>) { return c; };
}

ForcingFn constant_forcing(double c) {
    return [c](double) { return c; };
}

// 4 y''' + 3 y'' + 2 y' = -1, the three-state fixture with
// s3' = (-3 s3 - 2 s2 - 1) / 4.
HighOrderPolyOde three_state_fixture() {
    HighOrderPolyOde high;
    high.order = 3;
    high.leading_coefficient = 4.0;
    high.coefficients = {constant_coeff(0.0), constant_coeff(2.0), constant_coeff(3.0)};
    high.forcing = constant_forcing(-1.0);
    return high;
}

}  // namespace

TEST_CASE("harmonic oscillator reduces to the companion system") {
    HighOrderPolyOde high;
    high.order = 2;
    high.leading_coefficient = 1.0;
    high.coefficients = {constant_coeff(1.0), constant_coeff(0.0)};
    high.forcing = constant_forcing(0.0);

    const OdeSystem sys = reduce_to_first_order(high);
    REQUIRE(sys.dimension() == 2);
    const auto out = sys.eval(0.3, std::vector<double>{0.7, -1.2});
    CHECK(out[0] == -1.2);
    CHECK(out[1] == -0.7);
}

TEST_CASE("three-state fixture reproduces its displayed state system exactly") {
    const OdeSystem sys = reduce_to_first_order(three_state_fixture());
    REQUIRE(sys.dimension() == 3);
    for (double s1 : {0.0, 0.3, -1.5}) {
        for (double s2 : {0.0, -0.7, 2.2}) {
            for (double s3 : {0.0, 1.1, -0.4}) {
                const auto out = sys.eval(0.5, std::vector<double>{s1, s2, s3});
                CHECK(out[0] == s2);
                CHECK(out[1] == s3);
                CHECK(out[2] == (-1.0 - (0.0 * s1 + 2.0 * s2 + 3.0 * s3)) / 4.0);
            }
        }
    }
}

TEST_CASE("order one degenerates to a scalar equation") {
    HighOrderPolyOde high;
    high.order = 1;
    high.leading_coefficient = 2.0;
    high.coefficients = {constant_coeff(0.0)};
    high.forcing = [](double x) { return std::sin(x); };
    const OdeSystem sys = reduce_to_first_order(high);
    REQUIRE(sys.dimension() == 1);
    CHECK(sys.eval(0.6, std::vector<double>{9.0})[0] == std::sin(0.6) / 2.0);
}

TEST_CASE("reduction validation") {
    HighOrderPolyOde bad = three_state_fixture();
    bad.leading_coefficient = 0.0;
    CHECK_THROWS_AS(reduce_to_first_order(bad), InvalidArgumentError);

    HighOrderPolyOde short_coeffs = three_state_fixture();
    short_coeffs.coefficients.pop_back();
    CHECK_THROWS_AS(reduce_to_first_order(short_coeffs), InvalidArgumentError);
}

TEST_CASE("solve_high_order_fvp first step matches a hand-rolled stage computation") {
    const HighOrderPolyOde high = three_state_fixture();
    const Trajectory traj = solve_high_order_fvp(high, std::vector<double>{0.0, 0.0, 0.0},
                                                 Interval(0.0, 1.0), MethodSpec::classical_rk4(),
                                                 0.1);
    REQUIRE(traj.size() == 11);
    CHECK(traj.direction() == Direction::Backward);
    CHECK(traj.x(1) == doctest::Approx(0.9));

    // Independent one-step oracle for the 3-dim system, written long-hand.
    const double h = 0.1;
    auto rhs = [](const std::array<double, 3>& s) {
        return std::array<double, 3>{s[1], s[2], (-3.0 * s[2] - 2.0 * s[1] - 1.0) / 4.0};
    };
    const std::array<double, 3> y1{0.0, 0.0, 0.0};
    const auto k1 = rhs(y1);
    std::array<double, 3> a2{};
    for (int j = 0; j < 3; ++j) a2[j] = y1[j] - 0.5 * h * k1[j];
    const auto k2 = rhs(a2);
    std::array<double, 3> a3{};
    for (int j = 0; j < 3; ++j) a3[j] = y1[j] - 0.5 * h * k2[j];
    const auto k3 = rhs(a3);
    std::array<double, 3> a4{};
    for (int j = 0; j < 3; ++j) a4[j] = y1[j] - h * k3[j];
    const auto k4 = rhs(a4);
    std::array<double, 3> expected{};
    for (int j = 0; j < 3; ++j) {
        expected[j] = y1[j] - (h / 6.0) * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    }
    for (int j = 0; j < 3; ++j) {
        CHECK(traj.y(1)[j] == doctest::Approx(expected[j]).epsilon(1e-14));
    }
}

TEST_CASE("y'' = 0 recovers the exact line") {
    HighOrderPolyOde high;
    high.order = 2;
    high.leading_coefficient = 1.0;
    high.coefficients = {constant_coeff(0.0), constant_coeff(0.0)};
    high.forcing = constant_forcing(0.0);
    const Trajectory traj = solve_high_order_fvp(high, std::vector<double>{1.0, 2.0},
                                                 Interval(0.0, 1.0), MethodSpec::classical_rk4(),
                                                 0.1);
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const double x = traj.x(i);
        CHECK(std::fabs(traj.y(i)[0] - (1.0 + 2.0 * (x - 1.0))) <= 1e-12);
        CHECK(std::fabs(traj.y(i)[1] - 2.0) <= 1e-12);
    }
}

TEST_CASE("zero data yields the zero trajectory") {
    HighOrderPolyOde high;
    high.order = 2;
    high.leading_coefficient = 3.0;
    high.coefficients = {constant_coeff(1.0), constant_coeff(2.0)};
    high.forcing = constant_forcing(0.0);
    const Trajectory traj = solve_high_order_fvp(high, std::vector<double>{0.0, 0.0},
                                                 Interval(0.0, 1.0), MethodSpec::classical_rk4(),
                                                 0.1);
    for (std::size_t i = 0; i < traj.size(); ++i) {
        CHECK(traj.y(i)[0] == 0.0);
        CHECK(traj.y(i)[1] == 0.0);
    }
}

TEST_CASE("reduction round-trip reconstructs the forcing") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> val(-3.0, 3.0);
    for (int trial = 0; trial < 200; ++trial) {
        const int order = 1 + static_cast<int>(rng() % 4);
        HighOrderPolyOde high;
        high.order = order;
        high.leading_coefficient = val(rng);
        if (std::fabs(high.leading_coefficient) < 0.1) high.leading_coefficient = 1.5;
        std::vector<double> cs;
        for (int i = 0; i < order; ++i) cs.push_back(val(rng));
        for (int i = 0; i < order; ++i) {
            const double c = cs[static_cast<std::size_t>(i)];
            high.coefficients.push_back(
                [c](double x, std::span<const double>) { return c * (1.0 + 0.1 * x); });
        }
        const double f0 = val(rng);
        high.forcing = [f0](double x) { return f0 + x; };

        const OdeSystem sys = reduce_to_first_order(high);
        std::vector<double> state(static_cast<std::size_t>(order));
        for (auto& s : state) s = val(rng);
        const double x = val(rng);
        const auto out = sys.eval(x, state);

        double acc = 0.0;
        for (int i = 0; i < order; ++i) {
            acc += cs[static_cast<std::size_t>(i)] * (1.0 + 0.1 * x) * state[static_cast<std::size_t>(i)];
        }
        const double reconstructed = out[static_cast<std::size_t>(order) - 1] * high.leading_coefficient + acc;
        const double forcing = f0 + x;
        const double scale = std::max({std::fabs(forcing), std::fabs(acc), 1.0});
        CHECK(std::fabs(reconstructed - forcing) <=
              4.0 * std::numeric_limits<double>::epsilon() * scale);
    }
}

TEST_CASE("linear reductions stay linear in the state") {
    HighOrderPolyOde high;
    high.order = 3;
    high.leading_coefficient = 2.0;
    high.coefficients = {constant_coeff(0.5), constant_coeff(-1.0), constant_coeff(2.0)};
    high.forcing = constant_forcing(0.0);
    const OdeSystem sys = reduce_to_first_order(high);

    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> val(-2.0, 2.0);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> u(3), v(3), w(3);
        const double a = val(rng), b = val(rng);
        for (int j = 0; j < 3; ++j) {
            u[j] = val(rng);
            v[j] = val(rng);
            w[j] = a * u[j] + b * v[j];
        }
        const auto fu = sys.eval(0.4, u);
        const auto fv = sys.eval(0.4, v);
        const auto fw = sys.eval(0.4, w);
        for (int j = 0; j < 3; ++j) {
            CHECK(fw[j] == doctest::Approx(a * fu[j] + b * fv[j]).epsilon(1e-12));
        }
    }
}

TEST_CASE("delay shifts evaluate the base rhs at x + T") {
    SUBCASE("zero shift is the identity") {
        const OdeSystem base = sqrt_system();
        const OdeSystem shifted = shift_delay(base, DelaySpec{0.0});
        for (double x : {0.0, 0.4, 1.0}) {
            CHECK(shifted.eval(x, std::vector<double>{1.3})[0] ==
                  base.eval(x, std::vector<double>{1.3})[0]);
        }
    }

    SUBCASE("f = x shifted by 1 returns x + 1") {
        const OdeSystem base = OdeSystem::single(
            1, [](double x, std::span<const double>, std::span<double> out) { out[0] = x; });
        const OdeSystem shifted = shift_delay(base, DelaySpec{1.0});
        CHECK(shifted.eval(2.0, std::vector<double>{0.0})[0] == 3.0);
    }

    SUBCASE("shifted sqrt problem solves on a translated axis") {
        // y' = f(x + T, y) over [a-T, c-T] is the base problem in u = x + T.
        const double T = 0.5;
        const OdeSystem shifted = shift_delay(sqrt_system(), DelaySpec{T});
        const Trajectory shifted_traj =
            integrate_leg(shifted, 1.0 - T, std::vector<double>{kSqrt3}, 0.0 - T,
                          MethodSpec::classical_rk4(), 0.1);
        const Trajectory base_traj = integrate_leg(sqrt_system(), 1.0, std::vector<double>{kSqrt3},
                                                   0.0, MethodSpec::classical_rk4(), 0.1);
        REQUIRE(shifted_traj.size() == base_traj.size());
        for (std::size_t i = 0; i < base_traj.size(); ++i) {
            CHECK(shifted_traj.x(i) == doctest::Approx(base_traj.x(i) - T).epsilon(1e-14));
            CHECK(shifted_traj.y(i)[0] ==
                  doctest::Approx(base_traj.y(i)[0]).epsilon(1e-12));
        }
    }

    SUBCASE("shift composition is additive and exact") {
        std::mt19937_64 rng(17);
        std::uniform_real_distribution<double> val(-5.0, 5.0);
        const OdeSystem base = sqrt_system();
        for (int trial = 0; trial < 200; ++trial) {
            const double t1 = val(rng), t2 = val(rng);
            const OdeSystem chained = shift_delay(shift_delay(base, DelaySpec{t1}), DelaySpec{t2});
            const OdeSystem direct = shift_delay(base, DelaySpec{t1 + t2});
            const double x = val(rng);
            const std::vector<double> y{1.0 + std::fabs(val(rng))};
            CHECK(chained.eval(x, y)[0] == direct.eval(x, y)[0]);
        }
    }
}
